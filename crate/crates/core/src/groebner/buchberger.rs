//! Buchberger's algorithm with the normal selection strategy.
//!
//! An optional truncation degree `k` computes a basis of `I + (x_1..x_n)^k`
//! without listing the monomials of degree `k`: every term of degree `>= k`
//! is dropped on the fly, and the S-pairs against those implicit monomial
//! generators are generated as truncated monomial multiples.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::sync::Arc;

use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder, Ring};
use crate::poly::Polynomial;

enum PairKind {
    Poly { i: usize, j: usize, lcm: Monomial },
    /// `trunc(u * g_i)` against the implicit monomials of degree `k`.
    Truncation { i: usize, u: Monomial },
}

/// `p[start..] - coef * q * g`, dropping terms of degree `>= trunc`.
fn sub_multiple<F: Field>(
    ring: &Arc<Ring>,
    p: &[(Monomial, F)],
    g: &Polynomial<F>,
    q: &Monomial,
    coef: &F,
    trunc: Option<u32>,
) -> Vec<(Monomial, F)> {
    let ord = ring.order();
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut i = 0;
    let gt = g.terms();
    let mut j = 0;
    let keep = |m: &Monomial| trunc.is_none_or(|k| m.degree() < k);
    let next_g = |j: &mut usize| -> Option<(Monomial, F)> {
        while *j < gt.len() {
            let (m, c) = &gt[*j];
            *j += 1;
            let mm = m.mul(q);
            if keep(&mm) {
                return Some((mm, -(coef.clone() * c.clone())));
            }
        }
        None
    };
    let mut cur_g = next_g(&mut j);
    while i < p.len() {
        match &cur_g {
            None => {
                out.extend(p[i..].iter().cloned());
                return out;
            }
            Some((gm, gc)) => match ord.compare(&p[i].0, gm) {
                std::cmp::Ordering::Greater => {
                    out.push(p[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((gm.clone(), gc.clone()));
                    cur_g = next_g(&mut j);
                }
                std::cmp::Ordering::Equal => {
                    let c = p[i].1.clone() + gc.clone();
                    if !c.is_zero() {
                        out.push((gm.clone(), c));
                    }
                    i += 1;
                    cur_g = next_g(&mut j);
                }
            },
        }
    }
    while let Some(t) = cur_g {
        out.push(t);
        cur_g = next_g(&mut j);
    }
    out
}

/// Fully reduces `f` modulo `basis` (which need not be a Gröbner basis).
/// Terms of degree `>= trunc` are discarded.
pub fn reduce<F: Field>(
    f: &Polynomial<F>,
    basis: &[Polynomial<F>],
    trunc: Option<u32>,
) -> Polynomial<F> {
    let ring = f.ring().clone();
    let mut p: Vec<(Monomial, F)> = match trunc {
        Some(k) => f.truncate_below(k).into_terms(),
        None => f.terms().to_vec(),
    };
    let lts: Vec<(&Monomial, &F)> = basis
        .iter()
        .filter_map(|g| g.leading_term().map(|(m, c)| (m, c)))
        .collect();
    let basis: Vec<&Polynomial<F>> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut rem: Vec<(Monomial, F)> = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let (m, c) = &p[start];
        let hit = lts.iter().position(|(lm, _)| lm.divides(m));
        match hit {
            Some(idx) => {
                let (lm, lc) = lts[idx];
                let q = lm.quotient_of(m).expect("divisibility checked");
                let coef = c.clone() / lc.clone();
                p = sub_multiple(&ring, &p[start..], basis[idx], &q, &coef, trunc);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Polynomial::from_sorted_terms(&ring, rem)
}

fn s_polynomial<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, lcm: &Monomial, trunc: Option<u32>) -> Polynomial<F> {
    let (lf, cf) = f.leading_term().expect("nonzero");
    let (lg, cg) = g.leading_term().expect("nonzero");
    let uf = lf.quotient_of(lcm).expect("lcm");
    let ug = lg.quotient_of(lcm).expect("lcm");
    let a = f.mul_term(&uf, &cg.clone());
    let b = g.mul_term(&ug, &cf.clone());
    let s = &a - &b;
    match trunc {
        Some(k) => s.truncate_below(k),
        None => s,
    }
}

struct State<F: Field> {
    basis: Vec<Polynomial<F>>,
    pairs: Vec<Option<PairKind>>,
    heap: BinaryHeap<Reverse<(u32, usize)>>,
    pending: HashSet<(usize, usize)>,
    trunc: Option<u32>,
}

impl<F: Field> State<F> {
    fn push(&mut self, deg: u32, kind: PairKind) {
        if let PairKind::Poly { i, j, .. } = &kind {
            self.pending.insert((*i, *j));
        }
        let id = self.pairs.len();
        self.pairs.push(Some(kind));
        self.heap.push(Reverse((deg, id)));
    }

    fn add(&mut self, h: Polynomial<F>) {
        let h = h.monic();
        let new = self.basis.len();
        let lt_h = h.leading_monomial().expect("nonzero").clone();
        for i in 0..new {
            let lt_i = self.basis[i].leading_monomial().expect("nonzero");
            if lt_i.is_coprime(&lt_h) {
                // product criterion
                continue;
            }
            let lcm = lt_i.lcm(&lt_h);
            if let Some(k) = self.trunc {
                if lcm.degree() >= k {
                    // both multiples vanish after truncation
                    continue;
                }
            }
            self.push(lcm.degree(), PairKind::Poly { i, j: new, lcm });
        }
        if let Some(k) = self.trunc {
            let d = lt_h.degree();
            let has_lower_tail = h.terms().iter().any(|(m, _)| m.degree() < d);
            if has_lower_tail && d < k {
                for u in Monomial::all_of_degree(lt_h.nvars(), k - d) {
                    self.push(k, PairKind::Truncation { i: new, u });
                }
            }
        }
        self.basis.push(h);
    }

    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial) -> bool {
        (0..self.basis.len()).any(|k| {
            k != i
                && k != j
                && self.basis[k].leading_monomial().expect("nonzero").divides(lcm)
                && !self.pending.contains(&(i.min(k), i.max(k)))
                && !self.pending.contains(&(j.min(k), j.max(k)))
        })
    }
}

/// Reduced Gröbner basis of `gens` (plus `(x)^trunc` when given), monic and
/// sorted by decreasing leading monomial. The unit ideal yields `[1]`.
/// With truncation the implicit monomials of degree `trunc` are not listed.
pub fn groebner_basis<F: Field>(
    ring: &Arc<Ring>,
    gens: &[Polynomial<F>],
    trunc: Option<u32>,
) -> Vec<Polynomial<F>> {
    if trunc == Some(0) {
        return vec![Polynomial::one(ring)];
    }
    assert!(
        trunc.is_some() || ring.order() != MonomialOrder::NegDegRevLex,
        "the local degree order needs a truncation degree"
    );
    let mut state = State {
        basis: Vec::new(),
        pairs: Vec::new(),
        heap: BinaryHeap::new(),
        pending: HashSet::new(),
        trunc,
    };
    let mut inputs: Vec<Polynomial<F>> = gens
        .iter()
        .map(|g| match trunc {
            Some(k) => g.truncate_below(k),
            None => g.clone(),
        })
        .filter(|g| !g.is_zero())
        .collect();
    // smaller leading monomials first keeps the initial reductions cheap
    let ord = ring.order();
    inputs.sort_by(|a, b| ord.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for g in inputs {
        let r = reduce(&g, &state.basis, trunc);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![Polynomial::one(ring)];
        }
        state.add(r);
    }

    while let Some(Reverse((_, id))) = state.heap.pop() {
        let kind = state.pairs[id].take().expect("pair consumed once");
        let s = match kind {
            PairKind::Poly { i, j, lcm } => {
                state.pending.remove(&(i, j));
                if state.chain_criterion(i, j, &lcm) {
                    continue;
                }
                s_polynomial(&state.basis[i], &state.basis[j], &lcm, trunc)
            }
            PairKind::Truncation { i, u } => {
                let k = trunc.expect("truncation pairs need a bound");
                state.basis[i].mul_term(&u, &F::one()).truncate_below(k)
            }
        };
        if s.is_zero() {
            continue;
        }
        let r = reduce(&s, &state.basis, trunc);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![Polynomial::one(ring)];
        }
        state.add(r);
    }

    interreduce(state.basis, trunc)
}

/// Minimalizes and tail-reduces a Gröbner basis.
pub fn interreduce<F: Field>(basis: Vec<Polynomial<F>>, trunc: Option<u32>) -> Vec<Polynomial<F>> {
    let mut keep: Vec<Polynomial<F>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lt = g.leading_monomial().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let lh = h.leading_monomial().expect("nonzero");
            j != idx && lh.divides(lt) && (lh != lt || j < idx)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Polynomial<F>> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (lm, lc) = keep[i].leading_term().expect("nonzero").clone();
        let tail = Polynomial::from_sorted_terms(keep[i].ring(), keep[i].terms()[1..].to_vec());
        let tail = reduce(&tail, &others, trunc);
        let mut terms = vec![(lm, lc)];
        terms.extend(tail.into_terms());
        out.push(Polynomial::from_sorted_terms(keep[i].ring(), terms).monic());
    }
    if let Some(first) = out.first() {
        let ord = first.ring().order();
        out.sort_by(|a, b| ord.compare(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    }
    out
}
