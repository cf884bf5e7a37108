//! Weak-(FC) conditions for an element against a family of ideals.
//!
//! All computations happen on lifts: an ideal of `A = k[x]/base` is held as
//! the ideal of `k[x]` containing `base`.

use std::collections::HashMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{AlgElement, AlgIdeal, Order};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::Ideal;
use crate::linalg::Span;
use crate::poly::Polynomial;

/// Exponent ranges for FC1: the checked slot runs over `slot`, every other
/// index over `0..=others_hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FcWindow {
    pub slot: (u32, u32),
    pub others_hi: u32,
}

impl Default for FcWindow {
    fn default() -> Self {
        FcWindow {
            slot: (2, 5),
            others_hi: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fc1Verdict {
    /// Every tuple of the window satisfied the intersection equality.
    Pass { tuples: usize },
    /// Exponents `(n_1..n_s)` where `(x) ∩ I^n I_i ≠ x I^n`.
    Fail { tuple: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fc2Verdict<F: Field> {
    Pass,
    /// A generator of `0 : x` outside `0 : I^∞`.
    Fail { witness: Polynomial<F> },
}

#[derive(Clone, Debug)]
pub struct FcReport<F: Field> {
    pub element: Polynomial<F>,
    pub slot: usize,
    pub window: FcWindow,
    pub fc1: Fc1Verdict,
    pub fc2: Fc2Verdict<F>,
}

impl<F: Field> FcReport<F> {
    pub fn passed(&self) -> bool {
        matches!(self.fc1, Fc1Verdict::Pass { .. }) && matches!(self.fc2, Fc2Verdict::Pass)
    }
}

impl fmt::Display for Fc1Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fc1Verdict::Pass { tuples } => write!(f, "PASS({tuples} tuples)"),
            Fc1Verdict::Fail { tuple } => write!(f, "FAIL({tuple:?})"),
        }
    }
}

impl<F: Field> fmt::Display for Fc2Verdict<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fc2Verdict::Pass => f.write_str("PASS"),
            Fc2Verdict::Fail { witness } => write!(f, "FAIL({witness})"),
        }
    }
}

/// Products of powers of a fixed family of lifts, modulo `base`.
struct ProductTable<F: Field> {
    base: Ideal<F>,
    /// `powers[g][e]` is the lift of `I_g^e`.
    powers: Vec<Vec<Ideal<F>>>,
}

impl<F: Field> ProductTable<F> {
    fn new(base: &Ideal<F>, groups: &[Ideal<F>], max_exp: &[u32]) -> Self {
        let powers = groups
            .par_iter()
            .zip(max_exp)
            .map(|(g, e)| {
                let mut out = vec![Ideal::unit(base.ring())];
                for _ in 0..*e {
                    let next = mod_base(base, &out.last().unwrap().product(g));
                    out.push(next);
                }
                out
            })
            .collect();
        ProductTable {
            base: base.clone(),
            powers,
        }
    }

    fn product(&self, exps: &[u32]) -> Ideal<F> {
        let mut acc = Ideal::unit(self.base.ring());
        for (g, e) in exps.iter().enumerate() {
            if *e > 0 {
                acc = mod_base(&self.base, &acc.product(&self.powers[g][*e as usize]));
            }
        }
        acc
    }
}

/// `a + base`, regenerated by a reduced Gröbner basis minus `base`.
fn mod_base<F: Field>(base: &Ideal<F>, a: &Ideal<F>) -> Ideal<F> {
    let sum = a.sum(base);
    let gb = sum.groebner();
    let mut gens: Vec<Polynomial<F>> = gb.iter().filter(|g| !base.contains(g)).cloned().collect();
    gens.extend(base.gens().iter().cloned());
    Ideal::from_gens_unchecked(base.ring(), gens)
}

/// `x·a + base`.
fn times_poly<F: Field>(base: &Ideal<F>, a: &Ideal<F>, x: &Polynomial<F>) -> Ideal<F> {
    let mut gens: Vec<Polynomial<F>> = a.gens().iter().map(|g| g * x).collect();
    gens.extend(base.gens().iter().cloned());
    Ideal::from_gens_unchecked(base.ring(), gens)
}

/// Checks FC1 and FC2 for `x` against lifts `ideals` of ideals of
/// `k[x]/base`, with `x` drawn from `ideals[slot]`. Equal ideals share
/// one exponent.
pub fn fc_check_lifted<F: Field>(
    base: &Ideal<F>,
    x: &Polynomial<F>,
    ideals: &[Ideal<F>],
    slot: usize,
    window: FcWindow,
) -> Result<FcReport<F>> {
    if slot >= ideals.len() {
        return Err(Error::Precondition(format!("slot {slot} out of range")));
    }
    let ring = base.ring();
    let maximal = base.sum(&Ideal::maximal(ring));
    let i_slot = &ideals[slot];
    if !i_slot.contains(x) {
        return Err(Error::Precondition(format!("{x} is not in I_{}", slot + 1)));
    }
    if mod_base(base, &maximal.product(i_slot)).contains(x) {
        return Err(Error::Precondition(format!("{x} lies in m I_{}", slot + 1)));
    }

    // group equal ideals
    let mut groups: Vec<Ideal<F>> = Vec::new();
    let mut group_of = Vec::with_capacity(ideals.len());
    for a in ideals {
        match groups.iter().position(|g| g.equals(a)) {
            Some(g) => group_of.push(g),
            None => {
                group_of.push(groups.len());
                groups.push(a.clone());
            }
        }
    }
    let slot_group = group_of[slot];
    let (lo, hi) = window.slot;
    let mut ranges: Vec<(u32, u32)> = vec![(0, window.others_hi); ideals.len()];
    ranges[slot] = (lo, hi);
    let tuples = cartesian(&ranges);
    let merged = |t: &[u32]| -> Vec<u32> {
        let mut e = vec![0u32; groups.len()];
        for (k, n) in t.iter().enumerate() {
            e[group_of[k]] += n;
        }
        e
    };
    let mut max_exp = vec![0u32; groups.len()];
    for t in &tuples {
        for (g, e) in merged(t).iter().enumerate() {
            max_exp[g] = max_exp[g].max(*e + u32::from(g == slot_group));
        }
    }
    let table = ProductTable::new(base, &groups, &max_exp);

    let mut keys: Vec<Vec<u32>> = Vec::new();
    for t in &tuples {
        let e = merged(t);
        let mut bumped = e.clone();
        bumped[slot_group] += 1;
        keys.push(e);
        keys.push(bumped);
    }
    keys.sort();
    keys.dedup();
    let products: HashMap<Vec<u32>, Ideal<F>> = keys
        .into_par_iter()
        .map(|k| {
            let p = table.product(&k);
            (k, p)
        })
        .collect();

    let principal = base.add_gens(std::slice::from_ref(x));
    let failures: Vec<bool> = tuples
        .par_iter()
        .map(|t| {
            let e = merged(t);
            let mut bumped = e.clone();
            bumped[slot_group] += 1;
            let lhs = principal.intersect(&products[&bumped]);
            let rhs = times_poly(base, &products[&e], x);
            !rhs.contains_ideal(&lhs)
        })
        .collect();
    let fc1 = match failures.iter().position(|f| *f) {
        Some(k) => Fc1Verdict::Fail {
            tuple: tuples[k].clone(),
        },
        None => Fc1Verdict::Pass {
            tuples: tuples.len(),
        },
    };

    // (I_1 ⋯ I_s)^∞ saturates like each factor in turn
    let ann = base.colon_poly(x)?;
    let mut sat = base.clone();
    for g in &groups {
        sat = sat.saturate(g)?;
    }
    let fc2 = match ann
        .gens()
        .iter()
        .map(|g| base.normal_form(g))
        .find(|g| !g.is_zero() && !sat.contains(g))
    {
        Some(w) => Fc2Verdict::Fail { witness: w },
        None => Fc2Verdict::Pass,
    };
    Ok(FcReport {
        element: x.clone(),
        slot,
        window,
        fc1,
        fc2,
    })
}

/// [`fc_check_lifted`] for `x ∈ ideals[slot]` in `S`, with `aux` (usually
/// `m`) appended to the family.
pub fn fc_check_element<F: Field>(
    x: &AlgElement<F>,
    ideals: &[AlgIdeal<F>],
    aux: &AlgIdeal<F>,
    slot: usize,
    window: FcWindow,
) -> Result<FcReport<F>> {
    let base = x.algebra().relations().clone();
    let mut lifts: Vec<Ideal<F>> = ideals.iter().map(|a| a.lift().clone()).collect();
    lifts.push(aux.lift().clone());
    fc_check_lifted(&base, x.rep(), &lifts, slot, window)
}

fn cartesian(ranges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (lo, hi) in ranges {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1) as usize);
        for t in &out {
            for n in *lo..=*hi {
                let mut t = t.clone();
                t.push(n);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// A sequence `x_1..x_ℓ` where each `x_{k+1}` passes both conditions in
/// `S/(x_1..x_k)` for the family `(J, I, m)`.
#[derive(Clone, Debug)]
pub struct FcSequence<F: Field> {
    pub elements: Vec<AlgElement<F>>,
    pub reports: Vec<FcReport<F>>,
    /// `o(x_1), ..., o(x_ℓ)` in `S`.
    pub orders: Vec<Order>,
    pub attempts: usize,
}

impl<F: Field> FcSequence<F> {
    /// Sorted finite orders.
    pub fn order_multiset(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.orders.iter().filter_map(|o| o.finite()).collect();
        v.sort_unstable();
        v
    }
}

/// Searches random recombinations of a minimal basis of `J`, mixing only
/// generators of equal degree when `J` is homogeneous, for a sequence of
/// length `ℓ(I)`.
pub fn build_fc_sequence<F: Field>(
    j: &AlgIdeal<F>,
    i: &AlgIdeal<F>,
    length: usize,
    seed: u64,
    retries: usize,
    window: FcWindow,
) -> Result<FcSequence<F>> {
    let s = i.algebra().clone();
    let homogeneous = j.is_homogeneous();
    let basis = if homogeneous {
        j.homogeneous_minimal_basis()?
    } else {
        j.minimal_basis()?.elements
    };
    if basis.len() < length {
        return Err(Error::Precondition(format!(
            "{j} has {} minimal generators, fewer than {length}",
            basis.len()
        )));
    }
    let block_of = |x: &AlgElement<F>| -> u32 {
        if homogeneous {
            x.rep().total_degree().unwrap_or(0)
        } else {
            0
        }
    };
    let m = s.maximal_ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<AlgElement<F>> = Vec::new();
    for attempt in 1..=retries {
        let mut cand = recombine(&basis, &block_of, &mut rng);
        cand.sort_by_key(|x| x.order());
        cand.truncate(length);
        let mut base = s.relations().clone();
        let mut reports = Vec::with_capacity(length);
        let mut ok = true;
        for x in &cand {
            let lifts = vec![
                base.sum(j.lift()),
                base.sum(i.lift()),
                base.sum(m.lift()),
            ];
            let report = match fc_check_lifted(&base, x.rep(), &lifts, 0, window) {
                Ok(r) => r,
                Err(e) if e.code() == "PRECONDITION" => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            if !report.passed() {
                ok = false;
                break;
            }
            reports.push(report);
            base = base.add_gens(std::slice::from_ref(x.rep()));
        }
        if ok {
            return Ok(FcSequence {
                orders: cand.iter().map(|x| x.order()).collect(),
                elements: cand,
                reports,
                attempts: attempt,
            });
        }
        if reports.len() > best.len() {
            best = cand[..reports.len()].to_vec();
        }
    }
    let partial: Vec<String> = best.iter().map(|x| x.to_string()).collect();
    Err(Error::SearchExhausted {
        attempts: retries,
        detail: format!("best partial sequence [{}]", partial.join(", ")),
    })
}

/// Random invertible recombination within blocks of equal `block_of`.
fn recombine<F: Field, R: rand::Rng>(
    basis: &[AlgElement<F>],
    block_of: &dyn Fn(&AlgElement<F>) -> u32,
    rng: &mut R,
) -> Vec<AlgElement<F>> {
    let mut blocks: Vec<(u32, Vec<&AlgElement<F>>)> = Vec::new();
    for b in basis {
        let key = block_of(b);
        match blocks.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(b),
            None => blocks.push((key, vec![b])),
        }
    }
    let mut out = Vec::with_capacity(basis.len());
    for (_, block) in blocks {
        let n = block.len();
        let matrix = loop {
            let rows: Vec<Vec<F>> = (0..n).map(|_| (0..n).map(|_| F::random(rng)).collect()).collect();
            if Span::new(n, &rows).rank() == n {
                break rows;
            }
        };
        for row in matrix {
            let mut acc = block[0].algebra().zero();
            for (c, b) in row.iter().zip(&block) {
                acc = acc.add(&b.scale(c));
            }
            out.push(acc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::field::Fp;
    use crate::monomial::{Monomial, MonomialOrder, Ring};
    use std::sync::Arc;

    type F = Fp<32003>;

    fn p(r: &Arc<Ring>, terms: &[(&[u32], i64)]) -> Polynomial<F> {
        Polynomial::from_terms(
            r,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_exponents(e), F::from_i64(*c)))
                .collect(),
        )
    }

    #[test]
    fn square_of_maximal_ideal_passes() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let m2 = s.irrelevant_power(2);
        let x2 = s.element(&p(&r, &[(&[2, 0], 1)]));
        let rep = fc_check_element(&x2, &[m2], &s.maximal_ideal(), 0, FcWindow::default()).unwrap();
        assert!(matches!(rep.fc1, Fc1Verdict::Pass { .. }));
        assert_eq!(rep.fc2, Fc2Verdict::Pass);
    }

    #[test]
    fn counterexample_fails_filter_regularity() {
        let r = Ring::new(["X", "Y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::new(&r, vec![p(&r, &[(&[1, 1], 1)]), p(&r, &[(&[2, 0], 1)])]).unwrap();
        let m = s.maximal_ideal();
        let x = s.var(0);
        let rep = fc_check_element(&x, std::slice::from_ref(&m), &m, 0, FcWindow::default()).unwrap();
        match rep.fc2 {
            Fc2Verdict::Fail { witness } => assert_eq!(witness, p(&r, &[(&[0, 1], 1)])),
            Fc2Verdict::Pass => panic!("FC2 must fail"),
        }
    }

    #[test]
    fn element_in_m_times_ideal_rejected() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let m = s.maximal_ideal();
        let x2 = s.element(&p(&r, &[(&[2, 0], 1)]));
        let err = fc_check_element(&x2, std::slice::from_ref(&m), &m, 0, FcWindow::default()).unwrap_err();
        assert_eq!(err.code(), "PRECONDITION");
    }

    #[test]
    fn sequence_for_monomial_reduction() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let m2 = s.irrelevant_power(2);
        let j = s.ideal(&[p(&r, &[(&[2, 0], 1)]), p(&r, &[(&[0, 2], 1)])]);
        let seq = build_fc_sequence(&j, &m2, 2, 3, 4, FcWindow::default()).unwrap();
        assert_eq!(seq.order_multiset(), vec![2, 2]);
        assert!(seq.reports.iter().all(|r| r.passed()));
    }

    #[test]
    fn sequence_on_cubic_cone() {
        let r = Ring::new(["x", "y", "z"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::new(&r, vec![p(&r, &[(&[0, 2, 1], 1), (&[3, 0, 0], -1)])]).unwrap();
        let m = s.maximal_ideal();
        let seq = build_fc_sequence(&m, &m, 2, 5, 4, FcWindow::default()).unwrap();
        assert_eq!(seq.order_multiset(), vec![1, 1]);
    }
}
