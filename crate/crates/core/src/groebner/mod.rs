//! Gröbner bases and ideal arithmetic in `k[x_1..x_n]`.

mod buchberger;
pub mod hilbert;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use buchberger::{groebner_basis, interreduce, reduce};
pub use hilbert::HilbertData;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder, Ring};
use crate::poly::{same_ring, Polynomial};

/// Vector-space dimension of a quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KDim {
    Finite(u64),
    Infinite,
}

impl KDim {
    pub fn finite(self) -> Option<u64> {
        match self {
            KDim::Finite(v) => Some(v),
            KDim::Infinite => None,
        }
    }
}

impl fmt::Display for KDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KDim::Finite(v) => write!(f, "{v}"),
            KDim::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// An ideal given by generators; its reduced Gröbner basis is computed on
/// first use and cached.
pub struct Ideal<F: Field> {
    ring: Arc<Ring>,
    gens: Vec<Polynomial<F>>,
    gb: OnceLock<Vec<Polynomial<F>>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            gb,
        }
    }
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

fn check_ring<F: Field>(ring: &Arc<Ring>, p: &Polynomial<F>) -> Result<()> {
    if same_ring(ring, p.ring()) {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("generator {p} lives in another ring")))
    }
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped.
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial<F>>) -> Result<Self> {
        for g in &gens {
            check_ring(ring, g)?;
        }
        Ok(Self::from_gens_unchecked(ring, gens))
    }

    pub(crate) fn from_gens_unchecked(ring: &Arc<Ring>, gens: Vec<Polynomial<F>>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: OnceLock::new(),
        }
    }

    fn from_gb(ring: &Arc<Ring>, gb: Vec<Polynomial<F>>) -> Self {
        Self::with_groebner(ring, gb.clone(), gb)
    }

    /// `gb` must be the reduced Gröbner basis of `gens`.
    fn with_groebner(ring: &Arc<Ring>, gens: Vec<Polynomial<F>>, gb: Vec<Polynomial<F>>) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(gb);
        Ideal {
            ring: ring.clone(),
            gens,
            gb: cell,
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::from_gens_unchecked(ring, Vec::new())
    }

    pub fn unit(ring: &Arc<Ring>) -> Self {
        Self::from_gb(ring, vec![Polynomial::one(ring)])
    }

    /// The ideal of all variables.
    pub fn maximal(ring: &Arc<Ring>) -> Self {
        let gens = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        Self::from_gens_unchecked(ring, gens)
    }

    pub fn from_monomials(ring: &Arc<Ring>, mons: &[Monomial]) -> Self {
        let gens = mons
            .iter()
            .map(|m| Polynomial::term(ring, m.clone(), F::one()))
            .collect();
        Self::from_gens_unchecked(ring, gens)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    /// Reduced Gröbner basis for the ring's order.
    pub fn groebner(&self) -> &[Polynomial<F>] {
        self.gb
            .get_or_init(|| groebner_basis(&self.ring, &self.gens, None))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().first().is_some_and(|g| g.is_constant())
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Polynomial<F> {
        reduce(f, self.groebner(), None)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal<F>) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.groebner()
            .iter()
            .map(|g| g.leading_monomial().expect("nonzero").clone())
            .collect()
    }

    /// Whether the ideal has a homogeneous generating set, decided on the
    /// reduced Gröbner basis of a degree-compatible order.
    pub fn is_homogeneous(&self) -> bool {
        if self.ring.order().is_degree_compatible() {
            self.groebner().iter().all(|g| g.is_homogeneous())
        } else {
            let r = self.ring.with_order(MonomialOrder::DegRevLex);
            let gens = self.gens.iter().map(|g| g.reorder(&r)).collect();
            Ideal::from_gens_unchecked(&r, gens).is_homogeneous()
        }
    }

    pub fn sum(&self, other: &Ideal<F>) -> Ideal<F> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self::from_gens_unchecked(&self.ring, gens)
    }

    pub fn add_gens(&self, extra: &[Polynomial<F>]) -> Ideal<F> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Self::from_gens_unchecked(&self.ring, gens)
    }

    /// Generators are all pairwise products, reduced modulo earlier ones.
    pub fn product(&self, other: &Ideal<F>) -> Ideal<F> {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        Self::from_gens_unchecked(&self.ring, dedup_proportional(gens))
    }

    /// `self^n` with `self^0 = (1)`.
    pub fn power(&self, n: u32) -> Ideal<F> {
        self.powers(n).pop().expect("nonempty")
    }

    /// `[self^0, ..., self^n]`.
    pub fn powers(&self, n: u32) -> Vec<Ideal<F>> {
        let mut out = vec![Ideal::unit(&self.ring)];
        for _ in 0..n {
            let next = out.last().unwrap().product(self);
            let gb = next.groebner().to_vec();
            let gens = shorter_generating_set(next.gens, &gb);
            out.push(Ideal::with_groebner(&self.ring, gens, gb));
        }
        out
    }

    /// `self ∩ other` by eliminating a tag variable from `t*A + (1 - t)*B`.
    pub fn intersect(&self, other: &Ideal<F>) -> Ideal<F> {
        if self.is_zero() || other.is_zero() {
            return Ideal::zero(&self.ring);
        }
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let n = self.ring.nvars();
        let mut names = vec![self.ring.fresh_name("t")];
        names.extend(self.ring.names().iter().cloned());
        let big = Ring::new(names, MonomialOrder::Elimination { block: 1 });
        let map: Vec<usize> = (1..=n).collect();
        let t = Polynomial::var(&big, 0);
        let one_minus_t = &Polynomial::one(&big) - &t;
        let mut gens = Vec::new();
        for a in self.groebner() {
            gens.push(&t * &a.remap(&big, &map));
        }
        for b in other.groebner() {
            gens.push(&one_minus_t * &b.remap(&big, &map));
        }
        let gb = groebner_basis(&big, &gens, None);
        let back: Vec<usize> = std::iter::once(usize::MAX).chain(0..n).collect();
        let kept = gb
            .iter()
            .filter(|g| g.avoids_vars(&[0]))
            .map(|g| remap_dropping(g, &self.ring, &back))
            .collect();
        Ideal::from_gens_unchecked(&self.ring, kept)
    }

    /// `self : (f)`.
    pub fn colon_poly(&self, f: &Polynomial<F>) -> Result<Ideal<F>> {
        check_ring(&self.ring, f)?;
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let principal = Ideal::from_gens_unchecked(&self.ring, vec![f.clone()]);
        let inter = self.intersect(&principal);
        let mut gens = Vec::with_capacity(inter.gens.len());
        for g in inter.gens() {
            let q = g
                .exact_div(f)
                .ok_or_else(|| Error::Internal(format!("{g} not divisible by {f}")))?;
            gens.push(q);
        }
        Ok(Ideal::from_gens_unchecked(&self.ring, gens))
    }

    /// `self : other`; the zero ideal as divisor yields the unit ideal.
    pub fn colon(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        let mut acc: Option<Ideal<F>> = None;
        for g in other.gens() {
            let q = self.colon_poly(g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// `self : other^∞` and the number of colon steps until it stabilized.
    pub fn saturation(&self, other: &Ideal<F>) -> Result<(Ideal<F>, usize)> {
        let mut cur = self.clone();
        let mut steps = 0;
        loop {
            let next = cur.colon(other)?;
            if cur.contains_ideal(&next) {
                return Ok((cur, steps));
            }
            cur = next;
            steps += 1;
        }
    }

    /// `self : f^∞`, by eliminating `t` from `self + (1 - t f)`.
    pub fn saturate_poly(&self, f: &Polynomial<F>) -> Result<Ideal<F>> {
        check_ring(&self.ring, f)?;
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let n = self.ring.nvars();
        let mut names = vec![self.ring.fresh_name("t")];
        names.extend(self.ring.names().iter().cloned());
        let big = Ring::new(names, MonomialOrder::Elimination { block: 1 });
        let map: Vec<usize> = (1..=n).collect();
        let t = Polynomial::var(&big, 0);
        let mut gens: Vec<Polynomial<F>> = self.groebner().iter().map(|g| g.remap(&big, &map)).collect();
        gens.push(&Polynomial::one(&big) - &(&t * &f.remap(&big, &map)));
        let gb = groebner_basis(&big, &gens, None);
        let back: Vec<usize> = std::iter::once(usize::MAX).chain(0..n).collect();
        let kept = gb
            .iter()
            .filter(|g| g.avoids_vars(&[0]))
            .map(|g| remap_dropping(g, &self.ring, &back))
            .collect();
        Ok(Ideal::from_gens_unchecked(&self.ring, kept))
    }

    /// `self : other^∞` as the intersection of `self : g^∞` over the
    /// generators `g` of `other`.
    pub fn saturate(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        let mut acc: Option<Ideal<F>> = None;
        for g in dedup_proportional(other.gens().to_vec()) {
            let q = self.saturate_poly(&g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// `self ∩ k[x_j : j not in vars]`, kept in the same ring.
    pub fn eliminate(&self, vars: &[usize]) -> Ideal<F> {
        let n = self.ring.nvars();
        let mut perm: Vec<usize> = vars.to_vec();
        perm.sort_unstable();
        perm.dedup();
        let block = perm.len();
        perm.extend((0..n).filter(|i| !vars.contains(i)));
        // map[i] = new position of variable i
        let mut map = vec![0usize; n];
        for (pos, v) in perm.iter().enumerate() {
            map[*v] = pos;
        }
        let names: Vec<String> = perm.iter().map(|v| self.ring.names()[*v].clone()).collect();
        let big = Ring::new(names, MonomialOrder::Elimination { block });
        let gens: Vec<Polynomial<F>> = self.gens.iter().map(|g| g.remap(&big, &map)).collect();
        let gb = groebner_basis(&big, &gens, None);
        let kept = gb
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m.exponents()[..block].iter().all(|e| *e == 0)))
            .map(|g| g.remap(&self.ring, &perm))
            .collect();
        Ideal::from_gens_unchecked(&self.ring, kept)
    }

    /// Hilbert data of `k[x] / in(self)`; for homogeneous ideals this is the
    /// Hilbert series of the quotient itself.
    pub fn hilbert(&self) -> Result<HilbertData> {
        if !self.ring.order().is_degree_compatible() {
            return Err(Error::Precondition("Hilbert series needs a degree order".into()));
        }
        HilbertData::from_monomials(self.ring.nvars(), &self.leading_monomials())
            .ok_or_else(|| Error::UnitIdeal("quotient is zero".into()))
    }

    /// `dim_k k[x] / self`.
    pub fn k_dimension(&self) -> KDim {
        let lts = self.leading_monomials();
        if lts.iter().any(|m| m.is_one()) {
            return KDim::Finite(0);
        }
        let n = self.ring.nvars();
        let all_pure = (0..n).all(|v| lts.iter().any(|m| m.pure_power_var() == Some(v)));
        if !all_pure {
            return KDim::Infinite;
        }
        let h = HilbertData::from_monomials(n, &lts).expect("not the unit ideal");
        KDim::Finite(h.multiplicity as u64)
    }

    /// Krull dimension of `k[x] / self`; `None` for the unit ideal.
    pub fn krull_dimension(&self) -> Option<usize> {
        let lts = hilbert::minimalize(self.leading_monomials());
        if lts.iter().any(|m| m.is_one()) {
            return None;
        }
        let n = self.ring.nvars();
        assert!(n <= 64, "at most 64 variables");
        let supports: Vec<u64> = lts
            .iter()
            .map(|m| m.support().fold(0u64, |acc, v| acc | (1u64 << v)))
            .collect();
        Some(n - hilbert::min_hitting_set(&supports))
    }

    /// `dim_k k[x] / (self + (x)^k)`, via a truncated Gröbner basis in the
    /// local degree order.
    pub fn colength_plus_max_power(&self, k: u32) -> u64 {
        let seed: &[Polynomial<F>] = match self.gb.get() {
            Some(gb) => gb,
            None => &self.gens,
        };
        let local = Ring::new(self.ring.names().to_vec(), MonomialOrder::NegDegRevLex);
        let ident: Vec<usize> = (0..self.ring.nvars()).collect();
        let seed: Vec<Polynomial<F>> = seed.iter().map(|g| g.remap(&local, &ident)).collect();
        let gb = groebner_basis(&local, &seed, Some(k));
        if gb.first().is_some_and(|g| g.is_constant()) {
            return 0;
        }
        let lts: Vec<Monomial> = gb.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
        let h = HilbertData::from_monomials(self.ring.nvars(), &lts).expect("not the unit ideal");
        h.cumulative(k) as u64
    }
}

/// Drops polynomials proportional to an earlier one.
fn dedup_proportional<F: Field>(gens: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    let mut out: Vec<Polynomial<F>> = Vec::with_capacity(gens.len());
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let m = g.monic();
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// The shorter of two generating sets of the same ideal.
fn shorter_generating_set<F: Field>(
    gens: Vec<Polynomial<F>>,
    gb: &[Polynomial<F>],
) -> Vec<Polynomial<F>> {
    if gens.len() <= gb.len() {
        gens
    } else {
        gb.to_vec()
    }
}

/// Remaps a polynomial whose dropped variables (mapped to `usize::MAX`)
/// have exponent zero.
fn remap_dropping<F: Field>(g: &Polynomial<F>, target: &Arc<Ring>, map: &[usize]) -> Polynomial<F> {
    let terms = g
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut ex = vec![0u32; target.nvars()];
            for (i, e) in m.exponents().iter().enumerate() {
                if map[i] != usize::MAX {
                    ex[map[i]] += e;
                } else {
                    debug_assert_eq!(*e, 0);
                }
            }
            (Monomial::from_exponents(&ex), c.clone())
        })
        .collect();
    Polynomial::from_terms(target, terms)
}
