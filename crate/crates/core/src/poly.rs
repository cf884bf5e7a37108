//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, Ring};

/// A polynomial: terms strictly decreasing in the ring's order, no zero
/// coefficients. The zero polynomial has no terms.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, F)>,
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> std::hash::Hash for Polynomial<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: F) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), F::one())
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: F) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, sorting and combining.
    pub fn from_terms(ring: &Arc<Ring>, mut terms: Vec<(Monomial, F)>) -> Self {
        let ord = ring.order();
        terms.sort_by(|a, b| ord.compare(&b.0, &a.0));
        let mut out: Vec<(Monomial, F)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = lc.clone() + c;
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Terms already sorted strictly decreasing with nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, F)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().compare(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, F)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F)> {
        self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, F)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.terms.first().map(|t| &t.1)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Smallest total degree of a term; `None` for zero.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring.names(),
                other.ring.names()
            )))
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let ord = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match ord.compare(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        a[i].1.clone() - b[j].1.clone()
                    } else {
                        a[i].1.clone() + b[j].1.clone()
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(m, c);
        }
        let mut prods = Vec::with_capacity(small.len() * big.len());
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                prods.push((m1.mul(m2), c1.clone() * c2.clone()));
            }
        }
        Self::from_terms(&self.ring, prods)
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        // multiplication by a monomial preserves the order of terms
        let terms = self
            .terms
            .iter()
            .map(|(t, d)| (t.mul(m), d.clone() * c.clone()))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Graded decomposition: degree -> homogeneous component.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial<F>> {
        let mut out: BTreeMap<u32, Vec<(Monomial, F)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().push((m.clone(), c.clone()));
        }
        out.into_iter()
            .map(|(d, terms)| (d, Polynomial::from_sorted_terms(&self.ring, terms)))
            .collect()
    }

    pub fn homogeneous_component(&self, deg: u32) -> Polynomial<F> {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == deg)
            .cloned()
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Drops every term of total degree `>= bound`.
    pub fn truncate_below(&self, bound: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < bound)
                .cloned()
                .collect(),
        }
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// variable `map[i]`.
    pub fn remap(&self, target: &Arc<Ring>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.ring.nvars());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.remap(map, target.nvars()), c.clone()))
            .collect();
        Self::from_terms(target, terms)
    }

    /// Same variables, possibly a different order.
    pub fn reorder(&self, target: &Arc<Ring>) -> Self {
        assert_eq!(target.nvars(), self.ring.nvars());
        Self::from_terms(target, self.terms.clone())
    }

    /// Substitutes `images[i]` for variable `i`. The images live in a
    /// common target ring.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Polynomial<F>]) -> Self {
        assert_eq!(images.len(), self.ring.nvars());
        let mut acc = Self::zero(target);
        let mut powers: Vec<Vec<Polynomial<F>>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, e) in m.exponents().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                while powers[i].len() <= *e as usize {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul_unchecked(&powers[i][*e as usize]);
            }
            acc = acc.merge(&t, false);
        }
        acc
    }

    /// Whether every term avoids the given variables.
    pub fn avoids_vars(&self, vars: &[usize]) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| vars.iter().all(|v| m.exponent(*v) == 0))
    }

    /// `self / d` when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (ld, cd) = d.leading_term()?.clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading_term().cloned() {
            let q = ld.quotient_of(&m)?;
            let coef = c / cd.clone();
            rem = rem.merge(&d.mul_term(&q, &coef), true);
            quot.push((q, coef));
        }
        Some(Self::from_sorted_terms(&self.ring, quot))
    }

    /// Proportionality factor `c` with `self = c * other`, if any.
    pub fn ratio_to(&self, other: &Self) -> Option<F> {
        if self.len() != other.len() || self.is_zero() {
            return None;
        }
        let c = self.terms[0].1.clone() / other.terms[0].1.clone();
        for ((m1, c1), (m2, c2)) in self.terms.iter().zip(&other.terms) {
            if m1 != m2 || *c1 != c.clone() * c2.clone() {
                return None;
            }
        }
        Some(c)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                self.ring.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

// Operator impls panic on mismatched rings; use the `checked_*` methods to
// get an error instead.
impl<'a, F: Field> Add<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl<'a, F: Field> Sub<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl<'a, F: Field> Mul<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl<F: Field> Add for Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<F: Field> Sub for Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<F: Field> Mul for Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::monomial::MonomialOrder;
    use num_traits::Zero;

    type F = Fp<32003>;

    fn ring() -> Arc<Ring> {
        Ring::new(["x", "y"], MonomialOrder::DegRevLex)
    }

    #[test]
    fn cancellation_and_absorption() {
        let r = ring();
        let x = Polynomial::<F>::var(&r, 0);
        let y = Polynomial::<F>::var(&r, 1);
        let s = &(&x + &y) + &(&x - &y);
        assert_eq!(s, x.scale(&F::from_i64(2)));
        let z = &(&x + &y) * &Polynomial::zero(&r);
        assert!(z.is_zero());
    }

    #[test]
    fn binomial_square() {
        let r = ring();
        let x = Polynomial::<F>::var(&r, 0);
        let y = Polynomial::<F>::var(&r, 1);
        let p = &x + &y.pow(2);
        let sq = &p * &p;
        assert_eq!(sq.to_string(), "y^4 + 2*x*y^2 + x^2");
    }

    #[test]
    fn components() {
        let r = ring();
        let x = Polynomial::<F>::var(&r, 0);
        let y = Polynomial::<F>::var(&r, 1);
        let p = &x + &y.pow(2);
        let c = p.homogeneous_components();
        assert_eq!(c.len(), 2);
        assert_eq!(c[&1], x);
        assert_eq!(c[&2], y.pow(2));
        assert!(Polynomial::<F>::zero(&r).homogeneous_components().is_empty());
        assert_eq!(x.pow(3).homogeneous_components().len(), 1);
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = Polynomial::<F>::var(&ring(), 0);
        let b = Polynomial::<F>::var(&Ring::new(["u", "v"], MonomialOrder::DegRevLex), 0);
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn ratio_detects_proportionality() {
        let r = ring();
        let x = Polynomial::<F>::var(&r, 0);
        let y = Polynomial::<F>::var(&r, 1);
        let p = &x + &y;
        let q = p.scale(&F::from_i64(5));
        assert_eq!(q.ratio_to(&p), Some(F::from_i64(5)));
        assert!(x.ratio_to(&p).is_none());
        assert!(F::zero().is_zero());
    }
}
