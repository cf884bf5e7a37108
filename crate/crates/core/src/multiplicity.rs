//! Lengths and Hilbert–Samuel multiplicities.
//!
//! Lengths are taken after localizing at the irrelevant ideal `m`. For an
//! ideal `A` of `k[x]` the value `dim_k k[x]/(A + m^N)` is nondecreasing in
//! `N`, and two consecutive equal values certify `m^N ⊆ A` locally, so the
//! common value is the local length.

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{AlgElement, AlgIdeal, GradedAlgebra, Order};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{Ideal, KDim};
use crate::reduction::{is_reduction, ReductionVerdict};

/// How a multiplicity value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    HomogeneousSeries,
    FiniteDifferenceOracle,
    /// `m`-adic finite differences on a possibly non-homogeneous quotient.
    MadicOracle,
    /// Product of orders of a system of parameters times `e(S)`.
    FastpathOrderProduct,
    /// Product of the degree sequence of a minimal reduction times `e(S)`.
    FastpathReductionDegrees,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::HomogeneousSeries => "homogeneous-series",
            Method::FiniteDifferenceOracle => "finite-difference-oracle",
            Method::MadicOracle => "m-adic-oracle",
            Method::FastpathOrderProduct => "fastpath-order-product",
            Method::FastpathReductionDegrees => "fastpath-reduction-degrees",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A multiplicity with provenance. Oracle results carry the window and
/// the stable tail of differences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamuelResult {
    pub value: u64,
    pub method: Method,
    pub window: Option<(u32, u32)>,
    pub lengths: Vec<u64>,
    pub witness: Vec<i64>,
}

impl SamuelResult {
    fn closed_form(value: u64, method: Method) -> Self {
        SamuelResult {
            value,
            method,
            window: None,
            lengths: Vec::new(),
            witness: Vec::new(),
        }
    }
}

/// Default oracle window `(1, d + 6)`.
pub fn default_window(d: usize) -> (u32, u32) {
    (1, d as u32 + 6)
}

/// Repeated forward differences.
pub fn differences(values: &[i64], order: usize) -> Vec<i64> {
    let mut cur = values.to_vec();
    for _ in 0..order {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    cur
}

/// The stable tail value of the `order`-th differences: the last three
/// must agree and be positive.
pub fn stable_difference(values: &[i64], order: usize, window: (u32, u32)) -> Result<(i64, Vec<i64>)> {
    let diffs = differences(values, order);
    if diffs.len() < 3 {
        return Err(Error::Precondition(format!(
            "window {}..={} too short for differences of order {order}",
            window.0, window.1
        )));
    }
    let tail = &diffs[diffs.len() - 3..];
    if tail[0] == tail[1] && tail[1] == tail[2] && tail[0] > 0 {
        Ok((tail[0], tail.to_vec()))
    } else {
        Err(Error::NoStabilization {
            lo: window.0,
            hi: window.1,
            differences: diffs,
        })
    }
}

/// `ℓ(k[x]_m / A_m)`; requires `dim k[x]/A = 0`.
pub fn local_length<F: Field>(lift: &Ideal<F>) -> Result<u64> {
    let global = match lift.k_dimension() {
        KDim::Finite(v) => v,
        KDim::Infinite => {
            return Err(Error::Precondition(format!(
                "quotient by {lift} is not zero-dimensional"
            )))
        }
    };
    if global == 0 || lift.is_homogeneous() {
        return Ok(global);
    }
    let maximal = Ideal::maximal(lift.ring());
    if lift.sum(&maximal).is_unit() {
        return Ok(0);
    }
    // an Artinian local ring of length λ has m^λ = 0, so N = global suffices
    let mut n: u64 = 2;
    loop {
        if n + 1 >= global {
            return Ok(lift.colength_plus_max_power(global as u32));
        }
        let a = lift.colength_plus_max_power(n as u32);
        if a == global {
            return Ok(a);
        }
        let b = lift.colength_plus_max_power(n as u32 + 1);
        if a == b {
            return Ok(a);
        }
        n *= 2;
    }
}

/// `ℓ(S/I) = dim_k S/I`.
pub fn colength<F: Field>(i: &AlgIdeal<F>) -> Result<u64> {
    match i.k_dimension() {
        KDim::Finite(v) => Ok(v),
        KDim::Infinite => Err(Error::Precondition(format!("S/{i} is not Artinian"))),
    }
}

/// `ℓ(S_m / I_m)`.
pub fn local_colength<F: Field>(i: &AlgIdeal<F>) -> Result<u64> {
    local_length(i.lift())
}

/// `√I = m`: Artinian quotient supported only at `m`.
pub fn is_m_primary<F: Field>(i: &AlgIdeal<F>) -> bool {
    match i.k_dimension() {
        KDim::Finite(0) | KDim::Infinite => false,
        KDim::Finite(l) => i.is_homogeneous() || i.lift().colength_plus_max_power(l as u32) == l,
    }
}

/// `e(q; S)` from the `d`-th differences of `n ↦ ℓ(S_m / q^n S_m)`.
pub fn samuel_oracle<F: Field>(q: &AlgIdeal<F>, window: (u32, u32)) -> Result<SamuelResult> {
    let s = q.algebra().clone();
    let d = s.dim();
    if q.quotient_dim() != Some(0) {
        return Err(Error::Precondition(format!("S/{q} is not zero-dimensional")));
    }
    let (lo, hi) = window;
    if lo == 0 || hi < lo || ((hi - lo + 1) as usize) < d + 3 {
        return Err(Error::Precondition(format!(
            "window {lo}..={hi} must start at 1 or later and hold at least d + 3 = {} values",
            d + 3
        )));
    }
    let powers = q.powers(hi);
    let lengths: Vec<u64> = powers[lo as usize..=hi as usize]
        .par_iter()
        .map(|p| local_length(p.lift()))
        .collect::<Result<Vec<u64>>>()?;
    let values: Vec<i64> = lengths.iter().map(|v| *v as i64).collect();
    let (value, witness) = stable_difference(&values, d, window)?;
    Ok(SamuelResult {
        value: value as u64,
        method: Method::FiniteDifferenceOracle,
        window: Some(window),
        lengths,
        witness,
    })
}

/// `e(S/A)` at `m` for `A ⊇ P` given by its lift, with `d = dim k[x]/A`.
/// Homogeneous lifts are read from the Hilbert series.
pub fn quotient_multiplicity<F: Field>(lift: &Ideal<F>, window: (u32, u32)) -> Result<SamuelResult> {
    if lift.is_homogeneous() {
        let h = lift.hilbert()?;
        return Ok(SamuelResult::closed_form(h.multiplicity as u64, Method::HomogeneousSeries));
    }
    let d = lift
        .krull_dimension()
        .ok_or_else(|| Error::UnitIdeal("quotient is zero".into()))?;
    let (lo, hi) = window;
    if ((hi - lo + 1) as usize) < d + 3 {
        return Err(Error::Precondition(format!("window {lo}..={hi} too short for dimension {d}")));
    }
    let lengths: Vec<u64> = (lo..=hi)
        .into_par_iter()
        .map(|k| lift.colength_plus_max_power(k))
        .collect();
    let values: Vec<i64> = lengths.iter().map(|v| *v as i64).collect();
    let (value, witness) = stable_difference(&values, d, window)?;
    Ok(SamuelResult {
        value: value as u64,
        method: Method::MadicOracle,
        window: Some(window),
        lengths,
        witness,
    })
}

/// `o(x_1) ... o(x_d) e(S)`, valid when both `x` and its initial forms are
/// systems of parameters.
pub fn samuel_fastpath_general<F: Field>(xs: &[AlgElement<F>]) -> Result<SamuelResult> {
    let s: &std::sync::Arc<GradedAlgebra<F>> = xs
        .first()
        .ok_or_else(|| Error::Precondition("empty sequence".into()))?
        .algebra();
    let d = s.dim();
    if xs.len() != d {
        return Err(Error::HypothesisFail(format!(
            "{} elements given, dim S = {d}",
            xs.len()
        )));
    }
    let x_ideal = s.ideal_of(xs);
    if x_ideal.quotient_dim() != Some(0) {
        return Err(Error::HypothesisFail("the elements are not a system of parameters".into()));
    }
    let initials: Vec<AlgElement<F>> = xs.iter().map(|x| x.initial_form()).collect();
    let in_ideal = s.ideal_of(&initials);
    if in_ideal.quotient_dim() != Some(0) {
        return Err(Error::HypothesisFail(format!(
            "initial forms {} are not a system of parameters (dim S/(in x) = {})",
            in_ideal,
            in_ideal.quotient_dim().map_or("-".to_string(), |v| v.to_string())
        )));
    }
    let mut value = s.multiplicity();
    for x in xs {
        match x.order() {
            Order::Finite(o) => value *= o as u64,
            Order::Infinite => return Err(Error::HypothesisFail("zero element".into())),
        }
    }
    Ok(SamuelResult::closed_form(value, Method::FastpathOrderProduct))
}

/// `c_1 ... c_d e(S)` with `(c_i)` the degree sequence of a verified
/// minimal reduction `J` of the `m`-primary ideal `I`. The domain property
/// of `S` is asserted by the caller, never checked.
pub fn samuel_fastpath_domain<F: Field>(
    i: &AlgIdeal<F>,
    j: &AlgIdeal<F>,
    domain_asserted: bool,
    n_max: u32,
) -> Result<SamuelResult> {
    if !domain_asserted {
        return Err(Error::HypothesisFail("S is not asserted to be a domain".into()));
    }
    let s = i.algebra();
    if i.quotient_dim() != Some(0) {
        return Err(Error::HypothesisFail(format!("{i} is not m-primary")));
    }
    let cert = is_reduction(j, i, n_max)?;
    if !matches!(cert.verdict, ReductionVerdict::Reduction(_)) {
        return Err(Error::HypothesisFail(format!("{j} is not a verified reduction of {i}")));
    }
    let seq = crate::degseq::degree_sequence(j)?;
    if seq.len() != s.dim() {
        return Err(Error::HypothesisFail(format!(
            "reduction needs {} generators, has {}",
            s.dim(),
            seq.len()
        )));
    }
    let value = seq.iter().map(|c| *c as u64).product::<u64>() * s.multiplicity();
    Ok(SamuelResult::closed_form(value, Method::FastpathReductionDegrees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::monomial::{Monomial, MonomialOrder, Ring};
    use crate::poly::Polynomial;
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
    fn differences_settle() {
        let v = [3, 5, 7, 9, 11];
        assert_eq!(stable_difference(&v, 1, (1, 5)).unwrap().0, 2);
        assert!(matches!(
            stable_difference(&[1, 2, 4, 8, 16], 1, (1, 5)),
            Err(Error::NoStabilization { .. })
        ));
    }

    #[test]
    fn counterexample_lengths() {
        let r = Ring::new(["X", "Y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::new(&r, vec![p(&r, &[(&[1, 1], 1)]), p(&r, &[(&[2, 0], 1)])]).unwrap();
        let q = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[0, 2], 1)])]);
        assert_eq!(colength(&q).unwrap(), 3);
        let res = samuel_oracle(&q, default_window(1)).unwrap();
        assert_eq!(res.value, 2);
        // ℓ(S/q^n) = 2n + 1
        assert_eq!(res.lengths, (1..=7).map(|n| 2 * n + 1).collect::<Vec<u64>>());
        let x = s.element(&p(&r, &[(&[1, 0], 1), (&[0, 2], 1)]));
        let err = samuel_fastpath_general(&[x]).unwrap_err();
        assert_eq!(err.code(), "HYPOTHESIS-FAIL");
    }

    #[test]
    fn local_length_ignores_far_points() {
        // (x - x^2, y) meets the origin and (1, 0)
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[2, 0], -1)]), p(&r, &[(&[0, 1], 1)])]);
        assert_eq!(colength(&i).unwrap(), 2);
        assert_eq!(local_colength(&i).unwrap(), 1);
        assert!(!is_m_primary(&i));
    }

    #[test]
    fn complete_intersection_oracle() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let q = s.ideal(&[p(&r, &[(&[1, 0], 1)]), p(&r, &[(&[0, 2], 1)])]);
        assert_eq!(samuel_oracle(&q, default_window(2)).unwrap().value, 2);
        let m = s.maximal_ideal();
        assert_eq!(samuel_oracle(&m, default_window(2)).unwrap().value, s.multiplicity());
    }

    #[test]
    fn quotient_by_square() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let q = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[0, 3], 1)])]);
        // (x + y^3) is a smooth curve germ: e = 1
        let res = quotient_multiplicity(q.lift(), (1, 8)).unwrap();
        assert_eq!((res.value, res.method), (1, Method::MadicOracle));
    }
}
