//! Mixed multiplicities of `(m, I_1, ..., I_s)` and closed forms for
//! equimultiple ideals.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{AlgElement, AlgIdeal, Order};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{HilbertData, Ideal};
use crate::linalg::solve_square;
use crate::multiplicity::{quotient_multiplicity, SamuelResult};
use crate::reduction::{find_minimal_reduction, height_and_equimultiple};
use crate::rees::{default_rees_window, rees_multiplicity_oracle, rees_presentation};

/// Inclusive exponent ranges of the Bhattacharya grid: `ranges[0]` for the
/// power of `m`, then one per ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub ranges: Vec<(u32, u32)>,
}

impl Grid {
    /// Starts at 1 on every axis and spans `q + 3` values.
    pub fn default_for(q: usize, s: usize) -> Self {
        Grid {
            ranges: vec![(1, q as u32 + 3); s + 1],
        }
    }
}

/// `e(m^{[k_0+1]}, I^{[k]}; S)` keyed by `(k_0, k_1, ..., k_s)` with
/// `k_0 + |k| = q - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMultiplicityTable {
    pub q: usize,
    pub entries: BTreeMap<Vec<u32>, u64>,
    pub grid: Grid,
    /// Points used for the square fit.
    pub fitted_points: usize,
    /// Held-out points reproduced exactly by the fit.
    pub validated_points: usize,
}

impl MixedMultiplicityTable {
    /// `e(m^{[d-i]}, I^{[i]}; S)` for a single ideal, when `q = d`.
    pub fn single(&self, i: usize) -> Option<u64> {
        if i >= self.q {
            return None;
        }
        self.entries.get(&vec![(self.q - 1 - i) as u32, i as u32]).copied()
    }
}

/// `ℓ(A / B)` for homogeneous `B ⊆ A` of `k[x]`, from their Hilbert
/// series. `None` data stand for the unit ideal.
fn graded_length(a: Option<&HilbertData>, b: Option<&HilbertData>, nvars: usize) -> Result<i64> {
    let num = |h: Option<&HilbertData>| -> Vec<i64> { h.map(|h| h.numerator.clone()).unwrap_or_default() };
    let (na, nb) = (num(a), num(b));
    let len = na.len().max(nb.len());
    // HS(k[x]/B) - HS(k[x]/A) has numerator nb - na over (1 - t)^n
    let mut diff: Vec<i64> = (0..len)
        .map(|k| nb.get(k).copied().unwrap_or(0) - na.get(k).copied().unwrap_or(0))
        .collect();
    for _ in 0..nvars {
        // divide by (1 - t): q_k = sum_{j <= k} c_j
        let mut acc = 0i64;
        let mut quot = Vec::with_capacity(diff.len());
        for c in &diff {
            acc += c;
            quot.push(acc);
        }
        if acc != 0 {
            return Err(Error::Internal("A / B has infinite length".into()));
        }
        quot.pop();
        diff = quot;
    }
    Ok(diff.iter().sum())
}

fn hilbert_or_unit<F: Field>(lift: &Ideal<F>) -> Result<Option<HilbertData>> {
    if lift.is_unit() {
        Ok(None)
    } else {
        lift.hilbert().map(Some)
    }
}

/// `q = dim S / (0 : (I_1 ⋯ I_s)^∞)`.
pub fn saturation_dimension<F: Field>(ideals: &[AlgIdeal<F>]) -> Result<usize> {
    let s = ideals[0].algebra();
    let mut sat = s.relations().clone();
    for i in ideals {
        let gens = Ideal::from_gens_unchecked(s.ring(), i.reps().to_vec());
        sat = sat.saturate(&gens)?;
    }
    sat.krull_dimension()
        .ok_or_else(|| Error::Precondition("the ideals are nilpotent".into()))
}

/// Fits `h(n_0, n) = ℓ(m^{n_0} I^n / m^{n_0+1} I^n)` on `grid` by the unique
/// polynomial of total degree `q - 1` through the deep-end simplex, checks
/// every other grid point, and reads off the normalized top coefficients.
pub fn bhattacharya_oracle<F: Field>(ideals: &[AlgIdeal<F>], grid: Option<Grid>) -> Result<MixedMultiplicityTable> {
    let first = ideals
        .first()
        .ok_or_else(|| Error::Precondition("no ideals given".into()))?;
    let s = first.algebra().clone();
    if ideals.len() > 2 {
        return Err(Error::Precondition(format!(
            "at most two ideals are supported, got {}",
            ideals.len()
        )));
    }
    for i in ideals {
        if !i.is_homogeneous() {
            return Err(Error::NonHomogeneous(format!("{i}")));
        }
        let q = i
            .quotient_dim()
            .ok_or_else(|| Error::UnitIdeal(format!("{i} is the unit ideal")))?;
        if q == s.dim() {
            return Err(Error::HypothesisFail(format!("{i} has height 0")));
        }
    }
    let q = saturation_dimension(ideals)?;
    if q == 0 {
        return Err(Error::Precondition("q = 0".into()));
    }
    let axes = ideals.len() + 1;
    let grid = grid.unwrap_or_else(|| Grid::default_for(q, ideals.len()));
    if grid.ranges.len() != axes {
        return Err(Error::Precondition(format!("grid needs {axes} ranges")));
    }
    let top = q as u32 - 1;
    for (lo, hi) in &grid.ranges {
        if hi < lo || hi - lo < top {
            return Err(Error::Precondition(format!(
                "range {lo}..={hi} is narrower than the fit degree {top}"
            )));
        }
    }

    // powers of m up to hi_0 + 1 and of each ideal up to hi_j
    let m_pows = s.maximal_ideal().powers(grid.ranges[0].1 + 1);
    let i_pows: Vec<Vec<AlgIdeal<F>>> = ideals
        .par_iter()
        .zip(&grid.ranges[1..])
        .map(|(i, (_, hi))| i.powers(*hi))
        .collect();
    let points = lattice(&grid.ranges);
    let mut keys: Vec<Vec<u32>> = Vec::with_capacity(2 * points.len());
    for p in &points {
        keys.push(p.clone());
        let mut up = p.clone();
        up[0] += 1;
        keys.push(up);
    }
    keys.sort();
    keys.dedup();
    let nvars = s.nvars();
    let series: HashMap<Vec<u32>, Option<HilbertData>> = keys
        .into_par_iter()
        .map(|k| {
            let mut acc = m_pows[k[0] as usize].clone();
            for (j, e) in k[1..].iter().enumerate() {
                acc = acc.product(&i_pows[j][*e as usize]);
            }
            hilbert_or_unit(acc.lift()).map(|h| (k, h))
        })
        .collect::<Result<_>>()?;
    let mut values: HashMap<Vec<u32>, i64> = HashMap::with_capacity(points.len());
    for p in &points {
        let mut up = p.clone();
        up[0] += 1;
        let v = graded_length(series[p].as_ref(), series[&up].as_ref(), nvars)?;
        values.insert(p.clone(), v);
    }

    let monomials = exponent_vectors(axes, top);
    let his: Vec<u32> = grid.ranges.iter().map(|r| r.1).collect();
    let fit_points: Vec<Vec<u32>> = monomials
        .iter()
        .map(|b| his.iter().zip(b).map(|(h, b)| h - b).collect())
        .collect();
    let eval_row = |p: &[u32]| -> Vec<BigRational> {
        monomials
            .iter()
            .map(|a| {
                let mut v = BigInt::one();
                for (x, e) in p.iter().zip(a) {
                    v *= BigInt::from(*x).pow(*e);
                }
                BigRational::from_integer(v)
            })
            .collect()
    };
    let rows: Vec<Vec<BigRational>> = fit_points.iter().map(|p| eval_row(p)).collect();
    let rhs: Vec<BigRational> = fit_points
        .iter()
        .map(|p| BigRational::from_integer(BigInt::from(values[p])))
        .collect();
    let coefs = solve_square(&rows, &rhs)
        .ok_or_else(|| Error::Internal("fit system is singular".into()))?;
    let mut validated = 0usize;
    for p in &points {
        if fit_points.contains(p) {
            continue;
        }
        let fitted: BigRational = eval_row(p)
            .iter()
            .zip(&coefs)
            .fold(BigRational::zero(), |acc, (a, c)| acc + a * c);
        let measured = values[p];
        if fitted != BigRational::from_integer(BigInt::from(measured)) {
            return Err(Error::FitMismatch {
                point: p.clone(),
                fitted: fitted.to_string(),
                measured,
            });
        }
        validated += 1;
    }
    let mut entries = BTreeMap::new();
    for (a, c) in monomials.iter().zip(&coefs) {
        if a.iter().sum::<u32>() != top {
            continue;
        }
        let norm: BigInt = a.iter().map(|e| factorial(*e)).product();
        let v = c * BigRational::from_integer(norm);
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Inconclusive {
                bound: grid.ranges[0].1,
                detail: format!("leading coefficient for {a:?} normalizes to {v}"),
            });
        }
        let v = v
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Internal("mixed multiplicity overflows".into()))?;
        entries.insert(a.clone(), v);
    }
    Ok(MixedMultiplicityTable {
        q,
        entries,
        grid,
        fitted_points: fit_points.len(),
        validated_points: validated,
    })
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn lattice(ranges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for (lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|p| {
                (*lo..=*hi).map(move |n| {
                    let mut p = p.clone();
                    p.push(n);
                    p
                })
            })
            .collect();
    }
    out
}

/// Exponent vectors of length `len` with total at most `top`.
fn exponent_vectors(len: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[k] = e;
            rec(k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, top, &mut cur, &mut out);
    out
}

/// Hypotheses and degrees behind the closed forms for an equimultiple
/// homogeneous ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquimultipleData {
    pub height: usize,
    pub dim: usize,
    pub e_s: u64,
    /// `a_1 <= ... <= a_h`, degrees of a homogeneous minimal reduction.
    pub degrees: Vec<u32>,
}

/// Verifies the equimultiple hypotheses and finds a homogeneous minimal
/// reduction.
pub fn equimultiple_data<F: Field>(
    i: &AlgIdeal<F>,
    seed: u64,
    retries: usize,
    n_max: u32,
) -> Result<EquimultipleData> {
    let s = i.algebra();
    if !i.is_homogeneous() {
        return Err(Error::HypothesisFail(format!("{i} is not homogeneous")));
    }
    let h = height_and_equimultiple(i)?;
    if h.height == 0 {
        return Err(Error::HypothesisFail(format!("{i} has height 0")));
    }
    if !h.equimultiple {
        return Err(Error::HypothesisFail(format!(
            "{i} is not equimultiple: height {} but analytic spread {}",
            h.height, h.spread
        )));
    }
    let red = find_minimal_reduction(i, true, seed, retries, n_max)?;
    let mut degrees = red
        .degrees
        .ok_or_else(|| Error::HypothesisFail("no homogeneous minimal reduction".into()))?;
    degrees.sort_unstable();
    Ok(EquimultipleData {
        height: h.height,
        dim: s.dim(),
        e_s: s.multiplicity(),
        degrees,
    })
}

/// `e(m^{[d-i]}, I^{[i]}; S) = a_1 ⋯ a_i e(S)` for `i < h`, and `0` for
/// `h <= i <= d - 1`.
pub fn mixed_fastpath(data: &EquimultipleData, i: usize) -> Result<u64> {
    if data.dim == 0 || i >= data.dim {
        return Err(Error::Precondition(format!("index {i} outside 0..{}", data.dim)));
    }
    if i >= data.height {
        return Ok(0);
    }
    Ok(data.degrees[..i].iter().map(|a| *a as u64).product::<u64>() * data.e_s)
}

/// `e(R(I)) = (1 + Σ_{i=1}^{h-1} a_1 ⋯ a_i) e(S)`.
pub fn rees_fastpath(data: &EquimultipleData) -> u64 {
    let mut sum = 1u64;
    let mut prod = 1u64;
    for a in data.degrees.iter().take(data.height.saturating_sub(1)) {
        prod *= *a as u64;
        sum += prod;
    }
    sum * data.e_s
}

/// `e(S) + Σ_{i=1}^{h-1} mixed_fastpath(i)`, which must equal
/// [`rees_fastpath`].
pub fn rees_sum_rule(data: &EquimultipleData) -> Result<u64> {
    let mut total = data.e_s;
    for i in 1..data.height {
        total += mixed_fastpath(data, i)?;
    }
    Ok(total)
}

/// `e(R(I))` from the `N`-adic lengths of a presentation.
pub fn rees_multiplicity_oracle_of<F: Field>(i: &AlgIdeal<F>, window: Option<(u32, u32)>) -> Result<SamuelResult> {
    let s = i.algebra();
    let q = i
        .quotient_dim()
        .ok_or_else(|| Error::UnitIdeal(format!("{i} is the unit ideal")))?;
    if q == s.dim() {
        return Err(Error::HypothesisFail(format!("{i} has height 0")));
    }
    let pres = rees_presentation(i)?;
    if pres.dim != s.dim() + 1 {
        return Err(Error::Internal(format!(
            "dim R(I) = {}, expected {}",
            pres.dim,
            s.dim() + 1
        )));
    }
    rees_multiplicity_oracle(&pres, window.unwrap_or_else(|| default_rees_window(s.dim())))
}

/// `e(S/(x_1..x_t))` with, when the initial forms cut the dimension by
/// `t` as well, the value `o(x_1) ⋯ o(x_t) e(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FcQuotient {
    pub quotient: SamuelResult,
    pub order_product: Option<u64>,
    pub agree: Option<bool>,
}

pub fn mixed_via_fc_quotient<F: Field>(
    s: &std::sync::Arc<crate::algebra::GradedAlgebra<F>>,
    xs: &[AlgElement<F>],
    window: Option<(u32, u32)>,
) -> Result<FcQuotient> {
    let d = s.dim();
    let t = xs.len();
    if t > d {
        return Err(Error::Precondition(format!("{t} elements exceed dim S = {d}")));
    }
    let x_ideal = s.ideal_of(xs);
    let dq = x_ideal
        .quotient_dim()
        .ok_or_else(|| Error::Precondition("the elements generate the unit ideal".into()))?;
    if dq != d - t {
        return Err(Error::Precondition(format!(
            "dim S/(x) = {dq}, expected {}",
            d - t
        )));
    }
    let w = window.unwrap_or((1, dq as u32 + 8));
    let quotient = quotient_multiplicity(x_ideal.lift(), w)?;
    let initials: Vec<AlgElement<F>> = xs.iter().map(|x| x.initial_form()).collect();
    let order_product = if s.ideal_of(&initials).quotient_dim() == Some(d - t) {
        let mut v = s.multiplicity();
        for x in xs {
            match x.order() {
                Order::Finite(o) => v *= o as u64,
                Order::Infinite => return Err(Error::Precondition("zero element".into())),
            }
        }
        Some(v)
    } else {
        None
    };
    Ok(FcQuotient {
        agree: order_product.map(|v| v == quotient.value),
        quotient,
        order_product,
    })
}

/// Both sides of `e(R(I)) = e(R(E))` and of the mixed multiplicity
/// equalities for two equimultiple ideals with equal degree sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub degrees_i: Vec<u32>,
    pub degrees_e: Vec<u32>,
    pub rees_fast: (u64, u64),
    pub rees_oracle: Option<(u64, u64)>,
    pub mixed_fast: Vec<(u64, u64)>,
    pub agree: bool,
}

pub fn invariance_check<F: Field>(
    i: &AlgIdeal<F>,
    e: &AlgIdeal<F>,
    with_oracle: bool,
    seed: u64,
    retries: usize,
    n_max: u32,
) -> Result<InvarianceReport> {
    let di = equimultiple_data(i, seed, retries, n_max)?;
    let de = equimultiple_data(e, seed, retries, n_max)?;
    if di.degrees != de.degrees {
        return Err(Error::HypothesisFail(format!(
            "degree sequences differ: {:?} vs {:?}",
            di.degrees, de.degrees
        )));
    }
    let rees_fast = (rees_fastpath(&di), rees_fastpath(&de));
    let mut mixed_fast = Vec::with_capacity(di.dim);
    for k in 0..di.dim {
        mixed_fast.push((mixed_fastpath(&di, k)?, mixed_fastpath(&de, k)?));
    }
    let rees_oracle = if with_oracle {
        Some((
            rees_multiplicity_oracle_of(i, None)?.value,
            rees_multiplicity_oracle_of(e, None)?.value,
        ))
    } else {
        None
    };
    let agree = rees_fast.0 == rees_fast.1
        && mixed_fast.iter().all(|(a, b)| a == b)
        && rees_oracle.is_none_or(|(a, b)| a == b && a == rees_fast.0);
    Ok(InvarianceReport {
        degrees_i: di.degrees,
        degrees_e: de.degrees,
        rees_fast,
        rees_oracle,
        mixed_fast,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
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

    fn plane() -> (Arc<Ring>, Arc<GradedAlgebra<F>>) {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::polynomial_ring(&r);
        (r, s)
    }

    #[test]
    fn lengths_of_graded_quotients() {
        let (_, s) = plane();
        let m = s.maximal_ideal();
        let m3 = s.irrelevant_power(3);
        let h1 = m.lift().hilbert().unwrap();
        let h3 = m3.lift().hilbert().unwrap();
        // m / m^3 has basis x, y, x^2, xy, y^2
        assert_eq!(graded_length(Some(&h1), Some(&h3), 2).unwrap(), 5);
        assert_eq!(graded_length(None, Some(&h1), 2).unwrap(), 1);
    }

    #[test]
    fn table_for_square_of_maximal_ideal() {
        let (_, s) = plane();
        let t = bhattacharya_oracle(&[s.irrelevant_power(2)], None).unwrap();
        assert_eq!(t.q, 2);
        assert_eq!(t.single(0), Some(1));
        assert_eq!(t.single(1), Some(2));
        assert!(t.validated_points > 0);
    }

    #[test]
    fn principal_ideal_vanishes() {
        let (r, s) = plane();
        let t = bhattacharya_oracle(&[s.ideal(&[p(&r, &[(&[1, 0], 1)])])], None).unwrap();
        assert_eq!((t.single(0), t.single(1)), (Some(1), Some(0)));
    }

    #[test]
    fn fast_paths_for_square() {
        let (_, s) = plane();
        let data = equimultiple_data(&s.irrelevant_power(2), 1, 8, 6).unwrap();
        assert_eq!(data.degrees, vec![2, 2]);
        assert_eq!(mixed_fastpath(&data, 0).unwrap(), 1);
        assert_eq!(mixed_fastpath(&data, 1).unwrap(), 2);
        assert_eq!(rees_fastpath(&data), 3);
        assert_eq!(rees_sum_rule(&data).unwrap(), 3);
        assert_eq!(rees_multiplicity_oracle_of(&s.irrelevant_power(2), None).unwrap().value, 3);
    }

    #[test]
    fn fc_quotient_of_square() {
        let (r, s) = plane();
        let x2 = s.element(&p(&r, &[(&[2, 0], 1)]));
        let res = mixed_via_fc_quotient(&s, &[x2], None).unwrap();
        assert_eq!((res.quotient.value, res.order_product, res.agree), (2, Some(2), Some(true)));
        let empty = mixed_via_fc_quotient(&s, &[], None).unwrap();
        assert_eq!(empty.quotient.value, 1);
    }

    #[test]
    fn not_equimultiple_rejected() {
        let (r, s) = plane();
        let i = s.ideal(&[p(&r, &[(&[2, 0], 1)]), p(&r, &[(&[1, 1], 1)])]);
        let err = equimultiple_data(&i, 1, 4, 4).unwrap_err();
        assert_eq!(err.code(), "HYPOTHESIS-FAIL");
    }

    #[test]
    fn two_ideal_grid() {
        let (_, s) = plane();
        let m = s.maximal_ideal();
        let t = bhattacharya_oracle(&[m.clone(), m], None).unwrap();
        // every mixed multiplicity of m with itself is e(S) = 1
        assert!(t.entries.values().all(|v| *v == 1));
        assert_eq!(t.entries.len(), 3);
    }
}
