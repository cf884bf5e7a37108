//! Reductions, analytic spread and the search for minimal reductions.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElement, AlgIdeal};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::rees::rees_presentation;

/// Outcome of a reduction test up to a power bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionVerdict {
    /// `I^{n+1} = J I^n` holds for the carried `n`, the least such.
    Reduction(u32),
    /// No `n <= N_max` works; `J` may still be a reduction.
    Inconclusive(u32),
}

impl fmt::Display for ReductionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionVerdict::Reduction(n) => write!(f, "REDUCTION({n})"),
            ReductionVerdict::Inconclusive(n) => write!(f, "INCONCLUSIVE({n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub verdict: ReductionVerdict,
    pub detail: String,
}

impl ReductionCertificate {
    pub fn is_reduction(&self) -> bool {
        matches!(self.verdict, ReductionVerdict::Reduction(_))
    }
}

/// Tests `I^{n+1} = J I^n` for `n = 0..=n_max`. Requires `J ⊆ I`.
pub fn is_reduction<F: Field>(j: &AlgIdeal<F>, i: &AlgIdeal<F>, n_max: u32) -> Result<ReductionCertificate> {
    if !i.contains_ideal(j) {
        return Err(Error::Precondition(format!("{j} is not contained in {i}")));
    }
    // a reduction shares the integral closure, hence the radical
    if j.quotient_dim() != i.quotient_dim() {
        return Ok(ReductionCertificate {
            verdict: ReductionVerdict::Inconclusive(n_max),
            detail: format!(
                "dim S/J = {:?} differs from dim S/I = {:?}",
                j.quotient_dim(),
                i.quotient_dim()
            ),
        });
    }
    let mut i_pow = AlgIdeal::unit(i.algebra());
    for n in 0..=n_max {
        let next = i_pow.product(i);
        let j_pow = j.product(&i_pow);
        if j_pow.lift().contains_ideal(next.lift()) {
            return Ok(ReductionCertificate {
                verdict: ReductionVerdict::Reduction(n),
                detail: format!("I^{} = J I^{n}", n + 1),
            });
        }
        i_pow = next;
    }
    Ok(ReductionCertificate {
        verdict: ReductionVerdict::Inconclusive(n_max),
        detail: format!("I^(n+1) != J I^n for n <= {n_max}"),
    })
}

/// `ℓ(I)`, the Krull dimension of the fiber cone `R(I) / m R(I)`.
pub fn analytic_spread<F: Field>(i: &AlgIdeal<F>) -> Result<usize> {
    let pres = rees_presentation(i)?;
    pres.fiber_cone()
        .krull_dimension()
        .ok_or_else(|| Error::Internal("fiber cone is zero".into()))
}

/// `ht I = dim S - dim S/I` together with `ℓ(I)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeightData {
    pub height: usize,
    pub spread: usize,
    pub equimultiple: bool,
}

pub fn height_and_equimultiple<F: Field>(i: &AlgIdeal<F>) -> Result<HeightData> {
    let s = i.algebra();
    let q = i
        .quotient_dim()
        .ok_or_else(|| Error::UnitIdeal(format!("{i} is the unit ideal")))?;
    let height = s.dim() - q;
    let spread = analytic_spread(i)?;
    Ok(HeightData {
        height,
        spread,
        equimultiple: height == spread,
    })
}

/// A verified minimal reduction.
#[derive(Clone, Debug)]
pub struct MinimalReduction<F: Field> {
    pub ideal: AlgIdeal<F>,
    pub generators: Vec<AlgElement<F>>,
    pub certificate: ReductionCertificate,
    pub spread: usize,
    /// Degrees of the generators when they are homogeneous.
    pub degrees: Option<Vec<u32>>,
    pub attempts: usize,
}

/// Searches for a reduction with `ℓ(I)` generators.
///
/// Homogeneous searches try degree multisets ordered by total degree, then
/// lexicographically, drawing each generator as a random element of the
/// graded piece `I_c`. Each multiset gets `retries` draws.
pub fn find_minimal_reduction<F: Field>(
    i: &AlgIdeal<F>,
    homogeneous_required: bool,
    seed: u64,
    retries: usize,
    n_max: u32,
) -> Result<MinimalReduction<F>> {
    let homogeneous = i.is_homogeneous();
    if homogeneous_required && !homogeneous {
        return Err(Error::NonHomogeneous(format!(
            "{i} has no homogeneous generating set"
        )));
    }
    let spread = analytic_spread(i)?;
    let basis = if homogeneous {
        i.homogeneous_minimal_basis()?
    } else {
        i.minimal_basis()?.elements
    };
    let degrees_of = |xs: &[AlgElement<F>]| -> Option<Vec<u32>> {
        if homogeneous {
            Some(xs.iter().map(|x| x.rep().total_degree().unwrap_or(0)).collect())
        } else {
            None
        }
    };
    if basis.len() == spread {
        let cert = is_reduction(i, i, 0)?;
        return Ok(MinimalReduction {
            ideal: i.clone(),
            degrees: degrees_of(&basis),
            generators: basis,
            certificate: cert,
            spread,
            attempts: 0,
        });
    }
    let alg = i.algebra().clone();
    let target_dim = i.quotient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0usize;
    let accept = |elems: Vec<AlgElement<F>>, attempts: usize| -> Result<Option<MinimalReduction<F>>> {
        if elems.iter().any(|e| e.is_zero()) {
            return Ok(None);
        }
        let j = alg.ideal_of(&elems);
        if j.quotient_dim() != target_dim || j.minimal_basis()?.mu != spread {
            return Ok(None);
        }
        let cert = is_reduction(&j, i, n_max)?;
        if !cert.is_reduction() {
            return Ok(None);
        }
        Ok(Some(MinimalReduction {
            ideal: j,
            degrees: degrees_of(&elems),
            generators: elems,
            certificate: cert,
            spread,
            attempts,
        }))
    };

    if homogeneous {
        let mut degs: Vec<u32> = basis.iter().map(|b| b.rep().total_degree().unwrap()).collect();
        degs.sort_unstable();
        degs.dedup();
        for multiset in degree_multisets(&degs, spread) {
            for _ in 0..retries {
                attempts += 1;
                let elems: Vec<AlgElement<F>> = multiset
                    .iter()
                    .map(|c| random_in_degree(&basis, *c, &mut rng))
                    .collect();
                if let Some(found) = accept(elems, attempts)? {
                    return Ok(found);
                }
            }
        }
    } else {
        for _ in 0..retries {
            attempts += 1;
            let elems: Vec<AlgElement<F>> = (0..spread)
                .map(|_| {
                    let mut acc = alg.zero();
                    for b in &basis {
                        acc = acc.add(&b.scale(&F::random(&mut rng)));
                    }
                    acc
                })
                .collect();
            if let Some(found) = accept(elems, attempts)? {
                return Ok(found);
            }
        }
    }
    Err(Error::SearchExhausted {
        attempts,
        detail: format!("no reduction of {i} with {spread} generators found"),
    })
}

/// Nondecreasing sequences of length `len` from `degs`, ordered by sum,
/// then lexicographically.
pub fn degree_multisets(degs: &[u32], len: usize) -> Vec<Vec<u32>> {
    fn rec(degs: &[u32], start: usize, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for k in start..degs.len() {
            cur.push(degs[k]);
            rec(degs, k, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degs, 0, len, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        let sa: u32 = a.iter().sum();
        let sb: u32 = b.iter().sum();
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });
    out
}

/// A random element of `I_c` spanned by `u g` with `g` in `basis` and `u`
/// a monomial of degree `c - deg g`.
fn random_in_degree<F: Field, R: rand::Rng>(basis: &[AlgElement<F>], c: u32, rng: &mut R) -> AlgElement<F> {
    let alg = basis[0].algebra();
    let n = alg.nvars();
    let ring = alg.ring();
    let mut acc = Polynomial::zero(ring);
    for g in basis {
        let d = g.rep().total_degree().unwrap_or(0);
        if d > c {
            continue;
        }
        for u in Monomial::all_of_degree(n, c - d) {
            acc = &acc + &g.rep().mul_term(&u, &F::random(rng));
        }
    }
    alg.element(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::field::Fp;
    use crate::monomial::{MonomialOrder, Ring};
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
    fn monomial_reduction_of_square() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let m2 = s.irrelevant_power(2);
        let j = s.ideal(&[p(&r, &[(&[2, 0], 1)]), p(&r, &[(&[0, 2], 1)])]);
        let cert = is_reduction(&j, &m2, 4).unwrap();
        assert_eq!(cert.verdict, ReductionVerdict::Reduction(1));
        let not = s.ideal(&[p(&r, &[(&[2, 0], 1)]), p(&r, &[(&[1, 1], 1)])]);
        assert_eq!(is_reduction(&not, &m2, 4).unwrap().verdict, ReductionVerdict::Inconclusive(4));
        assert_eq!(is_reduction(&m2, &j, 4).unwrap_err().code(), "PRECONDITION");
    }

    #[test]
    fn spread_and_height() {
        let r = Ring::new(["x", "y", "z"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let h = height_and_equimultiple(&s.irrelevant_power(2)).unwrap();
        assert_eq!(h, HeightData { height: 3, spread: 3, equimultiple: true });
        // (xy, xz, yz): height 2, spread 3
        let i = s.ideal(&[p(&r, &[(&[1, 1, 0], 1)]), p(&r, &[(&[1, 0, 1], 1)]), p(&r, &[(&[0, 1, 1], 1)])]);
        let h = height_and_equimultiple(&i).unwrap();
        assert_eq!(h, HeightData { height: 2, spread: 3, equimultiple: false });
    }

    #[test]
    fn multisets_ordered() {
        assert_eq!(
            degree_multisets(&[1, 2], 2),
            vec![vec![1, 1], vec![1, 2], vec![2, 2]]
        );
    }

    #[test]
    fn minimal_reduction_search() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let m2 = s.irrelevant_power(2);
        let red = find_minimal_reduction(&m2, true, 7, 8, 6).unwrap();
        assert_eq!(red.degrees, Some(vec![2, 2]));
        assert!(red.certificate.is_reduction());
        // μ = ℓ: the ideal itself
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1)]), p(&r, &[(&[0, 2], 1)])]);
        let red = find_minimal_reduction(&i, true, 7, 8, 6).unwrap();
        assert_eq!(red.certificate.verdict, ReductionVerdict::Reduction(0));
        assert_eq!(red.degrees, Some(vec![1, 2]));
    }

    #[test]
    fn reductions_are_seed_deterministic() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let m3 = s.irrelevant_power(3);
        let a = find_minimal_reduction(&m3, true, 11, 8, 6).unwrap();
        let b = find_minimal_reduction(&m3, true, 11, 8, 6).unwrap();
        let reps = |m: &MinimalReduction<F>| m.generators.iter().map(|g| g.rep().clone()).collect::<Vec<_>>();
        assert_eq!(reps(&a), reps(&b));
        assert_eq!(a.degrees, Some(vec![3, 3]));
    }

    #[test]
    fn no_homogeneous_minimal_reduction() {
        // e(I) = 5 is not a product of two generator degrees
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[p(&r, &[(&[2, 0], 1)]), p(&r, &[(&[1, 1], 1)]), p(&r, &[(&[0, 3], 1)])]);
        let err = find_minimal_reduction(&i, true, 11, 2, 4).unwrap_err();
        assert_eq!(err.code(), "SEARCH-EXHAUSTED");
    }
}
