//! Strategies and kernel property checks shared by the integration targets.

#![allow(dead_code)]

use std::sync::Arc;

use gradmult::groebner::HilbertData;
use gradmult::linalg::Span;
use gradmult::{Field, Fp32003, Ideal, Monomial, MonomialOrder, Polynomial, Ring};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type F = Fp32003;

/// Exact comparisons throughout; the tolerance is pinned here.
pub const TOLERANCE: u64 = 0;

#[allow(clippy::absurd_extreme_comparisons)]
pub fn within_tolerance(a: u64, b: u64) -> bool {
    a.abs_diff(b) <= TOLERANCE
}

pub fn ring3() -> Arc<Ring> {
    Ring::new(["x", "y", "z"], MonomialOrder::DegRevLex)
}

/// Terms as `(exponents, coefficient)`.
pub type RawPoly = Vec<(Vec<u32>, i64)>;

pub fn raw_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, nvars), -20i64..=20),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(mut e, c)| {
                // clamp the total degree
                while e.iter().sum::<u32>() > max_deg {
                    let i = e.iter().position(|&v| v > 0).unwrap();
                    e[i] -= 1;
                }
                (e, c)
            })
            .collect()
    })
}

/// A homogeneous polynomial of degree `deg`.
pub fn raw_form(nvars: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = RawPoly> {
    let monos: Vec<Vec<u32>> = Monomial::all_of_degree(nvars, deg)
        .into_iter()
        .map(|m| m.exponents().to_vec())
        .collect();
    prop::collection::vec((0..monos.len(), -20i64..=20), 1..=max_terms)
        .prop_map(move |picks| picks.into_iter().map(|(k, c)| (monos[k].clone(), c)).collect())
}

pub fn build<K: Field>(ring: &Arc<Ring>, raw: &RawPoly) -> Polynomial<K> {
    Polynomial::from_terms(
        ring,
        raw.iter()
            .map(|(e, c)| (Monomial::from_exponents(e), K::from_i64(*c)))
            .collect(),
    )
}

fn nonzero(ps: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    ps.into_iter().filter(|p| !p.is_zero()).collect()
}

/// `NF(NF(f)) = NF(f)` and `f - NF(f)` lies in the ideal.
pub fn check_nf_idempotent(gens: &[RawPoly], f: &RawPoly) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(gens.iter().map(|g| build(&r, g)).collect());
    prop_assume!(!gens.is_empty());
    let i = Ideal::new(&r, gens).unwrap();
    let f: Polynomial<F> = build(&r, f);
    let n = i.normal_form(&f);
    prop_assert_eq!(i.normal_form(&n), n.clone());
    prop_assert!(i.contains(&(&f - &n)));
    Ok(())
}

/// The reduced basis is unchanged by `g_i -> c_i g_i + sum_{j<i} h_ij g_j`.
pub fn check_gb_recombination(
    gens: &[RawPoly],
    scales: &[i64],
    mults: &[RawPoly],
) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(gens.iter().map(|g| build(&r, g)).collect());
    prop_assume!(!gens.is_empty());
    let mut regen = Vec::with_capacity(gens.len());
    let mut k = 0;
    for (i, g) in gens.iter().enumerate() {
        let c = F::from_i64(scales[i % scales.len()]);
        prop_assume!(!c.is_zero());
        let mut h = g.scale(&c);
        for gj in &gens[..i] {
            h = &h + &(&build::<F>(&r, &mults[k % mults.len()]) * gj);
            k += 1;
        }
        regen.push(h);
    }
    // a dependent recombination would change the ideal
    prop_assume!(regen.iter().all(|p| !p.is_zero()));
    let a = Ideal::new(&r, gens).unwrap();
    let b = Ideal::new(&r, regen).unwrap();
    prop_assert_eq!(a.groebner().to_vec(), b.groebner().to_vec());
    Ok(())
}

/// `H(S/I, j)` from linear algebra on `I_j` matches the Hilbert data.
pub fn check_hilbert_bruteforce(forms: &[RawPoly], top: u32) -> Result<(), TestCaseError> {
    let r = ring3();
    let n = r.nvars();
    let gens = nonzero(forms.iter().map(|g| build(&r, g)).collect());
    prop_assume!(!gens.is_empty());
    let i = Ideal::new(&r, gens.clone()).unwrap();
    let h: HilbertData = i.hilbert().unwrap();
    for j in 0..=top {
        let basis = Monomial::all_of_degree(n, j);
        let index = |m: &Monomial| basis.iter().position(|b| b == m).unwrap();
        let mut columns = Vec::new();
        for g in &gens {
            let d = g.total_degree().unwrap();
            if d > j {
                continue;
            }
            for u in Monomial::all_of_degree(n, j - d) {
                let mut v = vec![F::zero(); basis.len()];
                for (m, c) in g.mul_term(&u, &F::one()).terms() {
                    v[index(m)] = *c;
                }
                columns.push(v);
            }
        }
        let rank = Span::new(basis.len(), &columns).rank();
        prop_assert_eq!(h.hilbert_function(j), (basis.len() - rank) as i128, "degree {}", j);
    }
    Ok(())
}

/// `J = I : m^inf` satisfies `J : m^inf = J` and `J : m = J`.
pub fn check_saturation_fixpoint(gens: &[RawPoly]) -> Result<(), TestCaseError> {
    let r = ring3();
    let gens = nonzero(gens.iter().map(|g| build(&r, g)).collect());
    prop_assume!(!gens.is_empty());
    let i = Ideal::new(&r, gens).unwrap();
    let m = Ideal::maximal(&r);
    let j = i.saturate(&m).unwrap();
    prop_assert!(j.contains_ideal(&i));
    prop_assert!(j.saturate(&m).unwrap().equals(&j));
    prop_assert!(j.colon(&m).unwrap().equals(&j));
    Ok(())
}

pub fn gens_strategy() -> impl Strategy<Value = Vec<RawPoly>> {
    prop::collection::vec(raw_poly(3, 3, 4), 1..=3)
}

pub fn forms_strategy() -> impl Strategy<Value = Vec<RawPoly>> {
    prop::collection::vec((1u32..=3).prop_flat_map(|d| raw_form(3, d, 4)), 1..=3)
}

/// Ideals named in script declarations, instantiated over `F`.
pub fn session(script: &str) -> gradmult::cli::run::Session<F> {
    let parsed = gradmult::cli::script::parse_script(script).unwrap();
    gradmult::cli::run::Session::build(&parsed, 0).unwrap()
}

pub const DEGSEQ_FIXTURES: &[(&str, &str)] = &[
    (
        "ring S vars [x, y] field fp(32003) relations [];\n\
         ideal A = [x + y^2, y]; ideal B = [x + y^2, x*y]; ideal C = maximal^2;\n\
         ideal D = [x^2 + y^3, x*y]; ideal E = [x^2, y^3]; ideal G = [x^2 + x*y, y^2 - x*y, x^3 + y^4];",
        "k[x,y]",
    ),
    (
        "ring C vars [x, y, z] field fp(32003) relations [y^2*z - x^3];\n\
         ideal A = maximal; ideal B = [y + z^2, z]; ideal D = [x^2 + y*z, x*y + z^3];",
        "cubic cone",
    ),
    (
        "ring S vars [X, Y] field fp(32003) relations [X*Y, X^2];\n\
         ideal A = [X + Y^2]; ideal B = [X + Y^2, Y^3];",
        "k[X,Y]/(XY,X^2)",
    ),
    (
        "ring S vars [x, y, z] field fp(32003) relations [];\n\
         ideal A = [x + y*z, y^2 + x^3, z^3 + x*y^2]; ideal B = [x*y + z^3, y^2 + x*z];",
        "k[x,y,z]",
    ),
];

/// Outcome of regenerating one ideal `rounds` times.
pub struct Regenerations {
    pub label: String,
    pub degrees: Vec<u32>,
    pub stable: bool,
    pub mu_matches: bool,
}

pub fn regeneration_invariance(seed: u64, rounds: usize) -> Vec<Regenerations> {
    use gradmult::degseq::{initial_ideal, random_regeneration};
    use rand::SeedableRng;
    let mut out = Vec::new();
    for (k, (script, ring)) in DEGSEQ_FIXTURES.iter().enumerate() {
        let s = session(script);
        for (name, i) in &s.ideals {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ ((k as u64) << 32));
            let base = initial_ideal(i).unwrap();
            let degrees = base.degree_sequence();
            let mu = i.minimal_basis().unwrap().mu;
            let mut stable = true;
            let mut mu_matches = base.ideal.minimal_basis().unwrap().mu == mu;
            for _ in 0..rounds {
                let regen = i.algebra().ideal_of(&random_regeneration(&i.elements(), &mut rng));
                let other = initial_ideal(&regen).unwrap();
                stable &= other.degree_sequence() == degrees;
                mu_matches &= other.ideal.minimal_basis().unwrap().mu == mu;
            }
            out.push(Regenerations {
                label: format!("{ring} {name} = {i}"),
                degrees,
                stable,
                mu_matches,
            });
        }
    }
    out
}

/// Elements `sum a_i g_i` over a minimal basis with some `a_i(0) != 0` lie
/// in `I \ mI`; their initial forms must lie in the computed `in I`.
/// Returns the labels of ideals where one did not.
pub fn initial_forms_fuzz(seed: u64, rounds: usize) -> (usize, Vec<String>) {
    use gradmult::degseq::initial_ideal;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut bad = Vec::new();
    for (script, ring) in DEGSEQ_FIXTURES {
        let s = session(script);
        for (name, i) in &s.ideals {
            let alg = i.algebra().clone();
            let r = alg.ring().clone();
            let n = r.nvars();
            let init = initial_ideal(i).unwrap();
            let basis = i.minimal_basis().unwrap().elements;
            for _ in 0..rounds {
                let lead = rng.gen_range(0..basis.len());
                let mut f = alg.zero();
                for (k, g) in basis.iter().enumerate() {
                    let mut a = Polynomial::<F>::constant(&r, if k == lead { F::random_nonzero(&mut rng) } else { F::random(&mut rng) });
                    for _ in 0..3 {
                        let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                        a = &a + &Polynomial::term(&r, Monomial::from_exponents(&e), F::random(&mut rng));
                    }
                    f = f.add(&alg.element(&a).mul(g));
                }
                checked += 1;
                if !f.is_zero() && !init.ideal.contains(&f.initial_form()) {
                    bad.push(format!("{ring} {name}: in({}) not in {}", f.rep(), init.ideal));
                    break;
                }
            }
        }
    }
    (checked, bad)
}
