//! Rees algebra presentations and their multiplicity at the maximal
//! homogeneous ideal.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{AlgElement, AlgIdeal};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{groebner_basis, Ideal};
use crate::monomial::{MonomialOrder, Ring};
use crate::multiplicity::{stable_difference, SamuelResult, Method};
use crate::poly::Polynomial;

/// `R(I) = k[x, T] / rees_ideal` with `T_j ↦ g_j t`.
#[derive(Clone, Debug)]
pub struct ReesPresentation<F: Field> {
    /// Variables `x_1..x_n, T_1..T_s`.
    pub ring: Arc<Ring>,
    pub ideal: Ideal<F>,
    pub nx: usize,
    pub generators: Vec<AlgElement<F>>,
    /// Krull dimension of `R(I)`.
    pub dim: usize,
}

impl<F: Field> ReesPresentation<F> {
    pub fn nt(&self) -> usize {
        self.generators.len()
    }

    /// `k[x, T] / (rees_ideal + (x))`, whose dimension is the analytic
    /// spread.
    pub fn fiber_cone(&self) -> Ideal<F> {
        let xs: Vec<Polynomial<F>> = (0..self.nx).map(|i| Polynomial::var(&self.ring, i)).collect();
        self.ideal.add_gens(&xs)
    }

    /// `T_j ↦ g_j t` sends every relation into `P S[t]`.
    pub fn check_substitution(&self) -> bool {
        let alg = self.generators[0].algebra();
        let nx = self.nx;
        let mut names = alg.ring().names().to_vec();
        names.push(alg.ring().fresh_name("t"));
        let big = Ring::new(names, MonomialOrder::DegRevLex);
        let t = Polynomial::var(&big, nx);
        let mut images: Vec<Polynomial<F>> = (0..nx).map(|i| Polynomial::var(&big, i)).collect();
        let map: Vec<usize> = (0..nx).collect();
        for g in &self.generators {
            images.push(&g.rep().remap(&big, &map) * &t);
        }
        let p_ext = Ideal::from_gens_unchecked(
            &big,
            alg.relations().gens().iter().map(|r| r.remap(&big, &map)).collect(),
        );
        self.ideal
            .groebner()
            .iter()
            .all(|r| p_ext.contains(&r.substitute(&big, &images)))
    }
}

/// Presents `R(I)` on the given generators by eliminating `t` from
/// `P + (T_j - g_j t)`.
pub fn rees_presentation_on<F: Field>(generators: Vec<AlgElement<F>>) -> Result<ReesPresentation<F>> {
    let first = generators
        .first()
        .ok_or_else(|| Error::ZeroIdeal("Rees algebra of the zero ideal".into()))?;
    let alg = first.algebra().clone();
    let base = alg.ring();
    let nx = base.nvars();
    let s = generators.len();
    let mut tnames = Vec::with_capacity(s);
    for j in 1..=s {
        let mut name = format!("T{j}");
        while base.var_index(&name).is_some() || tnames.contains(&name) {
            name.push('\'');
        }
        tnames.push(name);
    }
    let tname = {
        let mut name = "t".to_string();
        while base.var_index(&name).is_some() || tnames.contains(&name) {
            name.push('\'');
        }
        name
    };
    // elimination ring: t, x_1..x_n, T_1..T_s
    let mut enames = vec![tname];
    enames.extend(base.names().iter().cloned());
    enames.extend(tnames.iter().cloned());
    let elim = Ring::new(enames, MonomialOrder::Elimination { block: 1 });
    let xmap: Vec<usize> = (1..=nx).collect();
    let t = Polynomial::var(&elim, 0);
    let mut gens: Vec<Polynomial<F>> = alg
        .relations()
        .groebner()
        .iter()
        .map(|r| r.remap(&elim, &xmap))
        .collect();
    for (j, g) in generators.iter().enumerate() {
        let tj = Polynomial::var(&elim, 1 + nx + j);
        gens.push(&tj - &(&g.rep().remap(&elim, &xmap) * &t));
    }
    let gb = groebner_basis(&elim, &gens, None);

    let mut names = base.names().to_vec();
    names.extend(tnames);
    let ring = Ring::new(names, MonomialOrder::DegRevLex);
    // position 0 (t) never occurs in the kept elements
    let back: Vec<usize> = std::iter::once(0).chain(0..nx + s).collect();
    let kept: Vec<Polynomial<F>> = gb
        .iter()
        .filter(|g| g.avoids_vars(&[0]))
        .map(|g| g.remap(&ring, &back))
        .collect();
    let ideal = Ideal::new(&ring, kept)?;
    let dim = ideal
        .krull_dimension()
        .ok_or_else(|| Error::Internal("Rees ideal is the unit ideal".into()))?;
    Ok(ReesPresentation {
        ring,
        ideal,
        nx,
        generators,
        dim,
    })
}

/// Presents `R(I)` on a minimal basis (homogeneous when `I` is).
pub fn rees_presentation<F: Field>(i: &AlgIdeal<F>) -> Result<ReesPresentation<F>> {
    let gens = if i.is_homogeneous() {
        i.homogeneous_minimal_basis()?
    } else {
        i.minimal_basis()?.elements
    };
    rees_presentation_on(gens)
}

/// `e(R(I))` from the `(dim R)`-th differences of
/// `k ↦ dim_k k[x, T] / (rees_ideal + N^k)`.
pub fn rees_multiplicity_oracle<F: Field>(
    pres: &ReesPresentation<F>,
    window: (u32, u32),
) -> Result<SamuelResult> {
    let order = pres.dim;
    let (lo, hi) = window;
    if lo == 0 || hi < lo || ((hi - lo + 1) as usize) < order + 3 {
        return Err(Error::Precondition(format!(
            "window {lo}..={hi} too short for differences of order {order}"
        )));
    }
    let lengths: Vec<u64> = if pres.ideal.is_homogeneous() {
        let h = pres.ideal.hilbert()?;
        (lo..=hi).map(|k| h.cumulative(k) as u64).collect()
    } else {
        (lo..=hi)
            .into_par_iter()
            .map(|k| pres.ideal.colength_plus_max_power(k))
            .collect()
    };
    let values: Vec<i64> = lengths.iter().map(|v| *v as i64).collect();
    let (value, witness) = stable_difference(&values, order, window)?;
    Ok(SamuelResult {
        value: value as u64,
        method: Method::FiniteDifferenceOracle,
        window: Some(window),
        lengths,
        witness,
    })
}

/// Default window for the Rees oracle.
pub fn default_rees_window(dim_s: usize) -> (u32, u32) {
    (1, dim_s as u32 + 9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::field::Fp;
    use crate::monomial::Monomial;

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
    fn rees_of_maximal_ideal() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let pres = rees_presentation(&s.maximal_ideal()).unwrap();
        assert_eq!(pres.dim, 3);
        assert_eq!(pres.ideal.groebner().len(), 1);
        // y T1 - x T2
        let rr = &pres.ring;
        let rel = p(rr, &[(&[0, 1, 1, 0], 1), (&[1, 0, 0, 1], -1)]);
        assert!(pres.ideal.contains(&rel));
        assert!(pres.check_substitution());
        assert_eq!(pres.fiber_cone().krull_dimension(), Some(2));
        let e = rees_multiplicity_oracle(&pres, default_rees_window(2)).unwrap();
        assert_eq!(e.value, 2);
    }

    #[test]
    fn rees_of_principal_ideal() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let pres = rees_presentation(&s.ideal(&[p(&r, &[(&[1, 0], 1)])])).unwrap();
        assert!(pres.ideal.is_zero());
        assert_eq!(pres.dim, 3);
    }

    #[test]
    fn rees_of_mixed_degree_ideal() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1)]), p(&r, &[(&[0, 2], 1)])]);
        let pres = rees_presentation(&i).unwrap();
        assert!(!pres.ideal.is_homogeneous());
        assert!(pres.check_substitution());
        let e = rees_multiplicity_oracle(&pres, default_rees_window(2)).unwrap();
        assert_eq!(e.value, 2);
    }
}
