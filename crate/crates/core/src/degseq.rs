//! Initial ideals and degree sequences of arbitrary ideals of `S`.
//!
//! Starting from a minimal basis, an element whose initial form lies in the
//! graded span of the other initial forms is rewritten to cancel it, which
//! strictly raises its order. On termination the initial forms are graded
//! independent and generate `in I`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{AlgElement, AlgIdeal, Order};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Span;
use crate::monomial::Monomial;
use crate::multiplicity::{
    colength, default_window, is_m_primary, quotient_multiplicity, samuel_oracle, Method,
};
use crate::poly::Polynomial;

/// Output of [`initial_ideal`].
#[derive(Clone, Debug)]
pub struct InitialIdeal<F: Field> {
    /// `in I`, generated by the initial forms of `basis`.
    pub ideal: AlgIdeal<F>,
    /// The adjusted minimal basis of `I`.
    pub basis: Vec<AlgElement<F>>,
    /// `μ(I)`.
    pub mu: usize,
    /// Number of rewriting steps performed.
    pub replacements: usize,
}

impl<F: Field> InitialIdeal<F> {
    pub fn degree_sequence(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .basis
            .iter()
            .map(|x| x.order().finite().expect("basis elements are nonzero"))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn initial_forms(&self) -> Vec<AlgElement<F>> {
        self.basis.iter().map(|x| x.initial_form()).collect()
    }
}

/// Coordinates of homogeneous polynomials on a shared monomial index.
fn coordinates<F: Field>(polys: &[&Polynomial<F>]) -> (usize, Vec<Vec<F>>) {
    let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.exponents().to_vec()).or_insert(next);
        }
    }
    let dim = index.len();
    let vecs = polys
        .iter()
        .map(|p| {
            let mut v = vec![F::zero(); dim];
            for (m, c) in p.terms() {
                v[index[m.exponents()]] = c.clone();
            }
            v
        })
        .collect();
    (dim, vecs)
}

/// Finds `u_k`, `i_k`, `c_k` with `in x_j = Σ c_k u_k in x_{i_k}` in
/// `S_{o(x_j)}`, the `u_k` monomials of degree `o(x_j) - o(x_{i_k})`.
fn graded_dependency<F: Field>(
    basis: &[AlgElement<F>],
    j: usize,
) -> Option<Vec<(usize, Monomial, F)>> {
    let s = basis[j].algebra();
    let oj = basis[j].order().finite()?;
    let target = basis[j].initial_form();
    let mut labels: Vec<(usize, Monomial)> = Vec::new();
    let mut cols: Vec<Polynomial<F>> = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        if i == j {
            continue;
        }
        let Some(oi) = x.order().finite() else { continue };
        if oi > oj {
            continue;
        }
        let in_i = x.initial_form();
        for u in Monomial::all_of_degree(s.nvars(), oj - oi) {
            let prod = s.reduce(&in_i.rep().mul_term(&u, &F::one()));
            if !prod.is_zero() {
                labels.push((i, u));
                cols.push(prod);
            }
        }
    }
    if cols.is_empty() {
        return None;
    }
    let mut all: Vec<&Polynomial<F>> = cols.iter().collect();
    all.push(target.rep());
    let (dim, mut vecs) = coordinates(&all);
    let t = vecs.pop().unwrap();
    let span = Span::new(dim, &vecs);
    let coefs = span.solve(&t)?;
    Some(
        labels
            .into_iter()
            .zip(coefs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, u), c)| (i, u, c))
            .collect(),
    )
}

/// Computes `in I` and an adjusted minimal basis of `I`.
pub fn initial_ideal<F: Field>(i: &AlgIdeal<F>) -> Result<InitialIdeal<F>> {
    let mb = i.minimal_basis()?;
    let mut basis = mb.elements;
    let s = i.algebra().clone();
    let max_rep_degree = basis
        .iter()
        .filter_map(|x| x.rep().total_degree())
        .max()
        .unwrap_or(0) as usize;
    let cap = 64 + 4 * basis.len() * (max_rep_degree + 1);
    let mut replacements = 0;
    loop {
        // scan by decreasing (order, index), rewriting the first dependent one
        let mut idx: Vec<usize> = (0..basis.len()).collect();
        idx.sort_by_key(|k| std::cmp::Reverse((basis[*k].order(), *k)));
        let mut changed = false;
        for j in idx {
            if let Some(dep) = graded_dependency(&basis, j) {
                let mut rep = basis[j].rep().clone();
                for (k, u, c) in dep {
                    rep = &rep - &basis[k].rep().mul_term(&u, &c);
                }
                let new = s.element(&rep);
                if new.is_zero() {
                    return Err(Error::Internal(format!(
                        "minimal basis element {} became zero",
                        basis[j]
                    )));
                }
                debug_assert!(new.order() > basis[j].order());
                basis[j] = new;
                replacements += 1;
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
        if replacements > cap {
            return Err(Error::Internal("initial-form adjustment did not terminate".into()));
        }
    }
    let initials: Vec<AlgElement<F>> = basis.iter().map(|x| x.initial_form()).collect();
    let ideal = s.ideal_of(&initials);
    Ok(InitialIdeal {
        ideal,
        mu: basis.len(),
        basis,
        replacements,
    })
}

/// Sorted orders of an adjusted minimal basis.
pub fn degree_sequence<F: Field>(i: &AlgIdeal<F>) -> Result<Vec<u32>> {
    Ok(initial_ideal(i)?.degree_sequence())
}

/// Which invariant to compare between `I` and `in I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferKind {
    Colength,
    Samuel,
    GradedMultiplicity,
}

impl TransferKind {
    pub fn tag(self) -> &'static str {
        match self {
            TransferKind::Colength => "colength",
            TransferKind::Samuel => "samuel",
            TransferKind::GradedMultiplicity => "graded-mult",
        }
    }
}

impl fmt::Display for TransferKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Both sides of a transfer comparison. `equal` is reported, never
/// asserted: the equalities need `S` to be a domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub kind: TransferKind,
    pub lhs: u64,
    pub lhs_method: &'static str,
    /// `None` when `S / in I` has infinite length, so the right side
    /// diverges.
    pub rhs: Option<u64>,
    pub rhs_method: &'static str,
    pub equal: bool,
}

pub fn verify_initial_transfer<F: Field>(i: &AlgIdeal<F>, kind: TransferKind) -> Result<TransferReport> {
    let s = i.algebra().clone();
    let init = initial_ideal(i)?;
    let in_i = &init.ideal;
    let (lhs, lhs_method, rhs, rhs_method) = match kind {
        TransferKind::Colength => {
            if !is_m_primary(i) {
                return Err(Error::Precondition(format!("{i} is not m-primary")));
            }
            let rhs = if in_i.quotient_dim() == Some(0) {
                Some(colength(in_i)?)
            } else {
                None
            };
            (colength(i)?, "k-dimension", rhs, "k-dimension")
        }
        TransferKind::Samuel => {
            if init.mu != s.dim() || i.quotient_dim() != Some(0) {
                return Err(Error::Precondition(format!("{i} is not a parameter ideal")));
            }
            let w = default_window(s.dim());
            let lhs = samuel_oracle(i, w)?;
            let rhs = if in_i.quotient_dim() == Some(0) {
                Some(samuel_oracle(in_i, w)?.value)
            } else {
                None
            };
            (
                lhs.value,
                Method::FiniteDifferenceOracle.tag(),
                rhs,
                Method::FiniteDifferenceOracle.tag(),
            )
        }
        TransferKind::GradedMultiplicity => {
            let d = i.quotient_dim();
            if d.is_none() || d != in_i.quotient_dim() {
                return Err(Error::Precondition(format!(
                    "dim S/I = {d:?} differs from dim S/in I = {:?}",
                    in_i.quotient_dim()
                )));
            }
            let w = (1, d.unwrap() as u32 + 8);
            let lhs = quotient_multiplicity(i.lift(), w)?;
            let rhs = quotient_multiplicity(in_i.lift(), w)?;
            (lhs.value, lhs.method.tag(), Some(rhs.value), rhs.method.tag())
        }
    };
    Ok(TransferReport {
        kind,
        lhs,
        lhs_method,
        rhs,
        rhs_method,
        equal: Some(lhs) == rhs,
    })
}

/// A generating set of the same ideal: a random unitriangular matrix with
/// affine-linear entries, followed by a random invertible scalar matrix.
pub fn random_regeneration<F: Field, R: rand::Rng>(gens: &[AlgElement<F>], rng: &mut R) -> Vec<AlgElement<F>> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let s = first.algebra().clone();
    let n = s.nvars();
    let random_affine = |rng: &mut R| -> AlgElement<F> {
        let mut acc = s.element(&Polynomial::constant(s.ring(), F::random(rng)));
        for k in 0..n {
            acc = acc.add(&s.var(k).scale(&F::random(rng)));
        }
        acc
    };
    let mut mixed: Vec<AlgElement<F>> = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let mut h = g.clone();
        for earlier in &gens[..i] {
            h = h.add(&earlier.mul(&random_affine(rng)));
        }
        mixed.push(h);
    }
    let k = gens.len();
    let matrix = loop {
        let rows: Vec<Vec<F>> = (0..k).map(|_| (0..k).map(|_| F::random(rng)).collect()).collect();
        if Span::new(k, &rows).rank() == k {
            break rows;
        }
    };
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(&mixed)
                .fold(s.zero(), |acc, (c, h)| acc.add(&h.scale(c)))
        })
        .collect()
}

/// Orders of a sequence of elements, in the given order.
pub fn orders<F: Field>(xs: &[AlgElement<F>]) -> Vec<Order> {
    xs.iter().map(|x| x.order()).collect()
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
    fn homogeneous_ideal_is_its_own_initial_ideal() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let m2 = s.irrelevant_power(2);
        let init = initial_ideal(&m2).unwrap();
        assert!(init.ideal.equals(&m2));
        assert_eq!(init.degree_sequence(), vec![2, 2, 2]);
    }

    #[test]
    fn regeneration_keeps_the_ideal() {
        use rand::SeedableRng;
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[0, 2], 1)]), p(&r, &[(&[1, 1], 1)])]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let regen = s.ideal_of(&random_regeneration(&i.elements(), &mut rng));
            assert!(regen.equals(&i));
            assert_eq!(degree_sequence(&regen).unwrap(), vec![1, 3]);
        }
    }

    #[test]
    fn counterexample_initial_ideal() {
        let r = Ring::new(["X", "Y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::new(&r, vec![p(&r, &[(&[1, 1], 1)]), p(&r, &[(&[2, 0], 1)])]).unwrap();
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[0, 2], 1)])]);
        let init = initial_ideal(&i).unwrap();
        assert!(init.ideal.equals(&s.ideal(&[p(&r, &[(&[1, 0], 1)])])));
        assert_eq!(init.degree_sequence(), vec![1]);
        let rep = verify_initial_transfer(&i, TransferKind::Samuel).unwrap();
        assert_eq!((rep.lhs, rep.rhs, rep.equal), (2, None, false));
    }

    #[test]
    fn linear_dependency_beyond_proportionality() {
        // in-forms X, Y, X + Y are pairwise independent but dependent
        let r = Ring::new(["X", "Y", "Z"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[
            p(&r, &[(&[1, 0, 0], 1), (&[0, 2, 0], 1)]),
            p(&r, &[(&[0, 1, 0], 1)]),
            p(&r, &[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 2], 1)]),
        ]);
        let init = initial_ideal(&i).unwrap();
        assert_eq!(init.degree_sequence(), vec![1, 1, 2]);
        let expected = s.ideal(&[
            p(&r, &[(&[1, 0, 0], 1)]),
            p(&r, &[(&[0, 1, 0], 1)]),
            p(&r, &[(&[0, 0, 2], 1)]),
        ]);
        assert!(init.ideal.equals(&expected));
    }

    #[test]
    fn multiple_of_initial_form_is_cancelled() {
        // (x + y^2, xy) contains y^3, so in I = (x, y^3)
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[0, 2], 1)]), p(&r, &[(&[1, 1], 1)])]);
        let init = initial_ideal(&i).unwrap();
        assert_eq!(init.degree_sequence(), vec![1, 3]);
        let rep = verify_initial_transfer(&i, TransferKind::Colength).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (3, Some(3)));
    }

    #[test]
    fn non_homogeneous_generators_of_homogeneous_ideal() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[0, 2], 1)]), p(&r, &[(&[0, 1], 1)])]);
        assert_eq!(degree_sequence(&i).unwrap(), vec![1, 1]);
        let rep = verify_initial_transfer(&i, TransferKind::Colength).unwrap();
        assert_eq!((rep.lhs, rep.rhs, rep.equal), (1, Some(1), true));
    }
}
