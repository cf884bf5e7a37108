//! Standard graded algebras `S = k[x]/P`, their elements and ideals.
//!
//! Elements are stored as normal forms modulo `P` under degrevlex. Since
//! `P` is homogeneous, normal forms respect the grading, so the order and
//! initial form of a residue class are read off its representative.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{HilbertData, Ideal, KDim};
use crate::monomial::{Monomial, MonomialOrder, Ring};
use crate::poly::{same_ring, Polynomial};

/// `o(x)`: least degree of a nonzero component, `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => write!(f, "+inf"),
        }
    }
}

/// `S = k[x_1..x_n] / P` with `P` homogeneous and proper.
pub struct GradedAlgebra<F: Field> {
    ring: Arc<Ring>,
    relations: Ideal<F>,
    hilbert: HilbertData,
}

impl<F: Field> fmt::Debug for GradedAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[{}]/{}", self.ring.names().join(","), self.relations)
    }
}

impl<F: Field> GradedAlgebra<F> {
    /// Relations are moved into a degrevlex copy of `ring` when needed.
    pub fn new(ring: &Arc<Ring>, relations: Vec<Polynomial<F>>) -> Result<Arc<Self>> {
        let ring = if ring.order() == MonomialOrder::DegRevLex {
            ring.clone()
        } else {
            ring.with_order(MonomialOrder::DegRevLex)
        };
        let mut rels = Vec::with_capacity(relations.len());
        for r in relations {
            if r.ring().nvars() != ring.nvars() {
                return Err(Error::RingMismatch(format!("relation {r} has the wrong variable count")));
            }
            if !r.is_homogeneous() {
                return Err(Error::NonHomogeneous(format!("relation {r}")));
            }
            rels.push(r.reorder(&ring));
        }
        let relations = Ideal::new(&ring, rels)?;
        if relations.is_unit() {
            return Err(Error::UnitIdeal("relations generate the unit ideal".into()));
        }
        let hilbert = relations.hilbert()?;
        Ok(Arc::new(GradedAlgebra {
            ring,
            relations,
            hilbert,
        }))
    }

    /// The polynomial ring itself.
    pub fn polynomial_ring(ring: &Arc<Ring>) -> Arc<Self> {
        Self::new(ring, Vec::new()).expect("the zero ideal is proper and homogeneous")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// `P` with its cached Gröbner basis.
    pub fn relations(&self) -> &Ideal<F> {
        &self.relations
    }

    pub fn hilbert(&self) -> &HilbertData {
        &self.hilbert
    }

    /// `dim S`.
    pub fn dim(&self) -> usize {
        self.hilbert.dimension
    }

    /// `e(S)`.
    pub fn multiplicity(&self) -> u64 {
        self.hilbert.multiplicity as u64
    }

    pub fn reduce(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let f = if same_ring(f.ring(), &self.ring) {
            f.clone()
        } else {
            f.reorder(&self.ring)
        };
        self.relations.normal_form(&f)
    }

    pub fn element(self: &Arc<Self>, f: &Polynomial<F>) -> AlgElement<F> {
        AlgElement {
            alg: self.clone(),
            rep: self.reduce(f),
        }
    }

    pub fn var(self: &Arc<Self>, i: usize) -> AlgElement<F> {
        self.element(&Polynomial::var(&self.ring, i))
    }

    pub fn zero(self: &Arc<Self>) -> AlgElement<F> {
        self.element(&Polynomial::zero(&self.ring))
    }

    pub fn ideal(self: &Arc<Self>, gens: &[Polynomial<F>]) -> AlgIdeal<F> {
        AlgIdeal::from_reps(self, gens.iter().map(|g| self.reduce(g)).collect())
    }

    pub fn ideal_of(self: &Arc<Self>, elems: &[AlgElement<F>]) -> AlgIdeal<F> {
        AlgIdeal::from_reps(self, elems.iter().map(|e| e.rep.clone()).collect())
    }

    /// The irrelevant ideal `m`.
    pub fn maximal_ideal(self: &Arc<Self>) -> AlgIdeal<F> {
        self.irrelevant_power(1)
    }

    /// `m^u`, generated by the nonzero classes of the degree-`u` monomials.
    pub fn irrelevant_power(self: &Arc<Self>, u: u32) -> AlgIdeal<F> {
        let gens: Vec<Polynomial<F>> = Monomial::all_of_degree(self.nvars(), u)
            .into_iter()
            .map(|m| self.reduce(&Polynomial::term(&self.ring, m, F::one())))
            .filter(|p| !p.is_zero())
            .collect();
        AlgIdeal::from_reps(self, dedup_monic(gens))
    }

    /// The lift of an ideal generated by `reps`, i.e. `P + (reps)`.
    pub fn lift_of(&self, reps: &[Polynomial<F>]) -> Ideal<F> {
        let mut gens = self.relations.groebner().to_vec();
        gens.extend(reps.iter().cloned());
        Ideal::from_gens_unchecked(&self.ring, gens)
    }
}

fn dedup_monic<F: Field>(gens: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
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

/// A residue class of `S`, held as its normal form.
#[derive(Clone)]
pub struct AlgElement<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    rep: Polynomial<F>,
}

impl<F: Field> PartialEq for AlgElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl<F: Field> fmt::Display for AlgElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl<F: Field> fmt::Debug for AlgElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl<F: Field> AlgElement<F> {
    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn rep(&self) -> &Polynomial<F> {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn order(&self) -> Order {
        match self.rep.low_degree() {
            Some(d) => Order::Finite(d),
            None => Order::Infinite,
        }
    }

    /// `in x`, the component of degree `o(x)`; zero for zero.
    pub fn initial_form(&self) -> AlgElement<F> {
        let rep = match self.rep.low_degree() {
            Some(d) => self.rep.homogeneous_component(d),
            None => self.rep.clone(),
        };
        AlgElement {
            alg: self.alg.clone(),
            rep,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rep.is_homogeneous()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with_rep(&self.rep + &other.rep)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.with_rep(&self.rep - &other.rep)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.with_rep(self.alg.reduce(&(&self.rep * &other.rep)))
    }

    pub fn scale(&self, c: &F) -> Self {
        self.with_rep(self.rep.scale(c))
    }

    fn with_rep(&self, rep: Polynomial<F>) -> Self {
        AlgElement {
            alg: self.alg.clone(),
            rep,
        }
    }
}

/// An ideal of `S`, carried by normal-form generators and its lift
/// `P + (generators)` in the polynomial ring.
#[derive(Clone)]
pub struct AlgIdeal<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    reps: Vec<Polynomial<F>>,
    lift: Ideal<F>,
}

impl<F: Field> fmt::Display for AlgIdeal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.reps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl<F: Field> fmt::Debug for AlgIdeal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Outcome of [`AlgIdeal::minimal_basis`].
#[derive(Clone, Debug)]
pub struct MinimalBasis<F: Field> {
    pub elements: Vec<AlgElement<F>>,
    /// `μ(I)`, the dimension of `I_m / m I_m`.
    pub mu: usize,
    /// The elements generate `I` only after localizing at `m`.
    pub local_only: bool,
}

impl<F: Field> AlgIdeal<F> {
    pub(crate) fn from_reps(alg: &Arc<GradedAlgebra<F>>, reps: Vec<Polynomial<F>>) -> Self {
        let reps: Vec<Polynomial<F>> = reps.into_iter().filter(|r| !r.is_zero()).collect();
        let lift = alg.lift_of(&reps);
        AlgIdeal {
            alg: alg.clone(),
            reps,
            lift,
        }
    }

    fn from_reps_and_lift(alg: &Arc<GradedAlgebra<F>>, reps: Vec<Polynomial<F>>, lift: Ideal<F>) -> Self {
        AlgIdeal {
            alg: alg.clone(),
            reps,
            lift,
        }
    }

    /// Ideal of `S` whose lift is `lift`; `lift` must contain `P`.
    pub fn from_lift(alg: &Arc<GradedAlgebra<F>>, lift: Ideal<F>) -> Self {
        let reps: Vec<Polynomial<F>> = lift
            .groebner()
            .iter()
            .map(|g| alg.reduce(g))
            .filter(|g| !g.is_zero())
            .collect();
        Self::from_reps_and_lift(alg, dedup_monic(reps), lift)
    }

    pub fn unit(alg: &Arc<GradedAlgebra<F>>) -> Self {
        Self::from_reps(alg, vec![Polynomial::one(alg.ring())])
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn reps(&self) -> &[Polynomial<F>] {
        &self.reps
    }

    pub fn elements(&self) -> Vec<AlgElement<F>> {
        self.reps.iter().map(|r| self.alg.element(r)).collect()
    }

    pub fn lift(&self) -> &Ideal<F> {
        &self.lift
    }

    pub fn is_zero(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lift.is_unit()
    }

    pub fn contains(&self, x: &AlgElement<F>) -> bool {
        self.lift.contains(&x.rep)
    }

    pub fn contains_poly(&self, f: &Polynomial<F>) -> bool {
        self.lift.contains(f)
    }

    /// `x ∈ I S_m`: some element of `(I : x)` is a unit at `m`.
    pub fn contains_locally(&self, f: &Polynomial<F>) -> bool {
        if self.lift.contains(f) {
            return true;
        }
        match self.lift.colon_poly(f) {
            Ok(c) => c.sum(&Ideal::maximal(self.alg.ring())).is_unit(),
            Err(_) => false,
        }
    }

    pub fn contains_ideal(&self, other: &AlgIdeal<F>) -> bool {
        self.lift.contains_ideal(&other.lift)
    }

    pub fn equals(&self, other: &AlgIdeal<F>) -> bool {
        self.lift.equals(&other.lift)
    }

    /// Whether the ideal is generated by homogeneous elements.
    pub fn is_homogeneous(&self) -> bool {
        self.lift.is_homogeneous()
    }

    pub fn sum(&self, other: &AlgIdeal<F>) -> AlgIdeal<F> {
        let mut reps = self.reps.clone();
        reps.extend(other.reps.iter().cloned());
        Self::from_reps(&self.alg, reps)
    }

    pub fn product(&self, other: &AlgIdeal<F>) -> AlgIdeal<F> {
        let mut reps = Vec::with_capacity(self.reps.len() * other.reps.len());
        for a in &self.reps {
            for b in &other.reps {
                reps.push(self.alg.reduce(&(a * b)));
            }
        }
        let reps = dedup_monic(reps);
        let lift = self.alg.lift_of(&reps);
        // a Gröbner basis of the lift often generates more economically
        let shorter: Vec<Polynomial<F>> = lift
            .groebner()
            .iter()
            .filter(|g| !self.alg.relations.contains(g))
            .cloned()
            .collect();
        if shorter.len() < reps.len() {
            Self::from_reps_and_lift(&self.alg, shorter, lift)
        } else {
            Self::from_reps_and_lift(&self.alg, reps, lift)
        }
    }

    /// `[I^0, I^1, ..., I^n]`.
    pub fn powers(&self, n: u32) -> Vec<AlgIdeal<F>> {
        let mut out = vec![AlgIdeal::unit(&self.alg)];
        for _ in 0..n {
            let next = out.last().unwrap().product(self);
            out.push(next);
        }
        out
    }

    pub fn power(&self, n: u32) -> AlgIdeal<F> {
        self.powers(n).pop().unwrap()
    }

    pub fn intersect(&self, other: &AlgIdeal<F>) -> AlgIdeal<F> {
        Self::from_lift(&self.alg, self.lift.intersect(&other.lift))
    }

    pub fn colon(&self, other: &AlgIdeal<F>) -> Result<AlgIdeal<F>> {
        Ok(Self::from_lift(&self.alg, self.lift.colon(&other.lift)?))
    }

    /// `dim S/I`; `None` for the unit ideal.
    pub fn quotient_dim(&self) -> Option<usize> {
        self.lift.krull_dimension()
    }

    /// `dim_k S/I`.
    pub fn k_dimension(&self) -> KDim {
        self.lift.k_dimension()
    }

    /// A minimal generating set of `I_m` chosen greedily by order, then
    /// input position, from the given generators.
    pub fn minimal_basis(&self) -> Result<MinimalBasis<F>> {
        if self.is_zero() {
            return Err(Error::ZeroIdeal("minimal basis of the zero ideal".into()));
        }
        if self.is_unit() {
            return Err(Error::UnitIdeal("minimal basis of the unit ideal".into()));
        }
        let mut cand: Vec<(Order, usize, &Polynomial<F>)> = self
            .reps
            .iter()
            .enumerate()
            .map(|(i, r)| (self.alg.element(r).order(), i, r))
            .collect();
        cand.sort_by_key(|(o, i, _)| (*o, *i));
        let m = self.alg.maximal_ideal();
        let m_i = m.product(self);
        let homogeneous = self.is_homogeneous();
        let mut chosen: Vec<Polynomial<F>> = Vec::new();
        for (_, _, g) in cand {
            let mut gens = m_i.reps.clone();
            gens.extend(chosen.iter().cloned());
            let sub = AlgIdeal::from_reps(&self.alg, gens);
            let redundant = if homogeneous {
                sub.contains_poly(g)
            } else {
                sub.contains_locally(g)
            };
            if !redundant {
                chosen.push(g.clone());
            }
        }
        let generated = AlgIdeal::from_reps(&self.alg, chosen.clone());
        let local_only = !generated.contains_ideal(self);
        Ok(MinimalBasis {
            mu: chosen.len(),
            elements: chosen.iter().map(|r| self.alg.element(r)).collect(),
            local_only,
        })
    }

    /// Homogeneous minimal generators of a homogeneous ideal, sorted by
    /// degree.
    pub fn homogeneous_minimal_basis(&self) -> Result<Vec<AlgElement<F>>> {
        if !self.is_homogeneous() {
            return Err(Error::NonHomogeneous(format!("ideal {self}")));
        }
        let mut comps: Vec<Polynomial<F>> = Vec::new();
        for r in self.lift.groebner() {
            for (_, c) in r.homogeneous_components() {
                let c = self.alg.reduce(&c);
                if !c.is_zero() {
                    comps.push(c);
                }
            }
        }
        let graded = AlgIdeal::from_reps_and_lift(&self.alg, dedup_monic(comps), self.lift.clone());
        let mb = graded.minimal_basis()?;
        Ok(mb.elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

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

    fn counterexample() -> Arc<GradedAlgebra<F>> {
        let r = Ring::new(["X", "Y"], MonomialOrder::DegRevLex);
        GradedAlgebra::new(&r, vec![p(&r, &[(&[1, 1], 1)]), p(&r, &[(&[2, 0], 1)])]).unwrap()
    }

    #[test]
    fn algebra_invariants() {
        let s = counterexample();
        assert_eq!((s.dim(), s.multiplicity()), (1, 1));
        let r = Ring::new(["x", "y", "z"], MonomialOrder::DegRevLex);
        let cone = GradedAlgebra::new(&r, vec![p(&r, &[(&[0, 2, 1], 1), (&[3, 0, 0], -1)])]).unwrap();
        assert_eq!((cone.dim(), cone.multiplicity()), (2, 3));
    }

    #[test]
    fn non_homogeneous_relation_rejected() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let err = GradedAlgebra::<F>::new(&r, vec![p(&r, &[(&[1, 0], 1), (&[0, 2], 1)])]).unwrap_err();
        assert_eq!(err.code(), "NON-HOMOGENEOUS");
        let err = GradedAlgebra::<F>::new(&r, vec![p(&r, &[(&[0, 0], 1)])]).unwrap_err();
        assert_eq!(err.code(), "UNIT-IDEAL");
    }

    #[test]
    fn order_and_initial_form() {
        let s = counterexample();
        let r = s.ring().clone();
        let x = s.element(&p(&r, &[(&[1, 0], 1), (&[0, 2], 1)]));
        assert_eq!(x.order(), Order::Finite(1));
        assert_eq!(x.initial_form().rep(), &p(&r, &[(&[1, 0], 1)]));
        // x^2 = Y^4 in S
        assert_eq!(x.mul(&x).rep(), &p(&r, &[(&[0, 4], 1)]));
        assert_eq!(s.zero().order(), Order::Infinite);
        assert!(s.zero().initial_form().is_zero());
    }

    #[test]
    fn irrelevant_powers() {
        let s = counterexample();
        assert!(s.irrelevant_power(0).is_unit());
        let m2 = s.irrelevant_power(2);
        assert_eq!(m2.reps().len(), 1);
        assert_eq!(m2.reps()[0], p(s.ring(), &[(&[0, 2], 1)]));
    }

    #[test]
    fn minimal_bases() {
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let x = p(&r, &[(&[1, 0], 1)]);
        let i = s.ideal(&[x.clone(), p(&r, &[(&[1, 0], 1), (&[0, 1], 1)])]);
        assert_eq!(i.minimal_basis().unwrap().mu, 2);
        let j = s.ideal(&[x.clone(), p(&r, &[(&[1, 0], 1), (&[2, 0], 1)])]);
        let mb = j.minimal_basis().unwrap();
        assert_eq!(mb.mu, 1);
        assert_eq!(mb.elements[0].rep(), &x);
        assert_eq!(s.irrelevant_power(2).minimal_basis().unwrap().mu, 3);
    }

    #[test]
    fn local_minimal_basis_drops_unit_multiples() {
        // (x, x(1 + y)) = (x) locally and globally; (x(1 + y)) alone is only
        // locally equal to (x)
        let r = Ring::new(["x", "y"], MonomialOrder::DegRevLex);
        let s = GradedAlgebra::<F>::polynomial_ring(&r);
        let i = s.ideal(&[p(&r, &[(&[1, 0], 1), (&[1, 1], 1)]), p(&r, &[(&[1, 0], 1)])]);
        let mb = i.minimal_basis().unwrap();
        assert_eq!(mb.mu, 1);
        assert!(mb.local_only);
    }
}
