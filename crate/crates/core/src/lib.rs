//! Exact commutative algebra for multiplicities of graded rings: Gröbner
//! bases, local lengths, Samuel and mixed multiplicities, reductions and
//! Rees algebras, each available through a brute-force oracle and a
//! closed-form fast path that must agree.

pub mod algebra;
pub mod cli;
pub mod degseq;
pub mod error;
pub mod fc;
pub mod field;
pub mod groebner;
pub mod linalg;
pub mod mixed;
pub mod monomial;
pub mod multiplicity;
pub mod poly;
pub mod reduction;
pub mod rees;

pub use error::{Error, Result};
pub use field::{Field, Fp};
pub use algebra::{AlgElement, AlgIdeal, GradedAlgebra, Order};
pub use groebner::{Ideal, KDim};
pub use monomial::{Monomial, MonomialOrder, Ring};
pub use poly::Polynomial;

/// The default prime field.
pub type Fp32003 = Fp<32003>;
pub type Rational = num_rational::BigRational;

pub type PolyFp = Polynomial<Fp32003>;
pub type PolyQ = Polynomial<Rational>;
pub type IdealFp = Ideal<Fp32003>;
pub type IdealQ = Ideal<Rational>;
