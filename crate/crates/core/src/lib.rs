//! Non-Gaussian integrals `∮ e^{P(t)} α(t) dt` as functions of the
//! coefficients of `P`: exponent lattices, the differential systems they
//! satisfy, Γ-series expansions, contour quadrature and numerical
//! cross-checks between them.
//!
//! The algebra is generic over the scalar field (see [`scalar::Scalar`]);
//! the aliases below fix the common choices.

pub mod lattice;
pub mod operator;
pub mod polynomial;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod special;
pub mod verify;

pub use num_complex::Complex64;
pub use twofloat::TwoFloat as DoubleDouble;

pub use lattice::{Base, ExponentSet, ExponentVector, LatticeRelation};
pub use operator::{CoefficientSpace, DiffOperator};
pub use polynomial::SparsePolynomial;
pub use quadrature::{ContourChain, ContourLeg, IntegrandSpec, ProductContour, QuadValue};
pub use scalar::{Rational, Real, Scalar};
pub use series::GammaSeries;

/// Complex exact rationals.
pub type ExactComplex = num_complex::Complex<Rational>;

pub type Polynomial = SparsePolynomial<Complex64>;
pub type ExactPolynomial = SparsePolynomial<Rational>;

pub type Operator = DiffOperator<Complex64>;
pub type ExactOperator = DiffOperator<Rational>;

pub type Series = GammaSeries<Complex64>;
pub type ExactSeries = GammaSeries<Rational>;
