//! Exact combinatorics of extended affine Weyl groups: root data, alcoves,
//! Bédard pieces, Newton points and the He-Nie flow on truncated complexes.

pub mod affine_weyl;
pub mod bcomplex;
pub mod intmat;
pub mod linalg;
pub mod oracle;
pub mod pieces;
pub mod root_datum;
pub mod scalar;

pub use num_rational::BigRational;

pub use affine_weyl::{AffineSystem, AffineWeylElement, OmegaElement};
pub use linalg::{AffineSubspace, Matrix};
pub use root_datum::{build_root_datum, FiniteWeylElement, Isogeny, RootDatum};
pub use scalar::Scalar;

/// Exact rationals, the default scalar.
pub type Rational = BigRational;
pub type ExactSubspace = AffineSubspace<Rational>;
pub type FloatSubspace = AffineSubspace<f64>;
pub type ExactChart = bcomplex::ApartmentChart<Rational>;
pub type FloatChart = bcomplex::ApartmentChart<f64>;
