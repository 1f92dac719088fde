//! Computable Hermite-expansion algebra of tempered generalized functions.
//!
//! Representatives are exact sums of polynomial-times-Gaussian terms
//! ([`GaussianPolySum`]); tempered distributions enter through their Hermite
//! coefficient streams ([`dist`]); the quotient algebra and the ring of
//! tempered numbers live in [`algebra`]; [`stochastic`] checks the
//! pathwise Itô, Tanaka, Dynkin and heat-equation formulas.
//!
//! Everything numeric is generic over [`Real`]; the aliases below fix the
//! two scalar types used in practice.

pub mod algebra;
pub mod dist;
pub mod error;
pub mod gauss;
pub mod hermite;
pub mod precision;
pub mod scalar;
pub mod stochastic;

pub use error::{Error, Result};
pub use gauss::{rate, Direction, GaussianPolySum, GaussianTerm, Rate, Region, Side};
pub use hermite::{HermiteBasis, HermiteCoefficients};
pub use precision::PrecisionContext;
pub use scalar::{BigFloat, Cx, Real};

/// Arbitrary-precision representative.
pub type Gps = GaussianPolySum<BigFloat>;
/// Double-precision representative.
pub type GpsF64 = GaussianPolySum<f64>;
/// Arbitrary-precision complex scalar.
pub type BigComplex = Cx<BigFloat>;
pub type Basis = HermiteBasis<BigFloat>;
pub type Stream = dist::CoefficientStream<BigFloat>;
pub type Seq = algebra::RepSequence<BigFloat>;
pub type Number = algebra::TemperedNumber<BigFloat>;
