//! Exact combinatorial core for the polyharmonic half-space problem.
//!
//! Rational matrices with fraction-free determinants, the binomial and
//! Catalan Hankel families with their triangular factors and closed-form
//! inverses, Lindström–Gessel–Viennot path counting on grid graphs, total
//! positivity tests, planar networks, and the boundary symbol matrix `M` with
//! its Poisson profiles.

pub mod combinat;
pub mod error;
pub mod hankel;
pub mod lgv;
pub mod matrix;
pub mod network;
pub mod positivity;
pub mod profile;
pub mod rational;
pub mod scalar;
pub mod symbol;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::Scalar;

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;
/// Dense exact matrix.
pub type ExactMatrix = Matrix<Rational>;
pub type MatrixF64 = Matrix<f64>;
pub type MatrixF32 = Matrix<f32>;
