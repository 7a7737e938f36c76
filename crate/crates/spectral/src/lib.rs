//! Fourier-multiplier solver for the polyharmonic Dirichlet problem on the
//! half-space `R^d_+`, `d ∈ {2, 3}`.
//!
//! Boundary data live on periodic grids over `[-L, L)^{d-1}`. [`solve_g`]
//! turns Dirichlet traces into layer densities, [`forward_h`] maps back,
//! [`extend`] evaluates the solution at a height, and [`validate`] reports on
//! the hypotheses of the existence theorem. The [`potential`] module holds the
//! direct-space side: the fundamental solution, the layer kernels and their
//! quadrature, the moment-preserving truncation and the Riesz decay study.

pub mod error;
pub mod fourier;
pub mod grid;
pub mod potential;
pub mod quadrature;
pub mod residual;
pub mod solver;
pub mod validate;

pub use error::{Error, Result};
pub use fourier::{apply_multiplier, fractional_ops, FractionalOp, SpectralGrid, ZeroMode};
pub use grid::{DensityData, DirichletData, Geometry, GridField, Real};
pub use residual::{polyharmonic_residual, ResidualReport};
pub use solver::{extend, extend_slices, extend_trace, forward_h, solve_g, SymbolCache};
pub use validate::{validate, ValidationReport};

pub type Field = GridField<f64>;
pub type Dirichlet = DirichletData<f64>;
pub type Density = DensityData<f64>;
