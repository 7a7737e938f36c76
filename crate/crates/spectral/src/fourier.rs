//! Discrete Fourier transforms on a [`Geometry`] and the multiplier calculus.
//!
//! The lattice carries the continuous symbol values at `ξ = π k / L`; no
//! discrete-Laplacian symbol is used. Outputs are the real part of the
//! inverse transform, so an odd symbol drops the (real) Nyquist mode.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{cast, Geometry, GridField, Real};

/// What to do with the zero-frequency coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroMode {
    SetZero,
    Keep,
}

/// Cached transforms and frequency lattice for one geometry.
pub struct SpectralGrid<T: Real> {
    geom: Geometry,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    axis: Vec<T>,
}

impl<T: Real> SpectralGrid<T> {
    pub fn new(geom: Geometry) -> Self {
        let mut planner = FftPlanner::new();
        SpectralGrid {
            geom,
            fwd: planner.plan_fft_forward(geom.n),
            inv: planner.plan_fft_inverse(geom.n),
            axis: (0..geom.n).map(|i| cast(geom.frequency(i))).collect(),
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geom
    }

    /// Frequency vector at flat index `p`; unused slots are zero.
    pub fn xi(&self, p: usize) -> [T; 2] {
        match self.geom.dim {
            1 => [self.axis[p], T::zero()],
            _ => [self.axis[p / self.geom.n], self.axis[p % self.geom.n]],
        }
    }

    pub fn abs_xi(&self, p: usize) -> T {
        let [a, b] = self.xi(p);
        (a * a + b * b).sqrt()
    }

    fn run(&self, plan: &Arc<dyn Fft<T>>, data: &mut [Complex<T>]) {
        let n = self.geom.n;
        data.par_chunks_mut(n).for_each(|row| plan.process(row));
        if self.geom.dim == 2 {
            transpose(data, n);
            data.par_chunks_mut(n).for_each(|row| plan.process(row));
            transpose(data, n);
        }
    }

    pub fn forward(&self, f: &GridField<T>) -> Result<Vec<Complex<T>>> {
        self.check(f)?;
        let mut data: Vec<Complex<T>> = f.samples().iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.run(&self.fwd, &mut data);
        Ok(data)
    }

    /// Inverse transform, normalized, keeping the real part.
    pub fn inverse(&self, mut data: Vec<Complex<T>>) -> GridField<T> {
        self.run(&self.inv, &mut data);
        let scale = T::one() / cast(self.geom.len() as f64);
        GridField::from_parts(self.geom, data.into_iter().map(|c| c.re * scale).collect())
    }

    fn check(&self, f: &GridField<T>) -> Result<()> {
        if f.geometry() != self.geom {
            return Err(Error::Dimension("field does not match the transform grid".into()));
        }
        Ok(())
    }

    /// Multiplies a spectrum by `symbol(ξ)` in place.
    pub fn multiply(
        &self,
        spec: &mut [Complex<T>],
        symbol: impl Fn([T; 2]) -> Complex<T> + Sync,
        zero: ZeroMode,
    ) -> Result<()> {
        let bad = spec
            .par_iter_mut()
            .enumerate()
            .filter_map(|(p, c)| {
                if p == 0 && zero == ZeroMode::SetZero {
                    *c = Complex::new(T::zero(), T::zero());
                    return None;
                }
                let s = symbol(self.xi(p));
                if !(s.re.is_finite() && s.im.is_finite()) {
                    return Some(p);
                }
                *c = *c * s;
                None
            })
            .min();
        match bad {
            Some(p) => {
                let [a, b] = self.xi(p);
                let xi = &[a.to_f64().unwrap(), b.to_f64().unwrap()][..self.geom.dim];
                Err(Error::Numerical(format!("symbol is not finite at frequency {xi:?}")))
            }
            None => Ok(()),
        }
    }

    /// Inverse transform of `symbol · f̂`.
    pub fn apply(
        &self,
        f: &GridField<T>,
        symbol: impl Fn([T; 2]) -> Complex<T> + Sync,
        zero: ZeroMode,
    ) -> Result<GridField<T>> {
        let mut spec = self.forward(f)?;
        self.multiply(&mut spec, symbol, zero)?;
        let out = self.inverse(spec);
        if let Some(p) = out.samples().iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite output at grid index {p}")));
        }
        Ok(out)
    }
}

fn transpose<C: Copy>(data: &mut [C], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// One-shot multiplier application.
pub fn apply_multiplier<T: Real>(
    f: &GridField<T>,
    symbol: impl Fn([T; 2]) -> Complex<T> + Sync,
    zero: ZeroMode,
) -> Result<GridField<T>> {
    SpectralGrid::new(f.geometry()).apply(f, symbol, zero)
}

/// Multipliers of √(-Δ), powers of Δ and the Riesz transforms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FractionalOp {
    /// `|ξ|`.
    SqrtNegLap,
    /// `(-|ξ|²)^p`, the symbol of `Δ^p`.
    LapPower(f64),
    /// `i ξ_ℓ / |ξ|`.
    Riesz(usize),
    /// `i ξ_ℓ`, the symbol of `∂_ℓ`.
    Derivative(usize),
}

impl FractionalOp {
    pub fn symbol<T: Real>(&self, xi: [T; 2]) -> Complex<T> {
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        match *self {
            FractionalOp::SqrtNegLap => Complex::new(r, T::zero()),
            FractionalOp::LapPower(p) => {
                if p.fract() == 0.0 {
                    let mag = (r * r).powi(p as i32);
                    return Complex::new(if (p as i64) % 2 == 0 { mag } else { -mag }, T::zero());
                }
                let p = cast::<T>(p);
                // (-r²)^p = r^{2p} e^{iπp}
                let mag = (r * r).powf(p);
                let phase = cast::<T>(std::f64::consts::PI) * p;
                Complex::new(mag * phase.cos(), mag * phase.sin())
            }
            FractionalOp::Riesz(l) => Complex::new(T::zero(), xi[l] / r),
            FractionalOp::Derivative(l) => Complex::new(T::zero(), xi[l]),
        }
    }

    /// Whether the symbol is singular or undefined at `ξ = 0`.
    pub fn singular_at_zero(&self) -> bool {
        match *self {
            FractionalOp::Riesz(_) => true,
            FractionalOp::LapPower(p) => p <= 0.0,
            _ => false,
        }
    }
}

/// Applies a [`FractionalOp`]. The zero mode is set to zero, so
/// `LapPower(0)` is the identity minus the mean.
pub fn fractional_ops<T: Real>(f: &GridField<T>, op: FractionalOp) -> Result<GridField<T>> {
    if let FractionalOp::Riesz(l) | FractionalOp::Derivative(l) = op {
        if l >= f.geometry().dim {
            return Err(Error::Dimension(format!("direction {l} on a {}-dimensional grid", f.geometry().dim)));
        }
    }
    apply_multiplier(f, |xi| op.symbol(xi), ZeroMode::SetZero)
}
