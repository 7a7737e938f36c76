//! Auxiliary densities from Dirichlet data and back, and the extension into
//! the half-space through the Poisson profiles.
//!
//! With `s = j + k` even, the boundary operator has entries
//! `v_{k,j}(ξ) = (-1)^{s/2-m} M_{k,j} |ξ|^{s+1-2m}` and its inverse
//! `(-1)^{m+s/2} (M⁻¹)_{j,k} |ξ|^{2m-1-s}`. Entries with odd `s` vanish.

use std::f64::consts::PI;

use halfspace_core::scalar::rational_to_f64;
use halfspace_core::symbol::{build_m, poisson_profile};
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::SpectralGrid;
use crate::grid::{cast, DensityData, DirichletData, GridField, Real};

/// Beyond this argument `e^{-t}` underflows and profiles are taken as zero.
pub const PROFILE_CUTOFF: f64 = 700.0;

/// Float copies of `M`, `M⁻¹` and the Poisson profile coefficients for one `m`.
#[derive(Clone, Debug)]
pub struct SymbolCache {
    pub m: usize,
    pub matrix: Vec<Vec<f64>>,
    pub inverse: Vec<Vec<f64>>,
    /// `profiles[k][j]`: raw coefficients `c_i` of `π e^{-t} Σ c_i t^i`.
    profiles: Vec<Vec<Vec<f64>>>,
}

impl SymbolCache {
    pub fn new(m: usize) -> Result<Self> {
        let t = build_m(m)?;
        let f = |mat: &halfspace_core::ExactMatrix| {
            (0..m).map(|i| (0..m).map(|j| rational_to_f64(&mat[(i, j)])).collect()).collect()
        };
        let mut profiles = vec![vec![Vec::new(); m]; m];
        for (k, row) in profiles.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = poisson_profile(k, j, m)?.raw().iter().map(rational_to_f64).collect();
            }
        }
        Ok(SymbolCache { m, matrix: f(&t.matrix), inverse: f(&t.inverse), profiles })
    }

    /// `W_{k,j}(t) = ∫ ω_{k,j}(ζ) e^{itζ} dζ` for `t ≥ 0`.
    pub fn profile(&self, k: usize, j: usize, t: f64) -> f64 {
        if t > PROFILE_CUTOFF {
            return 0.0;
        }
        let c = &self.profiles[k][j];
        PI * (-t).exp() * c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
    }

    /// Entry `v_{k,j}` of the boundary operator at `|ξ| = r > 0`.
    pub fn forward_entry(&self, k: usize, j: usize, r: f64) -> f64 {
        let s = j + k;
        if s % 2 == 1 {
            return 0.0;
        }
        sign(s / 2 + self.m) * self.matrix[k][j] * r.powi(s as i32 + 1 - 2 * self.m as i32)
    }

    /// Entry `(V⁻¹)_{j,k}` at `|ξ| = r`.
    pub fn inverse_entry(&self, j: usize, k: usize, r: f64) -> f64 {
        let s = j + k;
        if s % 2 == 1 {
            return 0.0;
        }
        sign(s / 2 + self.m) * self.inverse[j][k] * r.powi(2 * self.m as i32 - 1 - s as i32)
    }

    /// Multiplier taking `ĝ_j` to the `k`-th trace at height `xd`.
    pub fn trace_entry(&self, k: usize, j: usize, r: f64, xd: f64) -> f64 {
        let s = (j + k) as i32;
        self.profile(k, j, r * xd) / (2.0 * PI) * r.powi(s + 1 - 2 * self.m as i32)
    }
}

fn sign(e: usize) -> f64 {
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn check_order(m: usize, d: usize, dim: usize) -> Result<()> {
    if d != dim + 1 {
        return Err(Error::Dimension(format!("fields on R^{dim} do not bound R^{d}_+")));
    }
    if 2 * m <= d {
        return Err(Error::Domain(format!("m = {m} must exceed d/2 = {}", d as f64 / 2.0)));
    }
    Ok(())
}

/// Applies an `m×m` matrix multiplier `entry(out, in, |ξ|)` to a vector of
/// fields, sharing one forward transform per input and one inverse per
/// output. Zero modes are set to zero.
pub(crate) fn matrix_multiplier<T: Real>(
    grid: &SpectralGrid<T>,
    inputs: &[GridField<T>],
    outputs: usize,
    entry: impl Fn(usize, usize, f64) -> f64 + Sync,
) -> Result<Vec<GridField<T>>> {
    let specs: Vec<Vec<Complex<T>>> = inputs.par_iter().map(|f| grid.forward(f)).collect::<Result<_>>()?;
    let radii: Vec<f64> = (0..grid.geometry().len()).map(|p| grid.abs_xi(p).to_f64().unwrap()).collect();
    (0..outputs)
        .into_par_iter()
        .map(|o| {
            let mut acc = vec![Complex::new(T::zero(), T::zero()); radii.len()];
            for (i, spec) in specs.iter().enumerate() {
                for p in 1..radii.len() {
                    let w = entry(o, i, radii[p]);
                    if w != 0.0 {
                        acc[p] = acc[p] + spec[p] * cast::<T>(w);
                    }
                }
            }
            if let Some(p) = acc.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
                return Err(Error::Numerical(format!("non-finite coefficient at |ξ| = {}", radii[p])));
            }
            Ok(grid.inverse(acc))
        })
        .collect()
}

/// `g = V⁻¹ h`: the densities whose layer potential has traces `h`.
pub fn solve_g<T: Real>(h: &DirichletData<T>, d: usize) -> Result<DensityData<T>> {
    let geom = h.geometry();
    check_order(h.m, d, geom.dim)?;
    let cache = SymbolCache::new(h.m)?;
    let grid = SpectralGrid::new(geom);
    let g = matrix_multiplier(&grid, &h.h, h.m, |j, k, r| cache.inverse_entry(j, k, r))?;
    DensityData::new(g)
}

/// `h = V g`: the Dirichlet traces of the layer potential of `g`.
pub fn forward_h<T: Real>(g: &DensityData<T>, d: usize) -> Result<DirichletData<T>> {
    let geom = g.geometry();
    check_order(g.m, d, geom.dim)?;
    let cache = SymbolCache::new(g.m)?;
    let grid = SpectralGrid::new(geom);
    let h = matrix_multiplier(&grid, &g.g, g.m, |k, j, r| cache.forward_entry(k, j, r))?;
    DirichletData::new(h)
}

/// `λ_k u(·, xd)` for `u = T g`; `k = 0` is the solution itself.
pub fn extend_trace<T: Real>(g: &DensityData<T>, k: usize, xd: f64, d: usize) -> Result<GridField<T>> {
    let geom = g.geometry();
    check_order(g.m, d, geom.dim)?;
    if k >= g.m {
        return Err(Error::Domain(format!("trace order {k} must lie below m = {}", g.m)));
    }
    if !(xd.is_finite() && xd >= 0.0) {
        return Err(Error::Domain(format!("height {xd} must be non-negative")));
    }
    let cache = SymbolCache::new(g.m)?;
    let grid = SpectralGrid::new(geom);
    let mut out = matrix_multiplier(&grid, &g.g, 1, |_, j, r| cache.trace_entry(k, j, r, xd))?;
    Ok(out.remove(0))
}

/// `u(·, xd)` for `u = T g`.
pub fn extend<T: Real>(g: &DensityData<T>, xd: f64, d: usize) -> Result<GridField<T>> {
    extend_trace(g, 0, xd, d)
}

/// Fourier coefficients of `u(·, xd)` for each height, one forward transform
/// per density.
pub(crate) fn slice_spectra<T: Real>(
    grid: &SpectralGrid<T>,
    g: &DensityData<T>,
    heights: &[f64],
    d: usize,
) -> Result<Vec<Vec<Complex<T>>>> {
    let geom = g.geometry();
    check_order(g.m, d, geom.dim)?;
    if let Some(x) = heights.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::Domain(format!("height {x} must be non-negative")));
    }
    let cache = SymbolCache::new(g.m)?;
    let specs: Vec<Vec<Complex<T>>> = g.g.par_iter().map(|f| grid.forward(f)).collect::<Result<_>>()?;
    let radii: Vec<f64> = (0..geom.len()).map(|p| grid.abs_xi(p).to_f64().unwrap()).collect();
    Ok(heights
        .par_iter()
        .map(|&xd| {
            let mut acc = vec![Complex::new(T::zero(), T::zero()); radii.len()];
            for (j, spec) in specs.iter().enumerate() {
                for p in 1..radii.len() {
                    acc[p] = acc[p] + spec[p] * cast::<T>(cache.trace_entry(0, j, radii[p], xd));
                }
            }
            acc
        })
        .collect())
}

/// `u` at several heights, one transform per density.
pub fn extend_slices<T: Real>(g: &DensityData<T>, heights: &[f64], d: usize) -> Result<Vec<GridField<T>>> {
    let grid = SpectralGrid::new(g.geometry());
    let spectra = slice_spectra(&grid, g, heights, d)?;
    Ok(spectra.into_par_iter().map(|s| grid.inverse(s)).collect())
}
