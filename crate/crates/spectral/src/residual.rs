//! Finite-difference check that the extension is `m`-polyharmonic.

use serde::Serialize;

use halfspace_core::combinat::binomial;
use num_complex::Complex;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fourier::{FractionalOp, SpectralGrid};
use crate::grid::{cast, DensityData, Real};
use crate::solver::slice_spectra;

fn choose(n: usize, k: usize) -> f64 {
    binomial(n as i64, k as i64).to_f64().expect("small binomial")
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub center: f64,
    pub step: f64,
    /// `max |Δ^m u|` at the center slice.
    pub max_residual: f64,
    /// Largest single term `C(m,a) Δ'^a ∂_d^{2b} u`, the cancellation scale.
    pub scale: f64,
    pub normalized: f64,
}

/// Central difference weights for the `2b`-th derivative on `2b+1` points,
/// `(-1)^i C(2b, i)`, second-order accurate.
fn even_difference(b: usize) -> Vec<f64> {
    let n = 2 * b;
    (0..=n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } * choose(n, i)).collect()
}

/// Evaluates `Δ^m u` at the middle of uniformly spaced `heights`.
///
/// Horizontal Laplacians are applied to the Fourier coefficients of the
/// slices; vertical derivatives use the central differences of
/// [`even_difference`], so the residual is `O(step²)`.
pub fn polyharmonic_residual<T: Real>(g: &DensityData<T>, heights: &[f64], d: usize) -> Result<ResidualReport> {
    let m = g.m;
    if heights.len() < 2 * m + 1 || heights.len() % 2 == 0 {
        return Err(Error::Dimension(format!(
            "need an odd number of at least {} heights, got {}",
            2 * m + 1,
            heights.len()
        )));
    }
    let step = heights[1] - heights[0];
    if !(step > 0.0) || heights.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > 1e-12 * step.max(1.0)) {
        return Err(Error::Domain("heights must be increasing and uniformly spaced".into()));
    }
    let c = heights.len() / 2;
    let window = &heights[c - m..=c + m];
    let grid = SpectralGrid::<T>::new(g.geometry());
    // Work on coefficients: an inverse and forward transform between the
    // extension and Δ'^a would amplify roundoff by |ξ|^{2a}.
    let spectra = slice_spectra(&grid, g, window, d)?;
    let lap: Vec<f64> =
        (0..g.geometry().len()).map(|p| FractionalOp::LapPower(1.0).symbol(grid.xi(p)).re.to_f64().unwrap()).collect();
    let mut total = vec![0.0f64; g.geometry().len()];
    let mut scale = 0.0f64;
    for b in 0..=m {
        let a = m - b;
        let w = even_difference(b);
        let coef = choose(m, a) / step.powi(2 * b as i32);
        let mut acc = vec![Complex::new(T::zero(), T::zero()); total.len()];
        for (i, wi) in w.iter().enumerate() {
            for (p, (t, v)) in acc.iter_mut().zip(&spectra[m - b + i]).enumerate() {
                *t = *t + *v * cast::<T>(coef * wi * lap[p].powi(a as i32));
            }
        }
        let term = grid.inverse(acc);
        let mut term_max = 0.0f64;
        for (t, v) in total.iter_mut().zip(term.samples()) {
            let x = v.to_f64().unwrap();
            *t += x;
            term_max = term_max.max(x.abs());
        }
        scale = scale.max(term_max);
    }
    let max_residual = total.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let normalized = if scale > 0.0 { max_residual / scale } else { 0.0 };
    Ok(ResidualReport { center: heights[c], step, max_residual, scale, normalized })
}
