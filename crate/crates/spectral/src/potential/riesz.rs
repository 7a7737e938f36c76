//! Empirical decay of `D^α R_ℓ f` on large grids.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{apply_multiplier, ZeroMode};
use crate::grid::GridField;
use crate::potential::truncation::check_moments;
use crate::validate::{annulus_maxima, fit_decay};

#[derive(Clone, Debug, Serialize)]
pub struct RieszDecay {
    /// Fitted slope of `log|D^α R_ℓ f|` against `log|x|`.
    pub slope: f64,
    /// `(inner radius, max |output|)` per dyadic annulus.
    pub annuli: Vec<(f64, f64)>,
}

/// `D^α R_ℓ f`, computed through the symbol `(iξ)^α · iξ_ℓ/|ξ|`.
pub fn riesz_derivative(f: &GridField<f64>, dir: usize, alpha: &[u32]) -> Result<GridField<f64>> {
    let dim = f.geometry().dim;
    if dir >= dim || alpha.len() != dim {
        return Err(Error::Dimension(format!("direction {dir}, multi-index {alpha:?} on R^{dim}")));
    }
    let alpha = alpha.to_vec();
    apply_multiplier(
        f,
        move |xi: [f64; 2]| {
            let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            let mut s = Complex::new(0.0, xi[dir] / r);
            for (i, &a) in alpha.iter().enumerate() {
                s *= Complex::new(0.0, xi[i]).powu(a);
            }
            s
        },
        ZeroMode::SetZero,
    )
}

/// Fits the decay of `D^α R_ℓ f` over dyadic annuli starting at `r_min`.
///
/// `l` is the moment degree assumed of `f` (checked), or `None` for the
/// baseline without moment conditions.
pub fn riesz_decay_study(
    f: &GridField<f64>,
    l: Option<usize>,
    dir: usize,
    alpha: &[u32],
    r_min: f64,
) -> Result<RieszDecay> {
    if let Some(l) = l {
        check_moments(f, l)?;
    }
    let out = riesz_derivative(f, dir, alpha)?;
    let annuli = annulus_maxima(&out, r_min);
    let (p, _) = fit_decay(&annuli, out.max_abs());
    match p {
        Some(p) => Ok(RieszDecay { slope: -p, annuli }),
        None => Err(Error::Accuracy(format!(
            "fewer than three annuli above the noise floor between {r_min} and {}",
            0.5 * f.geometry().extent
        ))),
    }
}
