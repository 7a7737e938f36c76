//! Empirical checks of the smoothness, decay and moment hypotheses on Dirichlet data.

use serde::Serialize;

use crate::error::Result;
use crate::fourier::{FractionalOp, SpectralGrid, ZeroMode};
use crate::grid::{multi_indices, DirichletData, GridField, Real};
use crate::solver::SymbolCache;

/// Fraction of the spectrum above half the Nyquist frequency, relative to the peak.
pub const SMOOTHNESS_TOL: f64 = 1e-8;
/// A fitted decay exponent must exceed the required rate by this much.
pub const DECAY_MARGIN: f64 = 0.1;
/// Moments must be below this fraction of `∫|x^α w|`.
pub const MOMENT_TOL: f64 = 1e-9;
/// Annuli whose maximum lies below this fraction of the global peak are noise.
const NOISE_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessCheck {
    pub k: usize,
    pub high_frequency_ratio: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayCheck {
    pub k: usize,
    /// Derivative order `s` of the seminorm proxy.
    pub s: usize,
    pub required: f64,
    /// Fitted exponent `p` in `|f| ~ r^{-p}`; `None` when the tail is below
    /// the noise floor (decay faster than any measurable power).
    pub exponent: Option<f64>,
    /// Best-fit log power `q` in `r^{-p} log(e+r)^{-q}`, diagnostic only.
    pub log_power: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentCheck {
    pub j: usize,
    pub alpha: Vec<u32>,
    pub value: f64,
    pub scale: f64,
    /// `|full-grid - coarse-grid|` trapezoid difference.
    pub quadrature_error: f64,
    /// Whether `|α|` is within the weaker degree `2m-j-d-1`.
    pub weak_degree: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub m: usize,
    pub d: usize,
    pub smoothness: Vec<SmoothnessCheck>,
    pub decay: Vec<DecayCheck>,
    pub moments: Vec<MomentCheck>,
    /// Worst boundary-frame magnitude over the inputs.
    pub boundary_max: f64,
    /// All weak-degree moments pass.
    pub moments_weak_passed: bool,
    /// All moments up to the stronger degree `2m-j-d` pass.
    pub moments_strong_passed: bool,
    pub passed: bool,
}

/// Dyadic annuli `[r, 2r)` inside `[r_min, 0.5 L]`, with the largest
/// magnitude of `f` on each.
pub fn annulus_maxima<T: Real>(f: &GridField<T>, r_min: f64) -> Vec<(f64, f64)> {
    let geom = f.geometry();
    let r_max = 0.5 * geom.extent;
    let mut out = Vec::new();
    let mut r = r_min;
    while 2.0 * r <= r_max {
        out.push((r, 0.0f64));
        r *= 2.0;
    }
    for (p, v) in f.samples().iter().enumerate() {
        let x = geom.point(p);
        let rho = x[..geom.dim].iter().map(|c| c * c).sum::<f64>().sqrt();
        if rho < r_min {
            continue;
        }
        let idx = (rho / r_min).log2().floor() as usize;
        if let Some(slot) = out.get_mut(idx) {
            slot.1 = slot.1.max(v.to_f64().unwrap().abs());
        }
    }
    out
}

/// Least squares fit `y ≈ Σ c_i·basis_i`.
pub(crate) fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let n = rows.first()?.len();
    let mut a = vec![vec![0.0; n + 1]; n];
    for (row, &yv) in rows.iter().zip(y) {
        for i in 0..n {
            for j in 0..n {
                a[i][j] += row[i] * row[j];
            }
            a[i][n] += row[i] * yv;
        }
    }
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        a.swap(k, p);
        if a[k][k].abs() < 1e-300 {
            return None;
        }
        for i in 0..n {
            if i != k {
                let f = a[i][k] / a[k][k];
                for j in k..=n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Slope of `log y` against `log r` (negated, so decay is positive), and a
/// three-term fit with a `log log` column. A tail that reaches the noise
/// floor inside the window decays faster than any power the window can
/// resolve, and gives `None`.
pub(crate) fn fit_decay(points: &[(f64, f64)], peak: f64) -> (Option<f64>, Option<f64>) {
    if points.iter().any(|&(_, v)| v <= NOISE_FLOOR * peak) {
        return (None, None);
    }
    let usable: Vec<(f64, f64)> = points
        .iter()
        .take_while(|(_, v)| *v > NOISE_FLOOR * peak && *v > 0.0)
        .map(|&(r, v)| ((1.5 * r).ln(), v.ln()))
        .collect();
    if usable.len() < 3 {
        return (None, None);
    }
    let rows: Vec<Vec<f64>> = usable.iter().map(|&(x, _)| vec![1.0, x]).collect();
    let y: Vec<f64> = usable.iter().map(|&(_, v)| v).collect();
    let p = least_squares(&rows, &y).map(|c| -c[1]);
    let q = if usable.len() >= 4 {
        let rows: Vec<Vec<f64>> =
            usable.iter().map(|&(x, _)| vec![1.0, x, (std::f64::consts::E + x.exp()).ln().ln()]).collect();
        least_squares(&rows, &y).map(|c| -c[2])
    } else {
        None
    };
    (p, q)
}

/// Runs the three checks on `h` for the half-space `R^d_+`.
pub fn validate<T: Real>(h: &DirichletData<T>, d: usize) -> Result<ValidationReport> {
    let geom = h.geometry();
    let m = h.m;
    let grid = SpectralGrid::<T>::new(geom);
    let cache = SymbolCache::new(m)?;
    let mut smoothness = Vec::new();
    let mut decay = Vec::new();
    let mut boundary_max = 0.0f64;
    let half_nyquist = 0.5 * geom.nyquist();
    for (k, f) in h.h.iter().enumerate() {
        boundary_max = boundary_max.max(f.boundary_max().to_f64().unwrap());
        let spec = grid.forward(f)?;
        let (mut low, mut high) = (0.0f64, 0.0f64);
        for (p, c) in spec.iter().enumerate() {
            let a = c.norm().to_f64().unwrap();
            if grid.abs_xi(p).to_f64().unwrap() > half_nyquist {
                high = high.max(a);
            } else {
                low = low.max(a);
            }
        }
        let ratio = if low > 0.0 { high / low } else { 0.0 };
        smoothness.push(SmoothnessCheck { k, high_frequency_ratio: ratio, passed: ratio <= SMOOTHNESS_TOL });

        let peak = f.max_abs().to_f64().unwrap();
        for s in 0..=(2 * m - k - 1).min(2) {
            let g = match s {
                0 => f.clone(),
                1 => gradient_norm(&grid, f)?,
                _ => grid.apply(f, |xi| FractionalOp::LapPower(1.0).symbol(xi), ZeroMode::Keep)?,
            };
            let gpeak = if s == 0 { peak } else { g.max_abs().to_f64().unwrap() };
            let required = (k + s) as f64;
            let (exponent, log_power) = if gpeak == 0.0 {
                (None, None)
            } else {
                fit_decay(&annulus_maxima(&g, (4.0 * geom.spacing()).max(1.0)), gpeak)
            };
            let passed = exponent.map_or(true, |p| p >= required + DECAY_MARGIN);
            decay.push(DecayCheck { k, s, required, exponent, log_power, passed });
        }
    }

    let mut moments = Vec::new();
    let jmax = m.min((2 * m).saturating_sub(d));
    for j in 0..jmax {
        // w_j = Σ_k (M⁻¹)_{j,k} Δ^{p_k} h_k with p_k = m-1-(j+k)/2. Its
        // moments are taken as Σ_k (M⁻¹)_{j,k} ∫ Δ^{p_k}(x^α) h_k, which
        // avoids the roundoff that spectral Δ^{p_k} lifts near Nyquist; the
        // spectral w_j only supplies the scale ∫|x^α w_j|.
        let terms: Vec<(usize, usize, f64)> = (0..m)
            .filter(|&k| (j + k) % 2 == 0 && cache.inverse[j][k] != 0.0)
            .map(|k| (k, m - 1 - (j + k) / 2, cache.inverse[j][k]))
            .collect();
        let mut w = GridField::zeros(geom);
        for &(k, p, c) in &terms {
            let term = grid.apply(&h.h[k], |xi| FractionalOp::LapPower(p as f64).symbol(xi), ZeroMode::Keep)?;
            w = w.add(&term.scale(crate::grid::cast(c)))?;
        }
        let strong = 2 * m - j - d;
        for alpha in multi_indices(geom.dim, strong) {
            let deg = alpha.iter().sum::<u32>() as usize;
            let (mut value, mut coarse) = (0.0, 0.0);
            for &(k, p, c) in &terms {
                for (beta, b) in laplacian_power_of_monomial(&alpha, p) {
                    value += c * b * h.h[k].moment(&beta);
                    coarse += c * b * coarse_moment(&h.h[k], &beta);
                }
            }
            let scale = w.moment_scale(&alpha);
            let passed = value.abs() <= MOMENT_TOL * scale.max(f64::MIN_POSITIVE) || scale == 0.0;
            moments.push(MomentCheck {
                j,
                alpha,
                value,
                scale,
                quadrature_error: (value - coarse).abs(),
                weak_degree: deg < strong,
                passed,
            });
        }
    }
    let moments_weak_passed = moments.iter().filter(|c| c.weak_degree).all(|c| c.passed);
    let moments_strong_passed = moments.iter().all(|c| c.passed);
    let passed = smoothness.iter().all(|c| c.passed) && decay.iter().all(|c| c.passed) && moments_strong_passed;
    Ok(ValidationReport {
        m,
        d,
        smoothness,
        decay,
        moments,
        boundary_max,
        moments_weak_passed,
        moments_strong_passed,
        passed,
    })
}

/// `Δ^p x^α` as `(β, coefficient)` terms.
pub(crate) fn laplacian_power_of_monomial(alpha: &[u32], p: usize) -> Vec<(Vec<u32>, f64)> {
    let mut poly = vec![(alpha.to_vec(), 1.0)];
    for _ in 0..p {
        let mut next: Vec<(Vec<u32>, f64)> = Vec::new();
        for (beta, c) in &poly {
            for i in 0..beta.len() {
                if beta[i] < 2 {
                    continue;
                }
                let mut b = beta.clone();
                b[i] -= 2;
                let coef = c * (beta[i] * (beta[i] - 1)) as f64;
                match next.iter_mut().find(|(e, _)| *e == b) {
                    Some(slot) => slot.1 += coef,
                    None => next.push((b, coef)),
                }
            }
        }
        poly = next;
    }
    poly
}

fn gradient_norm<T: Real>(grid: &SpectralGrid<T>, f: &GridField<T>) -> Result<GridField<T>> {
    let dim = grid.geometry().dim;
    let mut acc = vec![T::zero(); f.samples().len()];
    for l in 0..dim {
        let d = grid.apply(f, |xi| FractionalOp::Derivative(l).symbol(xi), ZeroMode::SetZero)?;
        for (a, v) in acc.iter_mut().zip(d.samples()) {
            *a = *a + *v * *v;
        }
    }
    GridField::new(grid.geometry(), acc.into_iter().map(|v| v.sqrt()).collect())
}

/// Trapezoid moment on every other grid point, for the error estimate.
fn coarse_moment<T: Real>(f: &GridField<T>, alpha: &[u32]) -> f64 {
    let geom = f.geometry();
    let c = geom.cell() * (1u32 << geom.dim) as f64;
    let n = geom.n;
    f.samples()
        .iter()
        .enumerate()
        .filter(|(p, _)| match geom.dim {
            1 => p % 2 == 0,
            _ => (p / n) % 2 == 0 && (p % n) % 2 == 0,
        })
        .map(|(p, v)| {
            let x = geom.point(p);
            crate::grid::monomial(&x[..geom.dim], alpha) * v.to_f64().unwrap()
        })
        .sum::<f64>()
        * c
}
