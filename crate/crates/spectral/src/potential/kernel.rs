//! Layer kernels `k_j(x, y) = λ_{j,y} φ(x - y)` and direct quadrature of `T g`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::DensityData;
use crate::potential::fundamental::{norm, FormEvaluator, FundamentalSolution, RadialLogForm};
use crate::quadrature::{graded_breaks, Rule};

/// `λ_j` in the `y` variable, as a form in `z = x - (y, 0)`: `Δ^{j/2} φ` for
/// even `j`, and `-∂_{y_d} Δ^{(j-1)/2} φ(x-y) = ∂_{z_d} Δ^{(j-1)/2} φ(z)` for
/// odd `j`.
pub fn kernel_form(j: usize, m: usize, d: usize) -> Result<RadialLogForm> {
    let mut f = RadialLogForm::fundamental(m, d)?;
    for _ in 0..j / 2 {
        f = f.laplacian();
    }
    if j % 2 == 1 {
        f = f.derivative(d - 1);
    }
    Ok(f)
}

/// Precomputed `k_j` for a calibrated fundamental solution.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub j: usize,
    pub d: usize,
    c: f64,
    eval: FormEvaluator,
}

impl Kernel {
    pub fn new(j: usize, fs: &FundamentalSolution) -> Result<Self> {
        let form = kernel_form(j, fs.m, fs.d)?;
        Ok(Kernel { j, d: fs.d, c: fs.c, eval: form.evaluator() })
    }

    /// `k_j(x, y)` for `x ∈ R^d` and a boundary point `y ∈ R^{d-1}`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.d || y.len() + 1 != self.d {
            return Err(Error::Dimension(format!("x ∈ R^{}, y ∈ R^{} for d = {}", x.len(), y.len(), self.d)));
        }
        let mut z = [0.0; 3];
        for i in 0..self.d - 1 {
            z[i] = x[i] - y[i];
        }
        z[self.d - 1] = x[self.d - 1];
        let z = &z[..self.d];
        if norm(z) == 0.0 {
            return Err(Error::Singularity("kernel evaluated on its diagonal".into()));
        }
        Ok(self.c * self.eval.eval(z)?)
    }
}

/// `k_j(x, y)` for `C·φ_{m,d}`.
pub fn kernel_k(j: usize, fs: &FundamentalSolution, x: &[f64], y: &[f64]) -> Result<f64> {
    Kernel::new(j, fs)?.eval(x, y)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Difference between the full rule and a coarser one.
    pub error_estimate: f64,
    /// Mass of `|g_j k_j|` on the truncated tail region.
    pub tail_estimate: f64,
}

fn check_point(x: &[f64], d: usize) -> Result<()> {
    if x.len() != d {
        return Err(Error::Dimension(format!("point in R^{} for d = {d}", x.len())));
    }
    if x[d - 1] == 0.0 {
        return Err(Error::Domain("evaluation point lies on the boundary".into()));
    }
    Ok(())
}

/// `Σ_j ∫ g_j(y) k_j(x, y) dy` over the sampled densities, by the
/// trapezoid rule on the grid. For `x_d ≠ 0` the integrand is smooth and the
/// rule converges spectrally; the estimate compares against every other
/// point, and the tail term sums the outer 5% frame.
pub fn quadrature_tg(g: &DensityData<f64>, x: &[f64], fs: &FundamentalSolution) -> Result<QuadratureResult> {
    let geom = g.geometry();
    if geom.dim + 1 != fs.d || g.m != fs.m {
        return Err(Error::Dimension("densities do not match the fundamental solution".into()));
    }
    check_point(x, fs.d)?;
    let kernels: Vec<Kernel> = (0..g.m).map(|j| Kernel::new(j, fs)).collect::<Result<_>>()?;
    let n = geom.n;
    let cut = 0.95 * geom.extent;
    let rows: Vec<(f64, f64, f64)> = (0..geom.len() / n)
        .into_par_iter()
        .map(|row| {
            let (mut full, mut coarse, mut tail) = (0.0, 0.0, 0.0);
            for col in 0..n {
                let p = row * n + col;
                let y = geom.point(p);
                let y = &y[..geom.dim];
                let mut v = 0.0;
                for (kern, gj) in kernels.iter().zip(&g.g) {
                    let s = gj.samples()[p];
                    if s != 0.0 {
                        v += s * kern.eval(x, y)?;
                    }
                }
                full += v;
                let even = col % 2 == 0 && (geom.dim == 1 || row % 2 == 0);
                if even {
                    coarse += v;
                }
                if y.iter().any(|c| c.abs() >= cut) {
                    tail += v.abs();
                }
            }
            Ok((full, coarse, tail))
        })
        .collect::<Result<_>>()?;
    let cell = geom.cell();
    let full: f64 = rows.iter().map(|r| r.0).sum::<f64>() * cell;
    let coarse: f64 = rows.iter().map(|r| r.1).sum::<f64>() * cell * (1u32 << geom.dim) as f64;
    let tail: f64 = rows.iter().map(|r| r.2).sum::<f64>() * cell;
    Ok(QuadratureResult { value: full, error_estimate: (full - coarse).abs(), tail_estimate: tail })
}

/// Panel layout for [`quadrature_tg_panels`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct PanelConfig {
    /// Half-width of the integration box.
    pub extent: f64,
    /// Widest panel, as a multiple of `x_d`.
    pub coarsest: f64,
    pub order: usize,
}

impl Default for PanelConfig {
    fn default() -> Self {
        PanelConfig { extent: 16.0, coarsest: 0.5, order: 16 }
    }
}

/// Analytic densities: `Σ_j ∫ g_j(y) k_j(x, y) dy` by tensor Gauss–Legendre
/// panels refined dyadically toward the projection of `x`. The estimate
/// compares against a rule of two thirds the order.
pub fn quadrature_tg_panels(
    g: &[&(dyn Fn(&[f64]) -> f64 + Sync)],
    x: &[f64],
    fs: &FundamentalSolution,
    cfg: PanelConfig,
) -> Result<QuadratureResult> {
    check_point(x, fs.d)?;
    if g.len() != fs.m {
        return Err(Error::Dimension(format!("{} densities for m = {}", g.len(), fs.m)));
    }
    let kernels: Vec<Kernel> = (0..fs.m).map(|j| Kernel::new(j, fs)).collect::<Result<_>>()?;
    let xd = x[fs.d - 1].abs();
    let axes: Vec<Vec<f64>> = (0..fs.d - 1)
        .map(|i| graded_breaks(-cfg.extent, cfg.extent, x[i], 0.25 * xd, cfg.coarsest * xd.max(0.1)))
        .collect();
    let run = |order: usize| -> Result<f64> {
        let rule = Rule::new(order);
        let pts: Vec<Vec<(f64, f64)>> = axes.iter().map(|b| rule.points(b)).collect();
        let eval = |y: &[f64], w: f64| -> Result<f64> {
            let mut v = 0.0;
            for (k, gj) in kernels.iter().zip(g) {
                let s = gj(y);
                if s != 0.0 {
                    v += s * k.eval(x, y)?;
                }
            }
            Ok(w * v)
        };
        match pts.len() {
            1 => pts[0].par_iter().map(|&(y, w)| eval(&[y], w)).sum(),
            _ => pts[0]
                .par_iter()
                .map(|&(y0, w0)| pts[1].iter().map(|&(y1, w1)| eval(&[y0, y1], w0 * w1)).sum::<Result<f64>>())
                .sum(),
        }
    };
    let value = run(cfg.order)?;
    let coarse = run((2 * cfg.order / 3).max(2))?;
    Ok(QuadratureResult { value, error_estimate: (value - coarse).abs(), tail_estimate: 0.0 })
}
