//! Moment-preserving truncation `T_R f = ψ(·/R) f + P_R f` and its dyadic
//! iteration.

use halfspace_core::MatrixF64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{monomial, multi_indices, GridField};
use crate::quadrature::{uniform_breaks, Rule};

/// Relative tolerance for the moment precondition.
pub const MOMENT_PRECONDITION_TOL: f64 = 1e-8;

fn smooth_step(t: f64) -> f64 {
    let e = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    let (a, b) = (e(t), e(1.0 - t));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Radial cutoff: one on `|x| ≤ 1/2`, zero on `|x| ≥ 1`.
pub fn cutoff(r: f64) -> f64 {
    smooth_step(2.0 * (1.0 - r))
}

/// `exp(-1/(1 - 4|x|²))` on `B(0, 1/2)`.
pub fn bump(r: f64) -> f64 {
    let s = 1.0 - 4.0 * r * r;
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn radius(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `Φ_β = Σ_γ A_{β,γ} x^γ·bump`, supported in `B(0, 1/2)` with
/// `∫ x^γ Φ_β = δ_{β,γ}` for `|β|, |γ| ≤ L`.
#[derive(Clone, Debug)]
pub struct DualFamily {
    pub dim: usize,
    pub degree: usize,
    pub indices: Vec<Vec<u32>>,
    coeffs: Vec<Vec<f64>>,
}

/// Tensor Gauss–Legendre nodes on `[-1/2, 1/2]^dim`.
fn ball_points(dim: usize) -> Vec<(Vec<f64>, f64)> {
    let (panels, order) = if dim == 1 { (64, 20) } else { (40, 12) };
    let pts = Rule::new(order).points(&uniform_breaks(-0.5, 0.5, panels));
    match dim {
        1 => pts.into_iter().map(|(x, w)| (vec![x], w)).collect(),
        _ => pts.iter().flat_map(|&(a, wa)| pts.iter().map(move |&(b, wb)| (vec![a, b], wa * wb))).collect(),
    }
}

impl DualFamily {
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::Dimension(format!("dual functions on R^{dim}")));
        }
        let indices = multi_indices(dim, degree);
        let n = indices.len();
        let mut gram = vec![vec![0.0; n]; n];
        for (x, w) in ball_points(dim) {
            let b = bump(radius(&x)) * w;
            if b == 0.0 {
                continue;
            }
            let mono: Vec<f64> = indices.iter().map(|a| monomial(&x, a)).collect();
            for i in 0..n {
                for j in 0..n {
                    gram[i][j] += mono[i] * mono[j] * b;
                }
            }
        }
        let inv = MatrixF64::from_rows(gram)?.inverse()?;
        let coeffs = inv.to_rows();
        Ok(DualFamily { dim, degree, indices, coeffs })
    }

    /// `Φ_β(x)` for the `b`-th index.
    pub fn eval(&self, b: usize, x: &[f64]) -> f64 {
        let r = radius(x);
        if r >= 0.5 {
            return 0.0;
        }
        let p: f64 = self.indices.iter().zip(&self.coeffs[b]).map(|(g, c)| c * monomial(x, g)).sum();
        p * bump(r)
    }

    /// `max |∫ x^γ Φ_β - δ_{β,γ}|` by an independent quadrature order.
    pub fn duality_error(&self) -> f64 {
        let (panels, order) = if self.dim == 1 { (96, 24) } else { (56, 14) };
        let pts = Rule::new(order).points(&uniform_breaks(-0.5, 0.5, panels));
        let nodes: Vec<(Vec<f64>, f64)> = match self.dim {
            1 => pts.into_iter().map(|(x, w)| (vec![x], w)).collect(),
            _ => pts.iter().flat_map(|&(a, wa)| pts.iter().map(move |&(b, wb)| (vec![a, b], wa * wb))).collect(),
        };
        let n = self.indices.len();
        let mut worst = 0.0f64;
        for b in 0..n {
            for g in 0..n {
                let v: f64 = nodes.iter().map(|(x, w)| w * monomial(x, &self.indices[g]) * self.eval(b, x)).sum();
                let want = if b == g { 1.0 } else { 0.0 };
                worst = worst.max((v - want).abs());
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct Truncation {
    pub radius: f64,
    pub compact: GridField<f64>,
    pub remainder: GridField<f64>,
    /// Weights of `Φ_β(·/R)`, approximately `c_{β,R}(f)`, in the order of
    /// [`DualFamily::indices`].
    pub coefficients: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub alpha: Vec<u32>,
    pub value: f64,
    pub scale: f64,
}

/// Discrete moments of `f` up to degree `deg`, with their scales.
pub fn moments(f: &GridField<f64>, deg: usize) -> Vec<MomentReport> {
    multi_indices(f.geometry().dim, deg)
        .into_iter()
        .map(|alpha| MomentReport { value: f.moment(&alpha), scale: f.moment_scale(&alpha), alpha })
        .collect()
}

/// Largest `|moment| / scale` up to degree `deg`.
pub fn worst_relative_moment(f: &GridField<f64>, deg: usize) -> f64 {
    moments(f, deg).iter().map(|m| if m.scale > 0.0 { m.value.abs() / m.scale } else { 0.0 }).fold(0.0, f64::max)
}

pub(crate) fn check_moments(f: &GridField<f64>, deg: usize) -> Result<()> {
    let bad: Vec<String> = moments(f, deg)
        .into_iter()
        .filter(|m| m.value.abs() > MOMENT_PRECONDITION_TOL * m.scale)
        .map(|m| format!("x^{:?}: {:e}", m.alpha, m.value))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("non-vanishing moments {}", bad.join(", "))))
    }
}

/// `T_R f` without the moment precondition.
///
/// The correction `Σ a_β Φ_β(·/R)` is fitted so that the grid moments of
/// `T_R f` equal those of `f`: `Σ_β a_β ⟨x^γ, Φ_β(·/R)⟩ = ⟨x^γ, (1-ψ_R) f⟩`.
/// In the continuum the matrix is `diag(R^{N+|γ|})` and `a_β = c_{β,R}`; on
/// the grid this removes the trapezoid error of the slowly resolved bump.
fn truncate(f: &GridField<f64>, r: f64, fam: &DualFamily) -> Result<(GridField<f64>, Vec<f64>)> {
    let geom = f.geometry();
    let dim = geom.dim;
    let scaled = |x: &[f64]| -> Vec<f64> { x.iter().map(|v| v / r).collect() };
    let rhs: Vec<f64> =
        fam.indices.iter().map(|g| f.weighted_sum(|x| monomial(x, g) * (1.0 - cutoff(radius(x) / r)))).collect();
    let coefficients = if rhs.iter().all(|v| *v == 0.0) {
        vec![0.0; rhs.len()]
    } else {
        let n = fam.indices.len();
        let mut gram = vec![vec![0.0; n]; n];
        for p in 0..geom.len() {
            let x = geom.point(p);
            let x = &x[..dim];
            if radius(x) >= 0.5 * r {
                continue;
            }
            let phis: Vec<f64> = (0..n).map(|b| fam.eval(b, &scaled(x))).collect();
            for (g, row) in fam.indices.iter().zip(gram.iter_mut()) {
                let xg = monomial(x, g) * geom.cell();
                for (slot, ph) in row.iter_mut().zip(&phis) {
                    *slot += xg * ph;
                }
            }
        }
        let inv = MatrixF64::from_rows(gram)?.inverse()?;
        (0..n).map(|b| (0..n).map(|g| inv.row(b)[g] * rhs[g]).sum()).collect()
    };
    let samples: Vec<f64> = (0..geom.len())
        .map(|p| {
            let x = geom.point(p);
            let x = &x[..dim];
            let mut v = cutoff(radius(x) / r) * f.samples()[p];
            let xs = scaled(x);
            for (b, c) in coefficients.iter().enumerate() {
                if *c != 0.0 {
                    v += c * fam.eval(b, &xs);
                }
            }
            v
        })
        .collect();
    Ok((GridField::new(geom, samples)?, coefficients))
}

/// `T_R f` and `f - T_R f` for an `f` whose moments up to `L` vanish.
pub fn moment_truncation(f: &GridField<f64>, r: f64, l: usize) -> Result<Truncation> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    check_moments(f, l)?;
    let fam = DualFamily::new(f.geometry().dim, l)?;
    let (compact, coefficients) = truncate(f, r, &fam)?;
    let remainder = f.sub(&compact)?;
    Ok(Truncation { radius: r, compact, remainder, coefficients })
}

#[derive(Clone, Debug)]
pub struct DyadicDecomposition {
    /// `f_0, …, f_{k-1}`, each supported in `B(0, 2^ℓ)`.
    pub pieces: Vec<GridField<f64>>,
    /// `f̃_k = f - Σ f_ℓ`.
    pub tail: GridField<f64>,
    pub sup_norms: Vec<f64>,
    /// `max |f̃_k - (f - T_{2^{k-1}} f)|`: recursion against the one-step formula.
    pub tail_formula_gap: f64,
}

/// `f_0 = T_1 f`, `f_ℓ = T_{2^ℓ} f̃_ℓ`, `f̃_{ℓ+1} = f̃_ℓ - f_ℓ`.
pub fn dyadic_decomposition(f: &GridField<f64>, l: usize, levels: usize) -> Result<DyadicDecomposition> {
    if levels == 0 {
        return Err(Error::Domain("at least one level is required".into()));
    }
    check_moments(f, l)?;
    let fam = DualFamily::new(f.geometry().dim, l)?;
    let mut pieces = Vec::with_capacity(levels);
    let mut tail = f.clone();
    for lvl in 0..levels {
        let (piece, _) = truncate(&tail, 2f64.powi(lvl as i32), &fam)?;
        tail = tail.sub(&piece)?;
        pieces.push(piece);
    }
    let (direct, _) = truncate(f, 2f64.powi(levels as i32 - 1), &fam)?;
    let gap = f.sub(&direct)?.sub(&tail)?.max_abs();
    let sup_norms = pieces.iter().map(|p| p.max_abs()).collect();
    Ok(DyadicDecomposition { pieces, tail, sup_norms, tail_formula_gap: gap })
}

impl DyadicDecomposition {
    /// Slope of `log₂ sup|f_ℓ|` against `ℓ` over `lo..=hi`.
    pub fn fitted_exponent(&self, lo: usize, hi: usize) -> Result<f64> {
        if hi >= self.sup_norms.len() || hi < lo + 1 {
            return Err(Error::Domain(format!("level range {lo}..={hi} outside 0..{}", self.sup_norms.len())));
        }
        let rows: Vec<Vec<f64>> = (lo..=hi).map(|k| vec![1.0, k as f64]).collect();
        let y: Vec<f64> = (lo..=hi).map(|k| self.sup_norms[k].log2()).collect();
        crate::validate::least_squares(&rows, &y).map(|c| c[1]).ok_or_else(|| Error::Numerical("degenerate fit".into()))
    }
}
