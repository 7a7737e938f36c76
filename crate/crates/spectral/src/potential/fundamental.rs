//! The fundamental solution of `Δ^m` on `R^d`, its exact derivatives, and
//! the numerical calibration of its constant.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use halfspace_core::rational::{int, rat};
use halfspace_core::scalar::rational_to_f64;
use halfspace_core::Rational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{graded_breaks, Rule};

/// Whether `φ_{m,d}` carries a logarithm: `d` even and `2m ≥ d`.
pub fn has_log(m: usize, d: usize) -> bool {
    d % 2 == 0 && 2 * m >= d
}

/// `C·|x|^{2m-d}·log|x|` in the logarithmic case, `C·|x|^{2m-d}` otherwise.
pub fn phi(m: usize, d: usize, x: &[f64], c: f64) -> Result<f64> {
    check_md(m, d, x.len())?;
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::Singularity("φ is singular at the origin".into()));
    }
    let p = r.powi(2 * m as i32 - d as i32);
    Ok(c * if has_log(m, d) { p * r.ln() } else { p })
}

fn check_md(m: usize, d: usize, len: usize) -> Result<()> {
    if m == 0 || d < 2 {
        return Err(Error::Domain(format!("need m ≥ 1 and d ≥ 2, got m = {m}, d = {d}")));
    }
    if len != d {
        return Err(Error::Dimension(format!("point in R^{len} for d = {d}")));
    }
    Ok(())
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Sum of `c·x^γ·|x|^e` keyed by `(γ, e)`.
type Terms = BTreeMap<(Vec<u32>, i32), Rational>;

/// `D^β φ = p(x)·log|x|² + q(x)` for the unit-constant fundamental solution,
/// with `p` and `q` stored as sums of `c·x^γ·|x|^e`. Terms with even
/// non-negative `e` are expanded into monomials, so `p` is an exact
/// polynomial and vanishes identically when `|β| > 2m-d`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialLogForm {
    pub d: usize,
    /// Homogeneity degree `2m-d-|β|`.
    pub degree: i32,
    pub log_part: Vec<(Vec<u32>, i32, Rational)>,
    pub plain_part: Vec<(Vec<u32>, i32, Rational)>,
}

fn expand(terms: Terms, d: usize) -> Terms {
    let mut out = Terms::new();
    for ((gamma, e), c) in terms {
        if e > 0 && e % 2 == 0 {
            // |x|^e = (Σ x_i²)^{e/2}
            let mut poly: Terms = Terms::new();
            poly.insert((vec![0; d], 0), int(1));
            for _ in 0..e / 2 {
                let mut next = Terms::new();
                for ((g, _), v) in &poly {
                    for i in 0..d {
                        let mut g2 = g.clone();
                        g2[i] += 2;
                        *next.entry((g2, 0)).or_insert_with(Rational::zero) += v.clone();
                    }
                }
                poly = next;
            }
            for ((g, _), v) in poly {
                let g2: Vec<u32> = g.iter().zip(&gamma).map(|(a, b)| a + b).collect();
                *out.entry((g2, 0)).or_insert_with(Rational::zero) += v * &c;
            }
        } else {
            *out.entry((gamma, e)).or_insert_with(Rational::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn differentiate(terms: &Terms, i: usize) -> Terms {
    let mut out = Terms::new();
    for ((gamma, e), c) in terms {
        if gamma[i] > 0 {
            let mut g = gamma.clone();
            g[i] -= 1;
            *out.entry((g, *e)).or_insert_with(Rational::zero) += c * int(gamma[i] as i64);
        }
        if *e != 0 {
            let mut g = gamma.clone();
            g[i] += 1;
            *out.entry((g, e - 2)).or_insert_with(Rational::zero) += c * int(*e as i64);
        }
    }
    out
}

fn eval_terms(terms: &[(Vec<u32>, i32, Rational)], coeffs: &[f64], x: &[f64], r: f64) -> f64 {
    terms
        .iter()
        .zip(coeffs)
        .map(|((g, e, _), c)| c * x.iter().zip(g).map(|(v, &k)| v.powi(k as i32)).product::<f64>() * r.powi(*e))
        .sum()
}

impl RadialLogForm {
    /// The unit-constant `φ_{m,d}`.
    pub fn fundamental(m: usize, d: usize) -> Result<Self> {
        check_md(m, d, d)?;
        let e = 2 * m as i32 - d as i32;
        let mut t = Terms::new();
        if has_log(m, d) {
            // r^e log r = ½ r^e log r²
            t.insert((vec![0; d], e), rat(1, 2));
            Ok(Self::from_terms(d, e, expand(t, d), Terms::new()))
        } else {
            t.insert((vec![0; d], e), int(1));
            Ok(Self::from_terms(d, e, Terms::new(), expand(t, d)))
        }
    }

    /// `D^β φ_{m,d}`.
    pub fn structure(m: usize, d: usize, beta: &[u32]) -> Result<Self> {
        if beta.len() != d {
            return Err(Error::Dimension(format!("multi-index of length {} for d = {d}", beta.len())));
        }
        let mut f = Self::fundamental(m, d)?;
        for (i, &b) in beta.iter().enumerate() {
            for _ in 0..b {
                f = f.derivative(i);
            }
        }
        Ok(f)
    }

    fn from_terms(d: usize, degree: i32, log: Terms, plain: Terms) -> Self {
        let flat = |t: Terms| t.into_iter().map(|((g, e), c)| (g, e, c)).collect();
        RadialLogForm { d, degree, log_part: flat(log), plain_part: flat(plain) }
    }

    fn terms(part: &[(Vec<u32>, i32, Rational)]) -> Terms {
        part.iter().map(|(g, e, c)| ((g.clone(), *e), c.clone())).collect()
    }

    /// `∂_i` of the form.
    pub fn derivative(&self, i: usize) -> Self {
        let log = Self::terms(&self.log_part);
        let plain = Self::terms(&self.plain_part);
        let new_log = differentiate(&log, i);
        let mut new_plain = differentiate(&plain, i);
        // ∂_i log r² = 2 x_i / r²
        for ((gamma, e), c) in &log {
            let mut g = gamma.clone();
            g[i] += 1;
            *new_plain.entry((g, e - 2)).or_insert_with(Rational::zero) += c * int(2);
        }
        Self::from_terms(self.d, self.degree - 1, expand(new_log, self.d), expand(new_plain, self.d))
    }

    pub fn laplacian(&self) -> Self {
        let mut acc: Option<Self> = None;
        for i in 0..self.d {
            let t = self.derivative(i).derivative(i);
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        acc.expect("d ≥ 1")
    }

    fn add(&self, o: &Self) -> Self {
        let mut log = Self::terms(&self.log_part);
        for (k, v) in Self::terms(&o.log_part) {
            *log.entry(k).or_insert_with(Rational::zero) += v;
        }
        let mut plain = Self::terms(&self.plain_part);
        for (k, v) in Self::terms(&o.plain_part) {
            *plain.entry(k).or_insert_with(Rational::zero) += v;
        }
        log.retain(|_, c| !c.is_zero());
        plain.retain(|_, c| !c.is_zero());
        Self::from_terms(self.d, self.degree, log, plain)
    }

    pub fn log_vanishes(&self) -> bool {
        self.log_part.is_empty()
    }

    /// Float evaluator with the coefficients converted once.
    pub fn evaluator(&self) -> FormEvaluator {
        let conv = |p: &[(Vec<u32>, i32, Rational)]| p.iter().map(|(_, _, c)| rational_to_f64(c)).collect();
        FormEvaluator { form: self.clone(), log_c: conv(&self.log_part), plain_c: conv(&self.plain_part) }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.evaluator().eval(x)
    }
}

/// A [`RadialLogForm`] with `f64` coefficients.
#[derive(Clone, Debug)]
pub struct FormEvaluator {
    form: RadialLogForm,
    log_c: Vec<f64>,
    plain_c: Vec<f64>,
}

impl FormEvaluator {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.form.d {
            return Err(Error::Dimension(format!("point in R^{} for d = {}", x.len(), self.form.d)));
        }
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::Singularity("derivative of φ at the origin".into()));
        }
        let mut v = eval_terms(&self.form.plain_part, &self.plain_c, x, r);
        if !self.log_c.is_empty() {
            v += eval_terms(&self.form.log_part, &self.log_c, x, r) * (r * r).ln();
        }
        Ok(v)
    }
}

/// `C·D^β φ_{m,d}(x)`.
pub fn dphi(m: usize, d: usize, beta: &[u32], x: &[f64], c: f64) -> Result<f64> {
    check_md(m, d, x.len())?;
    Ok(c * RadialLogForm::structure(m, d, beta)?.eval(x)?)
}

/// Area of the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// `Γ(d/2)` for a positive integer `d`.
fn gamma_half(d: usize) -> f64 {
    if d % 2 == 0 {
        (1..d / 2).map(|k| k as f64).product()
    } else {
        // Γ(k + ½) = (2k)! √π / (4^k k!)
        let k = (d - 1) / 2;
        let mut v = PI.sqrt();
        for i in 0..k {
            v *= i as f64 + 0.5;
        }
        v
    }
}

/// A radial probe `P(|x|²/σ²)·exp(-|x|²/(2σ²))` with `P` given by its
/// coefficients in `s = |x|²/σ²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub poly: Vec<f64>,
    pub sigma: f64,
}

impl Probe {
    pub fn gaussian(sigma: f64) -> Self {
        Probe { poly: vec![1.0], sigma }
    }

    pub fn at_origin(&self) -> f64 {
        self.poly[0]
    }

    /// Coefficients (in `s = r²`) of `Δ^k` of the probe, over the same
    /// Gaussian factor. With `a = 1/(2σ²)`, `D P = P' - aP` and the radial
    /// Laplacian acts as `P ↦ 4s D²P + 2d DP`.
    pub fn laplacian_power(&self, k: usize, d: usize) -> Vec<f64> {
        let s2 = self.sigma * self.sigma;
        let a = 1.0 / (2.0 * s2);
        let mut p: Vec<f64> = self.poly.iter().enumerate().map(|(i, c)| c / s2.powi(i as i32)).collect();
        let dop = |p: &[f64]| -> Vec<f64> {
            let mut out: Vec<f64> = p.iter().map(|c| -a * c).collect();
            for i in 1..p.len() {
                out[i - 1] += i as f64 * p[i];
            }
            out
        };
        for _ in 0..k {
            let d1 = dop(&p);
            let d2 = dop(&d1);
            let mut next = vec![0.0; p.len() + 1];
            for (i, c) in d2.iter().enumerate() {
                next[i + 1] += 4.0 * c;
            }
            for (i, c) in d1.iter().enumerate() {
                next[i] += 2.0 * d as f64 * c;
            }
            p = next;
        }
        p
    }

    pub fn eval_poly(coeffs: &[f64], r: f64, sigma: f64) -> f64 {
        let s = r * r;
        coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c) * (-s / (2.0 * sigma * sigma)).exp()
    }
}

/// Result of a calibration, with the spread between two quadrature orders.
#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub m: usize,
    pub d: usize,
    pub constant: f64,
    pub error_estimate: f64,
}

fn radial_pairing(m: usize, d: usize, probe: &Probe, k: usize, order: usize) -> f64 {
    let coeffs = probe.laplacian_power(k, d);
    let sigma = probe.sigma;
    let breaks = graded_breaks(0.0, 16.0 * sigma, 0.0, sigma * 2f64.powi(-30), 0.25 * sigma);
    let rule = Rule::new(order);
    let e = 2 * m as i32 - d as i32;
    let log = has_log(m, d);
    sphere_area(d)
        * rule.integrate(&breaks, |r| {
            if r == 0.0 {
                return 0.0;
            }
            let phi = if log { r.powi(e) * r.ln() } else { r.powi(e) };
            phi * Probe::eval_poly(&coeffs, r, sigma) * r.powi(d as i32 - 1)
        })
}

/// `C_{m,d}` such that `⟨C·φ, Δ^m γ⟩ = γ(0)` for the probe `γ`.
pub fn calibrate_with_probe(m: usize, d: usize, probe: &Probe) -> Result<Calibration> {
    check_md(m, d, d)?;
    let fine = radial_pairing(m, d, probe, m, 24);
    let coarse = radial_pairing(m, d, probe, m, 16);
    if !fine.is_finite() || fine == 0.0 {
        return Err(Error::Accuracy(format!("calibration pairing is {fine}")));
    }
    let c = probe.at_origin() / fine;
    let err = (c - probe.at_origin() / coarse).abs();
    if !(err <= 1e-6 * c.abs()) {
        return Err(Error::Accuracy(format!("calibration quadrature did not settle: {err:e}")));
    }
    Ok(Calibration { m, d, constant: c, error_estimate: err })
}

/// `C_{m,d}` from a unit Gaussian probe. `m > d/2` is not required.
pub fn calibrate(m: usize, d: usize) -> Result<Calibration> {
    calibrate_with_probe(m, d, &Probe::gaussian(1.0))
}

/// `C_{m,d}` from the Fourier side: with `φ̂ = (-1)^m |ξ|^{-2m}` and the
/// smallest `j` with `2j > 2m-d`, so that `Δ^j γ` annihilates the polynomial
/// ambiguity, `⟨Cφ, Δ^j γ⟩ = (2π)^{-d} ∫ (-1)^{m+j} |ξ|^{2j-2m} γ̂(ξ) dξ`.
pub fn calibrate_fourier(m: usize, d: usize) -> Result<Calibration> {
    check_md(m, d, d)?;
    let j = (2 * m).saturating_sub(d) / 2 + 1;
    let j = if 2 * m < d { 0 } else { j };
    let probe = Probe::gaussian(1.0);
    let sign = if (m + j) % 2 == 0 { 1.0 } else { -1.0 };
    let pw = d as i32 - 1 + 2 * j as i32 - 2 * m as i32;
    let rule = Rule::new(24);
    let breaks = graded_breaks(0.0, 16.0, 0.0, 2f64.powi(-30), 0.25);
    // γ̂(ρ) = (2π)^{d/2} e^{-ρ²/2} for σ = 1
    let fourier = sign
        * sphere_area(d)
        * (2.0 * PI).powf(-(d as f64) / 2.0)
        * rule.integrate(&breaks, |rho| rho.powi(pw) * (-rho * rho / 2.0).exp());
    let direct = radial_pairing(m, d, &probe, j, 24);
    let coarse = radial_pairing(m, d, &probe, j, 16);
    let c = fourier / direct;
    let err = (c - fourier / coarse).abs();
    Ok(Calibration { m, d, constant: c, error_estimate: err })
}

/// `C·φ_{m,d}` with its constant fixed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalSolution {
    pub m: usize,
    pub d: usize,
    pub c: f64,
}

impl FundamentalSolution {
    pub fn new(m: usize, d: usize, c: f64) -> Result<Self> {
        check_md(m, d, d)?;
        Ok(FundamentalSolution { m, d, c })
    }

    pub fn calibrated(m: usize, d: usize) -> Result<Self> {
        Ok(FundamentalSolution { m, d, c: calibrate(m, d)?.constant })
    }

    pub fn phi(&self, x: &[f64]) -> Result<f64> {
        phi(self.m, self.d, x, self.c)
    }

    pub fn dphi(&self, beta: &[u32], x: &[f64]) -> Result<f64> {
        dphi(self.m, self.d, beta, x, self.c)
    }
}
