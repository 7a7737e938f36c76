#![allow(dead_code)]

use halfspace_core::{ExactMatrix, Rational};
use num_traits::Zero;

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &ExactMatrix) -> Rational {
    let n = m.rows();
    if n == 0 {
        return Rational::from_integer(1.into());
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut acc = Rational::zero();
    for c in 0..n {
        if m[(0, c)].is_zero() {
            continue;
        }
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&j| j != c).collect();
        let sub = ExactMatrix::from_fn(n - 1, n - 1, |i, j| m[(rows[i], cols[j])].clone());
        let term = m[(0, c)].clone() * cofactor_det(&sub);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
        x[i] = z;
    }
    (x, w)
}

/// Composite Gauss–Legendre on `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            s += wi * f(lo + 0.5 * h * (xi + 1.0));
        }
    }
    s * 0.5 * h
}

/// `∫_R f(ζ) dζ` through `ζ = tan θ`. Needs `f = O(ζ^{-2})`.
pub fn integrate_line(f: impl Fn(f64) -> f64) -> f64 {
    let half = std::f64::consts::FRAC_PI_2;
    integrate(
        |th| {
            let c = th.cos();
            if c <= 0.0 {
                return 0.0;
            }
            f(th.tan()) / (c * c)
        },
        -half,
        half,
        64,
    )
}

/// Ooura–Mori double exponential rule for `∫_0^∞ f(x)·cos(ωx) dx`
/// (`sine = false`) or `∫_0^∞ f(x)·sin(ωx) dx` (`sine = true`), ω > 0.
pub fn ooura_mori(f: impl Fn(f64) -> f64, omega: f64, sine: bool, h: f64) -> f64 {
    use std::f64::consts::PI;
    let mm = PI / h;
    let beta = 0.25;
    let alpha = beta / (1.0 + mm * (1.0 + mm).ln() / (4.0 * PI)).sqrt();
    let u = |t: f64| 2.0 * PI * t + alpha * (1.0 - (-t).exp()) + beta * (t.exp() - 1.0);
    let du = |t: f64| 2.0 * PI + alpha * (-t).exp() + beta * t.exp();
    let phi = |t: f64| -> (f64, f64) {
        if t.abs() < 1e-8 {
            let u1 = du(0.0);
            let u2 = 0.5 * (beta - alpha);
            let c = u2 - 0.5 * u1 * u1;
            return (1.0 / u1, -c / (u1 * u1));
        }
        let e = (-u(t)).exp();
        let den = 1.0 - e;
        (t / den, (den - t * du(t) * e) / (den * den))
    };
    let shift = if sine { 0.0 } else { 0.5 };
    let mut s = 0.0;
    let kmin = (-6.0 / h) as i64;
    let kmax = (8.0 / h) as i64;
    for k in kmin..=kmax {
        let t = (k as f64 - shift) * h;
        let (p, dp) = phi(t);
        if dp == 0.0 || !dp.is_finite() {
            continue;
        }
        let x = mm * p / omega;
        let trig = if sine { (mm * p).sin() } else { (mm * p).cos() };
        s += f(x) * trig * dp;
    }
    s * h * mm / omega
}

/// `∫_R f(ζ) e^{itζ} dζ` for real `f` of definite parity, `t > 0`.
pub fn fourier_even(f: impl Fn(f64) -> f64, t: f64) -> f64 {
    2.0 * ooura_mori(f, t, false, 0.02)
}

/// Imaginary part of `∫_R f(ζ) e^{itζ} dζ` for odd real `f`.
pub fn fourier_odd(f: impl Fn(f64) -> f64, t: f64) -> f64 {
    2.0 * ooura_mori(f, t, true, 0.02)
}
