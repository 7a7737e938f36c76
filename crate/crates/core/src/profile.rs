//! Exact Fourier transforms of `c·ζ^e / (1+ζ²)^M` for `t ≥ 0`, by residue
//! calculus at `ζ = i`.
//!
//! For `t ≥ 0` the contour closes in the upper half plane and
//!
//! ```text
//! ∫ p(ζ) e^{itζ} (1+ζ²)^{-M} dζ
//!     = 2πi e^{-t} Σ_{a+b+c=M-1} p^{(a)}(i)/a! · (it)^b/b! · (-1)^c (M)_c/c! · (2i)^{-M-c}
//! ```
//!
//! where `(M)_c` is the rising factorial. All arithmetic is over the
//! Gaussian rationals, so the result is exact.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, One, Zero};

use crate::combinat::binomial;
use crate::error::{Error, Result};
use crate::rational::{big, format_rational, int};
use crate::scalar::rational_to_f64;
use crate::Rational;

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        GaussRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        GaussRational::real(Rational::zero())
    }

    pub fn one() -> Self {
        GaussRational::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        GaussRational { re: &self.re * s, im: &self.im * s }
    }

    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().powi(-e);
        }
        let mut acc = GaussRational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn inv(&self) -> Self {
        let n = &self.re * &self.re + &self.im * &self.im;
        GaussRational { re: &self.re / &n, im: -&self.im / &n }
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re, im: -self.im }
    }
}

/// `t ↦ π · prefactor · e^{-t} · Σ coeffs[i]·t^i` on `t ≥ 0`.
///
/// `prefactor` is the lowest non-zero coefficient, so `coeffs` starts with
/// a one once leading zeros are skipped. The zero profile has an empty list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyProfile {
    pub prefactor: Rational,
    pub coeffs: Vec<Rational>,
}

impl ExpPolyProfile {
    pub fn zero() -> Self {
        ExpPolyProfile { prefactor: Rational::zero(), coeffs: Vec::new() }
    }

    /// Normalizes raw coefficients of `π e^{-t} Σ c_i t^i`.
    pub fn from_raw(mut raw: Vec<Rational>) -> Self {
        while raw.last().is_some_and(|c| c.is_zero()) {
            raw.pop();
        }
        let Some(p) = raw.iter().find(|c| !c.is_zero()).cloned() else {
            return ExpPolyProfile::zero();
        };
        let coeffs = raw.into_iter().map(|c| c / &p).collect();
        ExpPolyProfile { prefactor: p, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    /// Coefficients `c_i` of `π e^{-t} Σ c_i t^i`.
    pub fn raw(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|c| c * &self.prefactor).collect()
    }

    /// Exact value at `t = 0`, as a multiple of π.
    pub fn at_zero_over_pi(&self) -> Rational {
        self.raw().first().cloned().unwrap_or_else(Rational::zero)
    }

    /// Value at `t` for `t ≥ 0`. Negative `t` is evaluated through `|t|`,
    /// which is the right continuation only for even numerators.
    pub fn eval<T: Float>(&self, t: T) -> T {
        let t = t.abs();
        let raw = self.raw();
        let mut acc = T::zero();
        for c in raw.iter().rev() {
            acc = acc * t + T::from(rational_to_f64(c)).expect("finite coefficient");
        }
        T::from(std::f64::consts::PI).expect("π representable") * (-t).exp() * acc
    }

    /// The derivative in `t`, again of exponential-polynomial form.
    pub fn derivative(&self) -> Self {
        let raw = self.raw();
        let n = raw.len();
        let mut d = vec![Rational::zero(); n];
        for (i, c) in raw.iter().enumerate() {
            d[i] -= c.clone();
            if i > 0 {
                d[i - 1] += c * int(i as i64);
            }
        }
        ExpPolyProfile::from_raw(d)
    }

    /// Human readable form, e.g. `π·(1/2)·e^{-t}·(1 + t)`.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("{}·t", format_rational(c)),
                _ => format!("{}·t^{i}", format_rational(c)),
            })
            .collect();
        format!("π·({})·e^(-t)·({})", format_rational(&self.prefactor), terms.join(" + "))
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

fn rising(m: u32, c: u32) -> Rational {
    (0..c as i64).fold(Rational::one(), |acc, k| acc * int(m as i64 + k))
}

/// Profile of `∫ coef·ζ^e·e^{itζ}(1+ζ²)^{-M} dζ` for `t ≥ 0`.
///
/// Requires `e ≤ 2M-2` so the integrand is absolutely integrable. The
/// result must be real; an imaginary remainder is reported as a consistency
/// error.
pub fn monomial_profile(coef: &GaussRational, e: u32, m_exp: u32) -> Result<ExpPolyProfile> {
    if m_exp == 0 || e + 2 > 2 * m_exp {
        return Err(Error::Domain(format!("ζ^{e}/(1+ζ²)^{m_exp} is not integrable")));
    }
    if coef.is_zero() {
        return Ok(ExpPolyProfile::zero());
    }
    let n = m_exp - 1;
    let i = GaussRational::i();
    let two_i = GaussRational::new(Rational::zero(), int(2));
    // p^{(a)}(i)/a! = coef · C(e, a) · i^{e-a}
    let p_der = |a: u32| -> GaussRational {
        if a > e {
            return GaussRational::zero();
        }
        (coef * &i.powi((e - a) as i64)).scale(&big(binomial(e as i64, a as i64)))
    };
    let mut raw = Vec::with_capacity(n as usize + 1);
    for b in 0..=n {
        let mut s = GaussRational::zero();
        for a in 0..=(n - b) {
            let c = n - b - a;
            let q = two_i.powi(-(m_exp as i64) - c as i64).scale(&(rising(m_exp, c) / factorial(c)));
            let q = if c % 2 == 1 { -q } else { q };
            s = &s + &(&p_der(a) * &q);
        }
        // 2πi · i^b / b!, with π factored out
        let w = (&i * &i.powi(b as i64)).scale(&(int(2) / factorial(b)));
        let term = &w * &s;
        if !term.im.is_zero() {
            return Err(Error::Consistency("residue profile has an imaginary part".into()));
        }
        raw.push(term.re);
    }
    Ok(ExpPolyProfile::from_raw(raw))
}

/// `∫ (1+ζ²)^{-M} e^{itζ} dζ`.
pub fn base_profile(m_exp: u32) -> Result<ExpPolyProfile> {
    monomial_profile(&GaussRational::one(), 0, m_exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn first_profiles() {
        let f1 = base_profile(1).unwrap();
        assert_eq!(f1.prefactor, int(1));
        assert_eq!(f1.coeffs, vec![int(1)]);
        let f2 = base_profile(2).unwrap();
        assert_eq!(f2.prefactor, rat(1, 2));
        assert_eq!(f2.coeffs, vec![int(1), int(1)]);
    }

    #[test]
    fn derivative_of_second_profile() {
        // d/dt (1+t)e^{-t} = -t e^{-t}
        let d = base_profile(2).unwrap().derivative();
        assert_eq!(d.raw(), vec![int(0), rat(-1, 2)]);
    }

    #[test]
    fn divergent_rejected() {
        assert!(monomial_profile(&GaussRational::one(), 2, 1).is_err());
    }
}
