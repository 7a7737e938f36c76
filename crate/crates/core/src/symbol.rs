//! The boundary symbol matrix `M`, its block factorization and inverse, the
//! τ/ω integrands and their Poisson profiles, and the symbols of the
//! alternative boundary operators and product operator.

use num_complex::Complex;
use num_traits::{Float, One, Signed, Zero};

use crate::combinat::{catalan, middle_binomial};
use crate::error::{Error, Result};
use crate::hankel::{build, closed_inverse, HankelKind};
use crate::profile::{monomial_profile, ExpPolyProfile, GaussRational};
use crate::rational::{int, pow2, sign_pow};
use crate::{ExactMatrix, Rational};

/// `M` and its factorization `P·D1·M·D2·Pᵀ = M̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTable {
    pub m: usize,
    pub matrix: ExactMatrix,
    pub d1: ExactMatrix,
    pub d2: ExactMatrix,
    /// Row `p` of `P` has its one in column `perm[p]`.
    pub perm: Vec<usize>,
    pub tilde: ExactMatrix,
    pub inverse: ExactMatrix,
}

impl SymbolTable {
    pub fn permutation_matrix(&self) -> ExactMatrix {
        permutation_matrix(&self.perm)
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Dimension("order m must be at least 1".into()));
    }
    Ok(())
}

/// Entry `M_{k,j}`.
pub fn m_entry(m: usize, k: usize, j: usize) -> Rational {
    let (m, s) = (m as i64, (j + k) as i64);
    if s % 2 == 1 {
        return Rational::zero();
    }
    if j % 2 == 0 {
        pow2(1 + s - 2 * m) * middle_binomial(m - s / 2 - 1)
    } else {
        -pow2(s - 2 * m) * catalan(m - s / 2 - 1)
    }
}

/// Evens in decreasing order, then odds in decreasing order.
pub fn deshuffle(m: usize) -> Vec<usize> {
    let evens = (0..m).filter(|j| j % 2 == 0).rev();
    let odds = (0..m).filter(|j| j % 2 == 1).rev();
    evens.chain(odds).collect()
}

pub fn permutation_matrix(perm: &[usize]) -> ExactMatrix {
    let n = perm.len();
    ExactMatrix::from_fn(n, n, |p, q| if perm[p] == q { Rational::one() } else { Rational::zero() })
}

fn is_odd(j: usize) -> i64 {
    (j % 2) as i64
}

pub fn d1(m: usize) -> ExactMatrix {
    ExactMatrix::diagonal((0..m).map(|j| pow2(m as i64 - j as i64 + is_odd(j) - 1)).collect())
}

pub fn d2(m: usize) -> ExactMatrix {
    ExactMatrix::diagonal((0..m).map(|j| pow2(m as i64 - j as i64) * sign_pow(is_odd(j))).collect())
}

/// The block form of `M̃`: `B(n+1) ⊕ C'(n)` for `m = 2n+1`, `B'(n) ⊕ C(n)` for `m = 2n`.
pub fn tilde_blocks(m: usize) -> Result<(ExactMatrix, ExactMatrix)> {
    check_m(m)?;
    let n = m / 2;
    let empty = ExactMatrix::zeros(0, 0);
    if m % 2 == 1 {
        let c = if n == 0 { empty } else { build(HankelKind::CShift, n)? };
        Ok((build(HankelKind::B, n + 1)?, c))
    } else {
        Ok((build(HankelKind::BShift, n)?, build(HankelKind::C, n)?))
    }
}

pub fn build_m(m: usize) -> Result<SymbolTable> {
    check_m(m)?;
    let matrix = ExactMatrix::from_fn(m, m, |k, j| m_entry(m, k, j));
    let (d1, d2) = (d1(m), d2(m));
    let perm = deshuffle(m);
    let p = permutation_matrix(&perm);
    let tilde = &(&(&(&p * &d1) * &matrix) * &d2) * &p.transpose();
    let inverse = invert_m_checked(m, &matrix, &d1, &d2, &p)?;
    Ok(SymbolTable { m, matrix, d1, d2, perm, tilde, inverse })
}

fn invert_m_checked(
    m: usize,
    matrix: &ExactMatrix,
    d1: &ExactMatrix,
    d2: &ExactMatrix,
    p: &ExactMatrix,
) -> Result<ExactMatrix> {
    let direct = matrix.inverse()?;
    let n = m / 2;
    let (a, b) = if m % 2 == 1 {
        let c = if n == 0 { ExactMatrix::zeros(0, 0) } else { closed_inverse(HankelKind::CShift, n)? };
        (closed_inverse(HankelKind::B, n + 1)?, c)
    } else {
        (closed_inverse(HankelKind::BShift, n)?, closed_inverse(HankelKind::C, n)?)
    };
    let tilde_inv = ExactMatrix::block_diag(&[&a, &b]);
    // M⁻¹ = D2 · Pᵀ · M̃⁻¹ · P · D1
    let blockwise = &(&(&(d2 * &p.transpose()) * &tilde_inv) * p) * d1;
    if blockwise != direct {
        return Err(Error::Consistency("closed-form and direct inverses of M differ".into()));
    }
    Ok(direct)
}

/// `M⁻¹`, computed by elimination and by the closed block inverses.
pub fn invert_m(m: usize) -> Result<ExactMatrix> {
    Ok(build_m(m)?.inverse)
}

/// Exact `det M` next to the value `(-1)^{⌊m/2⌋}·2^{m²}` stated with the
/// determinant formula, and the value `(-1)^{⌊m/2⌋}·2^{-m²}` that the
/// factorization actually gives.
#[derive(Clone, Debug, PartialEq)]
pub struct DetReport {
    pub computed: Rational,
    pub claimed: Rational,
    pub derived: Rational,
    pub sign: i8,
    /// `log2 |det M|` when it is an integer power of two.
    pub log2_abs: Option<i64>,
}

impl DetReport {
    pub fn matches_claim(&self) -> bool {
        self.computed == self.claimed
    }

    pub fn matches_derived(&self) -> bool {
        self.computed == self.derived
    }
}

fn log2_exact(q: &Rational) -> Option<i64> {
    let is_pow2 = |v: &num_bigint::BigInt| {
        let v = v.abs();
        v.bits() > 0 && v.trailing_zeros() == Some(v.bits() - 1)
    };
    if !is_pow2(q.numer()) || !is_pow2(q.denom()) {
        return None;
    }
    Some(q.numer().abs().bits() as i64 - q.denom().bits() as i64)
}

pub fn det_m(m: usize) -> Result<DetReport> {
    let t = build_m(m)?;
    let computed = t.matrix.det()?;
    let s = sign_pow((m / 2) as i64);
    let e = (m * m) as i64;
    Ok(DetReport {
        sign: if computed.is_negative() { -1 } else { 1 },
        log2_abs: log2_exact(&computed),
        claimed: s.clone() * pow2(e),
        derived: s * pow2(-e),
        computed,
    })
}

/// `coef · ζ^e · (1+ζ²)^{-exponent}`, the shape of every τ and ω integrand.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalIntegrand {
    pub coef: GaussRational,
    pub zeta_power: u32,
    pub exponent: i64,
}

impl RationalIntegrand {
    pub fn eval<T: Float>(&self, zeta: T) -> Complex<T> {
        let c = |q: &Rational| T::from(crate::scalar::rational_to_f64(q)).expect("finite");
        let base = (T::one() + zeta * zeta).powi(-self.exponent as i32) * zeta.powi(self.zeta_power as i32);
        Complex::new(c(&self.coef.re), c(&self.coef.im)) * base
    }

    fn times(&self, o: &RationalIntegrand) -> RationalIntegrand {
        RationalIntegrand {
            coef: &self.coef * &o.coef,
            zeta_power: self.zeta_power + o.zeta_power,
            exponent: self.exponent + o.exponent,
        }
    }

    /// Exact profile of `t ↦ ∫ f(ζ) e^{itζ} dζ`, `t ≥ 0`.
    pub fn profile(&self) -> Result<ExpPolyProfile> {
        if self.exponent < 1 {
            return Err(Error::Domain("integrand does not decay".into()));
        }
        monomial_profile(&self.coef, self.zeta_power, self.exponent as u32)
    }
}

/// The τ_j integrand, scaled so that `x_d|ξ'|` enters as `t`.
pub fn tau_integrand(j: usize, m: usize) -> RationalIntegrand {
    let sm = sign_pow(m as i64);
    if j % 2 == 0 {
        RationalIntegrand {
            coef: GaussRational::real(sm * sign_pow((j / 2) as i64)),
            zeta_power: 0,
            exponent: m as i64 - (j / 2) as i64,
        }
    } else {
        RationalIntegrand {
            coef: GaussRational::new(Rational::zero(), sm * sign_pow(((j - 1) / 2) as i64)),
            zeta_power: 1,
            exponent: m as i64 - ((j - 1) / 2) as i64,
        }
    }
}

/// Symbol of the `k`-th boundary operator in the same scaled variable.
pub fn lambda_integrand(k: usize) -> RationalIntegrand {
    if k % 2 == 0 {
        RationalIntegrand {
            coef: GaussRational::real(sign_pow((k / 2) as i64)),
            zeta_power: 0,
            exponent: -((k / 2) as i64),
        }
    } else {
        RationalIntegrand {
            coef: GaussRational::new(Rational::zero(), -sign_pow(((k - 1) / 2) as i64)),
            zeta_power: 1,
            exponent: -(((k - 1) / 2) as i64),
        }
    }
}

/// `ω_{k,j}`: the `k`-th boundary operator applied to the `j`-th layer
/// integrand.
pub fn omega_integrand(k: usize, j: usize, m: usize) -> RationalIntegrand {
    lambda_integrand(k).times(&tau_integrand(j, m))
}

pub fn tau<T: Float>(j: usize, m: usize, zeta: T) -> Complex<T> {
    tau_integrand(j, m).eval(zeta)
}

pub fn omega<T: Float>(k: usize, j: usize, m: usize, zeta: T) -> Complex<T> {
    omega_integrand(k, j, m).eval(zeta)
}

fn check_indices(m: usize, idx: &[usize]) -> Result<()> {
    check_m(m)?;
    if idx.iter().any(|&i| i >= m) {
        return Err(Error::Domain(format!("indices must lie below m = {m}")));
    }
    Ok(())
}

/// `t ↦ ∫ τ_j(ζ) e^{itζ} dζ`.
pub fn tau_profile(j: usize, m: usize) -> Result<ExpPolyProfile> {
    check_indices(m, &[j])?;
    tau_integrand(j, m).profile()
}

/// `t ↦ ∫ ω_{k,j}(ζ) e^{itζ} dζ`. Odd `j+k` profiles vanish at `t = 0`
/// but not for `t > 0`.
pub fn poisson_profile(k: usize, j: usize, m: usize) -> Result<ExpPolyProfile> {
    check_indices(m, &[j, k])?;
    omega_integrand(k, j, m).profile()
}

/// `∫ ζ^{2n} (1+ζ²)^{-m} dζ` as a multiple of π, for `n ≤ m-1`:
/// `(2n-1)!!·(2m-2n-3)!! / (2^{m-1}·(m-1)!)`.
pub fn alt_bc_moment(n: usize, m: usize) -> Result<Rational> {
    check_m(m)?;
    if n + 1 > m {
        return Err(Error::Domain(format!("a_{n} diverges for m = {m}")));
    }
    let dfact = |k: i64| -> Rational {
        let mut acc = Rational::one();
        let mut i = k;
        while i > 1 {
            acc *= int(i);
            i -= 2;
        }
        acc
    };
    let fact: Rational = (1..m as i64).fold(Rational::one(), |a, k| a * int(k));
    let (n, m) = (n as i64, m as i64);
    Ok(dfact(2 * n - 1) * dfact(2 * m - 2 * n - 3) / (pow2(m - 1) * fact))
}

/// The same moment from the residue profile at `t = 0`.
pub fn alt_bc_moment_residue(n: usize, m: usize) -> Result<Rational> {
    check_m(m)?;
    if n + 1 > m {
        return Err(Error::Domain(format!("a_{n} diverges for m = {m}")));
    }
    Ok(monomial_profile(&GaussRational::one(), 2 * n as u32, m as u32)?.at_zero_over_pi())
}

/// `H1 = (a_{j+k})` and `H2 = (a_{j+k+1})` in units of π.
pub fn alt_bc_symbol(m: usize) -> Result<(ExactMatrix, ExactMatrix)> {
    check_m(m)?;
    let n1 = (m - 1) / 2 + 1;
    let n2 = if m >= 2 { (m - 2) / 2 + 1 } else { 0 };
    let a: Vec<Rational> = (0..m).map(|n| alt_bc_moment(n, m)).collect::<Result<_>>()?;
    let h1 = ExactMatrix::from_fn(n1, n1, |j, k| a[j + k].clone());
    let h2 = ExactMatrix::from_fn(n2, n2, |j, k| a[j + k + 1].clone());
    Ok((h1, h2))
}

/// Factor turning `H1/π` into an integer matrix: `2^{2m-2}`.
pub fn alt_bc_scale(m: usize) -> Rational {
    pow2(2 * m as i64 - 2)
}

fn pairwise_sum<T: Float>(v: &[T]) -> T {
    match v.len() {
        0 => T::zero(),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

fn check_radii<T: Float>(r: &[T]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::Domain("need at least one radius".into()));
    }
    if r.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
        return Err(Error::Domain("radii must be positive and finite".into()));
    }
    if r.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("radii must be strictly increasing".into()));
    }
    Ok(())
}

/// Symbol entry of the product operator `Π (Δ - r_ℓ²)`:
/// `½ Σ_ℓ (t² + r_ℓ²)^{(j+k-1)/2} / Π_{ν≠ℓ}(r_ν² - r_ℓ²)`, zero for odd `j+k`.
pub fn product_operator_symbol<T: Float>(j: usize, k: usize, t: T, r: &[T]) -> Result<T> {
    check_radii(r)?;
    if t < T::zero() {
        return Err(Error::Domain("t must be non-negative".into()));
    }
    if (j + k) % 2 == 1 {
        return Ok(T::zero());
    }
    let half = T::from(0.5).expect("representable");
    let p = T::from(j + k).expect("representable") * half - half;
    let terms: Vec<T> = (0..r.len())
        .map(|l| {
            let rl2 = r[l] * r[l];
            let den = (0..r.len()).filter(|&v| v != l).fold(T::one(), |acc, v| acc * (r[v] * r[v] - rl2));
            (t * t + rl2).powf(p) / den
        })
        .collect();
    Ok(half * pairwise_sum(&terms))
}

/// Divided difference `[x_0, …, x_n] f = Σ_ℓ f(x_ℓ) / Π_{ν≠ℓ}(x_ℓ - x_ν)`.
pub fn divided_difference<T: Float>(nodes: &[T], f: impl Fn(T) -> T) -> Result<T> {
    if nodes.is_empty() {
        return Err(Error::Domain("need at least one node".into()));
    }
    let mut terms = Vec::with_capacity(nodes.len());
    for (l, &x) in nodes.iter().enumerate() {
        let mut den = T::one();
        for (v, &y) in nodes.iter().enumerate() {
            if v != l {
                if x == y {
                    return Err(Error::Domain("repeated node".into()));
                }
                den = den * (x - y);
            }
        }
        terms.push(f(x) / den);
    }
    Ok(pairwise_sum(&terms))
}
