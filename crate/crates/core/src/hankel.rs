//! The binomial and Catalan Hankel families, their triangular factors and
//! closed-form inverses.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::combinat::{
    binomial, catalan, middle_binomial, semi_binomial, semi_catalan, shifted_semi_binomial, shifted_semi_catalan,
};
use crate::error::{Error, Result};
use crate::rational::{big, int, pow2, rat, sign_pow};
use crate::{ExactMatrix, Rational};

/// `B = (b_{j+k})`, `B' = (b_{j+k+1})`, `C = (c_{j+k})`, `C' = (c_{j+k+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HankelKind {
    B,
    BShift,
    C,
    CShift,
}

impl HankelKind {
    pub const ALL: [HankelKind; 4] = [HankelKind::B, HankelKind::BShift, HankelKind::C, HankelKind::CShift];

    pub fn label(self) -> &'static str {
        match self {
            HankelKind::B => "B",
            HankelKind::BShift => "B'",
            HankelKind::C => "C",
            HankelKind::CShift => "C'",
        }
    }

    fn shift(self) -> i64 {
        match self {
            HankelKind::B | HankelKind::C => 0,
            HankelKind::BShift | HankelKind::CShift => 1,
        }
    }

    fn is_binomial(self) -> bool {
        matches!(self, HankelKind::B | HankelKind::BShift)
    }

    /// Hankel entry `a_{i}` of the family (index already shifted).
    fn entry(self, i: i64) -> Rational {
        if self.is_binomial() {
            middle_binomial(i + self.shift())
        } else {
            catalan(i + self.shift())
        }
    }
}

impl fmt::Display for HankelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for HankelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" => Ok(HankelKind::B),
            "B'" | "Bs" | "Bshift" => Ok(HankelKind::BShift),
            "C" => Ok(HankelKind::C),
            "C'" | "Cs" | "Cshift" => Ok(HankelKind::CShift),
            _ => Err(Error::Parse(format!("unknown Hankel kind {s:?}"))),
        }
    }
}

/// `L·D·Lᵀ` factorization of a Hankel family member.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorBundle {
    pub kind: HankelKind,
    pub n: usize,
    pub l: ExactMatrix,
    pub d: ExactMatrix,
}

impl FactorBundle {
    pub fn reconstruct(&self) -> ExactMatrix {
        &(&self.l * &self.d) * &self.l.transpose()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension("Hankel size must be at least 1".into()));
    }
    Ok(())
}

pub fn build(kind: HankelKind, n: usize) -> Result<ExactMatrix> {
    check_n(n)?;
    Ok(ExactMatrix::from_fn(n, n, |j, k| kind.entry((j + k) as i64)))
}

/// Entry `(j, k)` of the triangular factor: `S`, `S'`, `R` or `R'`.
pub fn factor_entry(kind: HankelKind, j: i64, k: i64) -> Rational {
    match kind {
        HankelKind::C => semi_catalan(j, k),
        HankelKind::CShift => shifted_semi_catalan(j, k),
        HankelKind::B => {
            if k > j {
                Rational::zero()
            } else {
                semi_binomial(j, k)
            }
        }
        HankelKind::BShift => shifted_semi_binomial(j, k),
    }
}

pub fn factor(kind: HankelKind, n: usize) -> Result<FactorBundle> {
    check_n(n)?;
    let l = ExactMatrix::from_fn(n, n, |j, k| factor_entry(kind, j as i64, k as i64));
    let d = match kind {
        HankelKind::C | HankelKind::CShift => ExactMatrix::identity(n),
        HankelKind::B => ExactMatrix::diagonal((0..n).map(|i| if i == 0 { int(1) } else { int(2) }).collect()),
        HankelKind::BShift => ExactMatrix::diagonal(vec![int(2); n]),
    };
    Ok(FactorBundle { kind, n, l, d })
}

/// Closed form of `(L^{-1})_{jk}` for the triangular factor `L`.
pub fn inverse_factor_entry(kind: HankelKind, j: i64, k: i64) -> Rational {
    let s = sign_pow(j + k);
    let v = match kind {
        HankelKind::C => binomial(j + k, j - k),
        HankelKind::CShift => binomial(j + k + 1, j - k),
        HankelKind::B => binomial(j + k, j - k) * 2 - binomial(j + k - 1, j - k),
        HankelKind::BShift => binomial(j + k + 1, j - k) * 2 - binomial(j + k, j - k),
    };
    s * big(v)
}

pub fn closed_inverse_factor(kind: HankelKind, n: usize) -> Result<ExactMatrix> {
    check_n(n)?;
    Ok(ExactMatrix::from_fn(n, n, |j, k| inverse_factor_entry(kind, j as i64, k as i64)))
}

/// Closed form of `(H^{-1})_{jk}` for the Hankel matrix `H = build(kind, n)`.
pub fn closed_inverse_entry(kind: HankelKind, n: usize, j: i64, k: i64) -> Rational {
    let top = n as i64 - 1;
    let lo = j.max(k);
    let term = |i: i64, a: i64| -> Rational {
        match kind {
            HankelKind::C => big(binomial(i + a, i - a)),
            HankelKind::CShift => big(binomial(i + a + 1, i - a)),
            HankelKind::B => big(binomial(i + a, i - a) * 2 - binomial(i + a - 1, i - a)),
            HankelKind::BShift => big(binomial(i + a + 1, i - a) * 2 - binomial(i + a, i - a)),
        }
    };
    let mut sum = Rational::zero();
    for i in lo..=top {
        sum += term(i, j) * term(i, k);
    }
    let s = sign_pow(j + k);
    match kind {
        HankelKind::C | HankelKind::CShift => s * sum,
        HankelKind::B => {
            let delta = if j == 0 && k == 0 { rat(1, 2) } else { Rational::zero() };
            delta + s * sum * rat(1, 2)
        }
        HankelKind::BShift => s * sum * rat(1, 2),
    }
}

pub fn closed_inverse(kind: HankelKind, n: usize) -> Result<ExactMatrix> {
    check_n(n)?;
    Ok(ExactMatrix::from_fn(n, n, |j, k| closed_inverse_entry(kind, n, j as i64, k as i64)))
}

/// Claimed and computed determinants of `build(kind, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetIdentity {
    pub claimed: Rational,
    pub computed: Rational,
}

impl DetIdentity {
    pub fn holds(&self) -> bool {
        self.claimed == self.computed
    }
}

pub fn determinant_identity(kind: HankelKind, n: usize) -> Result<DetIdentity> {
    let computed = build(kind, n)?.det()?;
    let claimed = match kind {
        HankelKind::B => pow2(n as i64 - 1),
        HankelKind::BShift => pow2(n as i64),
        HankelKind::C | HankelKind::CShift => Rational::one(),
    };
    Ok(DetIdentity { claimed, computed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int_matrix;

    #[test]
    fn displayed_matrices() {
        assert_eq!(build(HankelKind::C, 3).unwrap(), int_matrix(&[&[1, 1, 2], &[1, 2, 5], &[2, 5, 14]]));
        assert_eq!(build(HankelKind::BShift, 3).unwrap(), int_matrix(&[&[2, 6, 20], &[6, 20, 70], &[20, 70, 252]]));
        assert_eq!(build(HankelKind::B, 1).unwrap(), int_matrix(&[&[1]]));
        assert!(build(HankelKind::B, 0).is_err());
    }

    #[test]
    fn factor_triangles() {
        let s = factor(HankelKind::C, 4).unwrap();
        assert_eq!(s.l, int_matrix(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[2, 3, 1, 0], &[5, 9, 5, 1]]));
        let r = factor(HankelKind::B, 4).unwrap();
        assert_eq!(r.l, int_matrix(&[&[1, 0, 0, 0], &[2, 1, 0, 0], &[6, 4, 1, 0], &[20, 15, 6, 1]]));
        assert_eq!(r.d, ExactMatrix::diagonal(vec![int(1), int(2), int(2), int(2)]));
    }

    #[test]
    fn spot_inverse_entries() {
        assert_eq!(inverse_factor_entry(HankelKind::C, 2, 1), int(-3));
        assert_eq!(inverse_factor_entry(HankelKind::B, 0, 0), int(1));
        assert_eq!(inverse_factor_entry(HankelKind::BShift, 1, 0), int(-3));
        assert_eq!(closed_inverse(HankelKind::C, 3).unwrap()[(2, 0)], int(1));
        assert_eq!(closed_inverse(HankelKind::C, 5).unwrap()[(2, 1)], int(-183));
    }
}
