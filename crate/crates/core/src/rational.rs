//! Exact rational helpers and the JSON matrix format.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{ExactMatrix, Rational};

pub fn int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn big(v: BigInt) -> Rational {
    BigRational::from_integer(v)
}

/// `num/den` in lowest terms. Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs() as usize;
    if e >= 0 {
        big(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `(-1)^e`.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Decimal string: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"n"`, `"n/d"` or a plain decimal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = ip.trim_start().starts_with('-');
        let whole = if ip.is_empty() || ip == "-" || ip == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(ip).map_err(|_| bad())?
        };
        let frac = BigInt::from_str(fp).map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(fp.len() as u32);
        let mag = whole.abs() * &scale + frac;
        let v = BigRational::new(mag, scale);
        return Ok(if negative { -v } else { v });
    }
    BigInt::from_str(s).map(big).map_err(|_| bad())
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            entries: self.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        matrix_from_json(raw).map_err(serde::de::Error::custom)
    }
}

fn matrix_from_json(raw: MatrixJson) -> Result<ExactMatrix> {
    if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
        return Err(Error::Dimension(format!("entries do not match a {}x{} shape", raw.rows, raw.cols)));
    }
    let data = raw.entries.iter().flatten().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
    ExactMatrix::new(raw.rows, raw.cols, data)
}

/// Serializes an exact matrix to its JSON text form.
pub fn matrix_to_json(m: &ExactMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json_str(s: &str) -> Result<ExactMatrix> {
    let raw: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    matrix_from_json(raw)
}

/// Builds an exact matrix from integer rows.
pub fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
    ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
        .expect("rows must have equal length")
}
