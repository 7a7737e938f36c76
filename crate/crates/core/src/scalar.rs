//! Scalar abstraction shared by exact and floating-point matrices.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// A field element usable as a matrix entry.
///
/// Implemented for `f32`, `f64` and [`BigRational`]. Exact scalars override
/// [`Scalar::determinant`] with fraction-free elimination.
pub trait Scalar: Clone + Debug + PartialEq + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact; controls pivot selection.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Magnitude used to rank pivot candidates.
    fn magnitude(&self) -> f64;

    fn to_f64(&self) -> f64;

    fn determinant(m: &crate::Matrix<Self>) -> crate::Result<Self> {
        crate::matrix::gaussian_det(m)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn determinant(m: &crate::Matrix<Self>) -> crate::Result<Self> {
        crate::matrix::bareiss_det(m)
    }
}

/// Converts a rational to the nearest representable `f64`, including values
/// whose numerator and denominator individually overflow.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Keep the leading 60 bits of each part; the truncation error is far
    // below f64 resolution.
    let top = |v: &BigInt| -> (f64, i64) {
        let bits = v.bits() as i64;
        let drop = (bits - 60).max(0);
        let head = (v >> (drop as usize)).to_f64().unwrap_or(f64::NAN);
        (head, drop)
    };
    let (n, en) = top(q.numer());
    let (d, ed) = top(q.denom());
    let e = en - ed;
    let mut v = n / d;
    // powi saturates for large exponents, so scale in steps.
    let mut rem = e;
    while rem != 0 {
        let step = rem.clamp(-1000, 1000);
        v *= 2f64.powi(step as i32);
        rem -= step;
    }
    v
}
