//! JSON helpers. Output is deterministic: fixed key order, no clock.

use serde_json::{json, Value};

use halfspace_core::rational::format_rational;
use halfspace_core::{ExactMatrix, Rational};
use num_traits::ToPrimitive;

/// Integers that fit in `i64` become numbers, anything else a `"n/d"` string.
pub fn rational(q: &Rational) -> Value {
    if q.is_integer() {
        if let Some(v) = q.numer().to_i64() {
            return json!(v);
        }
    }
    json!(format_rational(q))
}

pub fn matrix(m: &ExactMatrix) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

/// Floats rounded to 12 significant digits, so that parallel reductions
/// differing in the last bits print the same.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return json!(x.to_string());
    }
    let s = format!("{x:.11e}");
    json!(s.parse::<f64>().unwrap_or(x))
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("value serializes"));
}
