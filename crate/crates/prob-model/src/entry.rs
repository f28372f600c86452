use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;
use std::fmt::Debug;

/// Zero/exactness threshold for floating tables.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Scalar type of a probability table.
pub trait Entry: Clone + PartialOrd + Debug + Send + Sync + 'static {
    const KIND: &'static str;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Exact for rationals; `|x| <= tol` for floats.
    fn is_zero_tol(&self, tol: f64) -> bool;
    fn approx_eq(&self, o: &Self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;
}

impl Entry for Rational64 {
    const KIND: &'static str = "exact";

    fn zero() -> Self {
        Rational64::from_integer(0)
    }
    fn one() -> Self {
        Rational64::from_integer(1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn approx_eq(&self, o: &Self, _tol: f64) -> bool {
        self == o
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }
    fn from_json(v: &Value) -> Option<Self> {
        let s = v.as_str()?;
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let (p, q) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
        (q != 0).then(|| Rational64::new(p, q))
    }
}

impl Entry for f64 {
    const KIND: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero_tol(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        (self - o).abs() <= tol
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }
    fn from_json(v: &Value) -> Option<Self> {
        v.as_f64()
    }
}
