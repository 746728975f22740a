//! Scalar kinds shared by the geometric layer: exact rationals and `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers, the coefficient field of every symbolic computation.
pub type Q = BigRational;

/// Arithmetic required of point coordinates and multivector coefficients.
pub trait Scalar: Clone + Debug + PartialEq + Num + std::ops::Neg<Output = Self> + Send + Sync {
    fn from_q(q: &Q) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// Whether the value should be treated as zero (exact for rationals).
    fn is_negligible(&self) -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_q(&q_int(v))
    }

    fn half(&self) -> Self {
        self.clone() / (Self::one() + Self::one())
    }
}

impl Scalar for Q {
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    fn from_q(q: &Q) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-12
    }
}

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_half() -> Q {
    q_frac(1, 2)
}

/// Exact rational from a finite float (dyadic expansion).
pub fn q_from_f64(v: f64) -> Result<Q> {
    Q::from_float(v).ok_or_else(|| Error::Parameter(format!("non-finite value {v}")))
}

/// The simplest rational (continued-fraction convergent) within float round-off of `v`, so
/// that `0.1` becomes `1/10` rather than its dyadic expansion. Falls back to [`q_from_f64`].
pub fn q_near_f64(v: f64) -> Result<Q> {
    match Ratio::<i64>::approximate_float(v) {
        Some(r) if (*r.numer() as f64 / *r.denom() as f64 - v).abs() <= 4.0 * f64::EPSILON * v.abs().max(1.0) => {
            Ok(Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
        }
        _ => q_from_f64(v),
    }
}

/// Parses `"p/q"`, an integer, or a terminating decimal into an exact rational.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = || Error::NonRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac_part);
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(Q::new(num, den));
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(num))
}

/// `"p/q"` or `"p"` for integers.
pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering with a fixed number of significant digits (no exponent).
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{:.*}", decimals, v)
}
