//! Numeric traits shared by the interval-map, cycle and transfer-matrix code.
//!
//! [`Scalar`] is an ordered field that may be exact (`BigRational`) or
//! floating (`f32`, `f64`). [`Real`] is the floating subset used where
//! logarithms and exponentials are needed.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Ordered field with an equality test at the resolution of the type.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Whether arithmetic is exact.
    const EXACT: bool;

    /// Absolute tolerance used by [`Scalar::same`]; zero for exact types.
    fn tolerance() -> f64;

    fn ratio(num: i64, den: i64) -> Self;

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits every scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Equal up to the type's tolerance.
    fn same(&self, other: &Self) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64_lossy() - other.to_f64_lossy()).abs() <= Self::tolerance()
        }
    }

    /// Close enough to be suspicious but not within tolerance. Always false
    /// for exact types.
    fn ambiguous(&self, other: &Self) -> bool {
        if Self::EXACT {
            return false;
        }
        let d = (self.to_f64_lossy() - other.to_f64_lossy()).abs();
        d > Self::tolerance() && d < 1e3 * Self::tolerance()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn tolerance() -> f64 {
        1e-12
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn tolerance() -> f64 {
        1e-5
    }
    fn ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn tolerance() -> f64 {
        0.0
    }
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_usize_lossy(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Floating scalar with transcendental functions.
pub trait Real: Scalar + Float + Sum {}

impl Real for f32 {}
impl Real for f64 {}

/// Parse a decimal or fraction literal (`0.3`, `-2`, `9/5`, `1e-3`) exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer = BigInt::parse_bytes(if all.is_empty() { b"0" } else { all.as_bytes() }, 10)?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}
