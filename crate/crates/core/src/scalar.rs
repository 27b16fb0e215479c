//! Coefficient fields.
//!
//! Every algebraic type in this crate is generic over a [`Scalar`]. The
//! verification machinery is pinned to [`crate::Rational`] because its
//! checks are exact; `Rational64` and `f64` are supported for plain
//! arithmetic and experimentation.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

/// A field of coefficients.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(value: i64) -> Self;

    /// Parses `p`, `-p` or `p/q`.
    fn parse_scalar(text: &str) -> Option<Self>;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }
}

fn split_ratio(text: &str) -> Option<(&str, Option<&str>)> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    match text.split_once('/') {
        Some((p, q)) => Some((p.trim(), Some(q.trim()))),
        None => Some((text, None)),
    }
}

impl Scalar for BigRational {
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        let (p, q) = split_ratio(text)?;
        let numer: BigInt = p.parse().ok()?;
        let denom: BigInt = match q {
            Some(q) => q.parse().ok()?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return None;
        }
        Some(BigRational::new(numer, denom))
    }
}

impl Scalar for Rational64 {
    fn from_i64(value: i64) -> Self {
        Rational64::from_integer(value)
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        let (p, q) = split_ratio(text)?;
        let numer: i64 = p.parse().ok()?;
        let denom: i64 = match q {
            Some(q) => q.parse().ok()?,
            None => 1,
        };
        if denom == 0 {
            return None;
        }
        Some(Rational64::new(numer, denom))
    }
}

impl Scalar for f64 {
    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        let (p, q) = split_ratio(text)?;
        let numer: f64 = p.parse().ok()?;
        match q {
            Some(q) => {
                let denom: f64 = q.parse().ok()?;
                (denom != 0.0).then(|| numer / denom)
            }
            None => Some(numer),
        }
    }
}
