//! The scalar field abstraction.
//!
//! Everything in the crate is generic over [`Field`]. Exactness is only
//! guaranteed for exact implementors such as [`crate::Q`]; floating point
//! types satisfy the bounds but rank decisions on them are not reliable.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};

use crate::error::{Error, Result};

pub trait Field:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
}

impl<T> Field for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + PartialOrd
        + Num
        + Signed
        + FromPrimitive
        + Send
        + Sync
{
}

/// Embeds a small integer into the field.
pub fn int<F: Field>(x: i64) -> F {
    F::from_i64(x).expect("field contains the integers")
}

/// `(-1)^k`.
pub fn sign<F: Field>(k: usize) -> F {
    if k.is_multiple_of(2) {
        F::one()
    } else {
        -F::one()
    }
}

pub fn factorial<F: Field>(k: usize) -> F {
    (1..=k).fold(F::one(), |acc, i| acc * int::<F>(i as i64))
}

/// Parses `"p/q"` or `"p"` with decimal integers.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}
