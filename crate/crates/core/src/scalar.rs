//! The integer scalar every computation in this crate is generic over.
//!
//! All intersection numbers, Euler characteristics and cohomology dimensions
//! are exact integers. Quantities that the formulas write with a factor of
//! one half are carried with a doubled numerator and divided exactly through
//! [`exact_half`], so a parity slip surfaces as an error instead of a silently
//! truncated value.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Exact signed integer arithmetic: `i32`, `i64`, `i128` and `BigInt` all qualify.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Lifts a small literal. Panics only if the literal does not fit, which
    /// cannot happen for the constants used in this crate.
    fn lit(v: i64) -> Self {
        Self::from_i64(v).expect("literal out of range for scalar type")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Divides an even numerator by two, failing if it is odd.
pub fn exact_half<T: Scalar>(doubled: T, context: &'static str) -> Result<T> {
    let (q, r) = doubled.div_rem(&T::lit(2));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NonIntegral {
            context,
            numerator: doubled.to_string(),
        })
    }
}

pub(crate) fn min<T: Scalar>(x: T, y: T) -> T {
    if x <= y {
        x
    } else {
        y
    }
}

pub(crate) fn max<T: Scalar>(x: T, y: T) -> T {
    if x >= y {
        x
    } else {
        y
    }
}
