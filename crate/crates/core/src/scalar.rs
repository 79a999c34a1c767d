//! The integer scalar abstraction shared by the generic parts of the crate.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

/// An exact signed integer type: `i64`, `i128` or [`BigInt`].
///
/// Fixed-width instantiations are the caller's promise that intermediate
/// values fit; the arbitrary precision instantiation has no such limit.
pub trait Int:
    Integer
    + NumAssign
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + ToBigInt
    + Send
    + Sync
    + 'static
{
    fn from_u64_exact(v: u64) -> Self {
        Self::from_u64(v).expect("value does not fit the integer type")
    }

    fn to_big(&self) -> BigInt {
        self.to_bigint().expect("integer always converts to BigInt")
    }
}

impl<T> Int for T where
    T: Integer
        + NumAssign
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + ToBigInt
        + Send
        + Sync
        + 'static
{
}

/// `base^exp` by repeated squaring.
pub fn ipow<T: Int>(base: &T, exp: u64) -> T {
    let mut result = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    result
}
