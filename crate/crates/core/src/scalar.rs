//! Scalar traits the exact algebra is generic over.
//!
//! Integer matrices and their normal forms need a Euclidean ring with a
//! sign, which [`Scalar`] collects. Polynomials only need ring operations,
//! so [`Coefficient`] is weaker and also admits rationals.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// An exact integer type: `i64`, `i128` or [`num_bigint::BigInt`].
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("value fits the scalar type")
    }

    fn from_i64_exact(n: i64) -> Self {
        Self::from_i64(n).expect("value fits the scalar type")
    }

    /// Nonnegative gcd with the convention `gcd(0, n) = |n|`.
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Ring elements usable as polynomial coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + Debug + Zero + One + Neg<Output = T> + Add<Output = T> + Sub<Output = T> + Mul<Output = T>
{
}

/// Least common multiple, nonnegative, with `lcm(0, n) = 0`.
pub fn lcm<T: Scalar>(a: &T, b: &T) -> T {
    Integer::lcm(a, b)
}
