//! Scalar traits shared by every polynomial and matrix type in the crate.
//!
//! Everything above this module is written against [`Ring`] / [`Field`]
//! so the same code runs over exact rationals, the Laurent ground ring, and
//! machine or high-precision floats.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers.
pub type Rational = BigRational;

/// A commutative ring with owned arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(n: i64) -> Self;
}

/// A field: every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    /// Magnitude used for partial pivoting. Exact fields return `None`,
    /// in which case any nonzero pivot is acceptable.
    fn pivot_magnitude(&self) -> Option<f64> {
        None
    }
}

/// Rings whose elements can sometimes be divided exactly.
pub trait ExactDiv: Ring {
    /// Returns `Some(q)` with `q * d == self`, or `None` when no such `q`
    /// exists (or `d` is zero).
    fn exact_div(&self, d: &Self) -> Option<Self>;

    /// True if the element is invertible in the ring.
    fn is_unit(&self) -> bool;
}

impl Ring for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl Field for Rational {}

impl ExactDiv for Rational {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            None
        } else {
            Some(self / d)
        }
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Ring for $f {
            fn from_i64(n: i64) -> Self {
                n as $f
            }
        }

        impl Field for $f {
            fn pivot_magnitude(&self) -> Option<f64> {
                Some(self.abs() as f64)
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Ring for num_complex::Complex64 {
    fn from_i64(n: i64) -> Self {
        num_complex::Complex64::new(n as f64, 0.0)
    }
}

impl Field for num_complex::Complex64 {
    fn pivot_magnitude(&self) -> Option<f64> {
        Some(self.norm())
    }
}

/// `n` as an exact rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// `n / d` as an exact rational.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Best-effort conversion of a rational to `f64`.
pub fn rat_to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // both parts overflow f64; shift them down together
            let bits = x.numer().bits().max(x.denom().bits()) as i64 - 900;
            let shift = bits.max(0) as usize;
            let n = (x.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::MAX);
            let v = n / d;
            if x.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}
