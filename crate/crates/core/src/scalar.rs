//! Scalar abstraction over the floating-point type used by the solver kernels.
//!
//! All core math is generic over [`Scalar`]; `f32`/`f64` get their
//! implementations from `num_traits::Float`, and [`crate::dual::Dual`] adds a
//! forward-mode derivative payload behind the same interface.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    fn from_f64(v: f64) -> Self;
    /// Value part as `f64` (derivative payloads are dropped).
    fn value(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn max(self, other: Self) -> Self;
    fn min(self, other: Self) -> Self;
    fn is_finite(self) -> bool;

    #[inline]
    fn two() -> Self {
        Self::from_f64(2.0)
    }
    #[inline]
    fn half() -> Self {
        Self::from_f64(0.5)
    }
}

macro_rules! impl_scalar_for_float {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn from_f64(v: f64) -> Self {
                v as $t
            }
            #[inline]
            fn value(self) -> f64 {
                self as f64
            }
            #[inline]
            fn abs(self) -> Self {
                num_traits::Float::abs(self)
            }
            #[inline]
            fn sqrt(self) -> Self {
                num_traits::Float::sqrt(self)
            }
            #[inline]
            fn exp(self) -> Self {
                num_traits::Float::exp(self)
            }
            #[inline]
            fn ln(self) -> Self {
                num_traits::Float::ln(self)
            }
            #[inline]
            fn powf(self, e: Self) -> Self {
                num_traits::Float::powf(self, e)
            }
            #[inline]
            fn max(self, other: Self) -> Self {
                num_traits::Float::max(self, other)
            }
            #[inline]
            fn min(self, other: Self) -> Self {
                num_traits::Float::min(self, other)
            }
            #[inline]
            fn is_finite(self) -> bool {
                num_traits::Float::is_finite(self)
            }
        }
    };
}

impl_scalar_for_float!(f32);
impl_scalar_for_float!(f64);

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_roundtrip<T: Scalar>() -> f64 {
        let x = T::from_f64(2.0);
        (x.sqrt() * x.sqrt()).value()
    }

    #[test]
    fn works_for_both_widths() {
        assert!((generic_roundtrip::<f64>() - 2.0).abs() < 1e-15);
        assert!((generic_roundtrip::<f32>() - 2.0).abs() < 1e-6);
    }
}
