//! First-order dual numbers: forward-mode algorithmic differentiation as a
//! [`Scalar`] instance.
//!
//! `Dual { val, dot }` carries a value and the directional derivative of that
//! value along a chosen seed direction. Running the matrix assembly on dual
//! states yields the directional derivative of the assembled matrices with no
//! finite-difference step-size error.
//!
//! Comparison operators act on the value part only; the derivative payload is
//! inert for branching, which is the usual convention for AD scalars.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug)]
pub struct Dual<T> {
    pub val: T,
    pub dot: T,
}

impl<T: Scalar> Dual<T> {
    #[inline]
    pub fn new(val: T, dot: T) -> Self {
        Dual { val, dot }
    }

    /// A value with zero derivative.
    #[inline]
    pub fn constant(val: T) -> Self {
        Dual {
            val,
            dot: T::zero(),
        }
    }
}

impl<T: Scalar> PartialEq for Dual<T> {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.val == other.val
    }
}

impl<T: Scalar> PartialOrd for Dual<T> {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.val.partial_cmp(&other.val)
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.val + rhs.val, self.dot + rhs.dot)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.val - rhs.val, self.dot - rhs.dot)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(
            self.val * rhs.val,
            self.val * rhs.dot + self.dot * rhs.val,
        )
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q = self.val / rhs.val;
        Dual::new(q, (self.dot - q * rhs.dot) / rhs.val)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.val, -self.dot)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}
impl<T: Scalar> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}
impl<T: Scalar> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
impl<T: Scalar> DivAssign for Dual<T> {
    #[inline]
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl<T: Scalar> Zero for Dual<T> {
    #[inline]
    fn zero() -> Self {
        Dual::new(T::zero(), T::zero())
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.val.is_zero() && self.dot.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    #[inline]
    fn one() -> Self {
        Dual::new(T::one(), T::zero())
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    #[inline]
    fn from_f64(v: f64) -> Self {
        Dual::constant(T::from_f64(v))
    }
    #[inline]
    fn value(self) -> f64 {
        self.val.value()
    }
    #[inline]
    fn abs(self) -> Self {
        if self.val.value() < 0.0 {
            -self
        } else {
            self
        }
    }
    #[inline]
    fn sqrt(self) -> Self {
        let r = self.val.sqrt();
        Dual::new(r, self.dot / (T::two() * r))
    }
    #[inline]
    fn exp(self) -> Self {
        let e = self.val.exp();
        Dual::new(e, self.dot * e)
    }
    #[inline]
    fn ln(self) -> Self {
        Dual::new(self.val.ln(), self.dot / self.val)
    }
    fn powf(self, e: Self) -> Self {
        // d(b^e) = b^e * (e' ln b + e b'/b); valid on b > 0, which is the
        // only region the equation of state evaluates.
        let r = self.val.powf(e.val);
        let dot = r * (e.dot * self.val.ln() + e.val * self.dot / self.val);
        Dual::new(r, dot)
    }
    #[inline]
    fn max(self, other: Self) -> Self {
        if self.val >= other.val {
            self
        } else {
            other
        }
    }
    #[inline]
    fn min(self, other: Self) -> Self {
        if self.val <= other.val {
            self
        } else {
            other
        }
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.val.is_finite() && self.dot.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d<F: Fn(Dual<f64>) -> Dual<f64>>(f: F, x: f64) -> f64 {
        f(Dual::new(x, 1.0)).dot
    }

    fn fd<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
        let h = 1e-6;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn matches_finite_differences() {
        let cases: [(fn(Dual<f64>) -> Dual<f64>, fn(f64) -> f64, f64); 4] = [
            (|x| x * x * x, |x| x * x * x, 0.7),
            (|x| x.exp(), |x| x.exp(), -0.3),
            (|x| x.sqrt(), |x| x.sqrt(), 2.1),
            (|x| x.ln(), |x| x.ln(), 1.4),
        ];
        for (fdual, fplain, x) in cases {
            assert!((d(fdual, x) - fd(fplain, x)).abs() < 1e-8);
        }
    }

    #[test]
    fn powf_constant_exponent() {
        let e = Dual::constant(0.6);
        let x = Dual::new(1.0_f64, 1.0);
        let r = x.powf(e);
        assert!((r.val - 1.0).abs() < 1e-15);
        assert!((r.dot - 0.6).abs() < 1e-15);
    }

    #[test]
    fn quotient_rule() {
        let x = Dual::new(2.0_f64, 1.0);
        let r = Dual::constant(1.0) / x;
        assert!((r.dot - (-0.25)).abs() < 1e-15);
    }
}
