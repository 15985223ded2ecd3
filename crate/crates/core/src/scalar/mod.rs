//! Scalar abstraction for the analytic side: every real-valued formula in
//! this crate is generic over [`Real`] and can be evaluated at double
//! precision (`f64`) or at extended precision ([`DoubleDouble`], ~106-bit
//! mantissa). The two instantiations back the precision-escalation policy
//! in [`crate::check`].

mod double_double;

pub use double_double::DoubleDouble;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Floating-point scalar with the operations the analytic formulas need.
pub trait Real:
    Copy
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Human-readable precision name used in reports.
    const NAME: &'static str;

    /// Unit roundoff (half ulp of 1.0), as an f64, for rounding-error estimates.
    const UNIT_ROUNDOFF: f64;

    fn from_f64(x: f64) -> Self;
    fn from_u64(x: u64) -> Self;
    fn to_f64(self) -> f64;

    fn pi() -> Self;
    fn ln_2() -> Self;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sinh(self) -> Self;

    /// Multiplies by 2^e exactly (no rounding while in range).
    fn ldexp(self, e: i32) -> Self;

    fn is_finite(self) -> bool;
}

macro_rules! impl_real_for_float {
    ($t:ty, $name:literal) => {
        impl Real for $t {
            const NAME: &'static str = $name;
            const UNIT_ROUNDOFF: f64 = <$t>::EPSILON as f64 / 2.0;

            #[inline]
            fn from_f64(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn from_u64(x: u64) -> Self {
                x as $t
            }

            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }

            #[inline]
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }

            #[inline]
            fn ln_2() -> Self {
                std::f64::consts::LN_2 as $t
            }

            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }

            #[inline]
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }

            #[inline]
            fn exp(self) -> Self {
                <$t>::exp(self)
            }

            #[inline]
            fn ln(self) -> Self {
                <$t>::ln(self)
            }

            #[inline]
            fn sinh(self) -> Self {
                <$t>::sinh(self)
            }

            #[inline]
            fn ldexp(self, e: i32) -> Self {
                self * (2.0 as $t).powi(e)
            }

            #[inline]
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
        }
    };
}

impl_real_for_float!(f64, "double");
impl_real_for_float!(f32, "single");

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_check<R: Real>() -> f64 {
        // (1 + 1/sqrt(8)) / (1 - 1/2)^2 = 5.41421356237309504880...
        let one = R::one();
        let half = R::from_f64(0.5);
        let v = (one + one / R::from_u64(8).sqrt()) / ((one - half) * (one - half));
        v.to_f64()
    }

    #[test]
    fn generic_formula_agrees_across_scalars() {
        let d = poly_check::<f64>();
        let x = poly_check::<DoubleDouble>();
        assert!((d - 5.414213562373095).abs() < 1e-15);
        assert!((x - d).abs() < 1e-15);
        let s = poly_check::<f32>();
        assert!((s - d).abs() < 1e-6);
    }

    #[test]
    fn ldexp_is_exact_scaling() {
        assert_eq!(1.5f64.ldexp(10), 1536.0);
        assert_eq!(1536.0f64.ldexp(-10), 1.5);
    }
}
