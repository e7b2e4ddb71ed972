//! Scalar abstractions.
//!
//! Matrix arithmetic only needs a field ([`Field`]); anything that touches the
//! spectrum (eigenvalues, logarithms, fractional powers) needs a real floating
//! point type ([`Real`]). Exact rational arithmetic ([`BigRational`]) is a
//! `Field`, which is enough for the Taylor-coefficient recursion.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Ordered field usable as the real part of matrix entries.
pub trait Field: Num + Clone + PartialOrd + Neg<Output = Self> + Debug + Send + Sync + 'static {
    /// Exact (for rationals) or correctly rounded (for floats) value of `numer / denom`.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Lossy conversion used for reporting and tolerance checks.
    fn to_f64_lossy(&self) -> f64;
}

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Field + Float + FloatConst + FromPrimitive + Copy + Display + LowerExp + Sum + Default
{
    /// Converts a literal. Panics only if the literal is unrepresentable, which
    /// does not happen for the finite constants used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// A tolerance of `x`, floored at a small multiple of machine epsilon so
    /// that `f64`-calibrated defaults stay meaningful in lower precision.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Field for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Field for f32 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        (numer as f64 / denom as f64) as f32
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

impl Real for f64 {}
impl Real for f32 {}

impl Field for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(f64::from_ratio(1, 4), 0.25);
        let r = BigRational::from_ratio(-2, 6);
        assert_eq!(r, BigRational::new((-1).into(), 3.into()));
        assert!((r.to_f64_lossy() + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tolerance_floor() {
        assert_eq!(f64::tol(1e-12), 1e-12);
        assert!(f32::tol(1e-12) > 1e-12);
    }
}
