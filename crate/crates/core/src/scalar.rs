//! Scalar abstractions.
//!
//! Floating point code is written against [`Scalar`] (implemented for `f32` and
//! `f64`). Exact coefficient algebra (stability polynomials, sign conditions)
//! is written against [`Field`], which is also satisfied by
//! [`num_rational::Ratio`] so identities can be checked without rounding.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign};

/// Real floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot hold it,
    /// which never happens for the finite literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Relative tolerance `x`, raised to a small multiple of machine epsilon
    /// so that thresholds calibrated for `f64` remain meaningful for `f32`.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer fits in a float")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// A commutative field with the operations needed for polynomial and
/// rational-function algebra.
pub trait Field: Num + Clone + Debug + FromPrimitive + std::ops::Neg<Output = Self> {
    /// Integer constant.
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("small integer constant")
    }

    /// The ratio `n / d` of two integer constants.
    #[inline]
    fn frac(n: i64, d: i64) -> Self {
        Self::int(n) / Self::int(d)
    }
}

impl<T> Field for T where T: Num + Clone + Debug + FromPrimitive + std::ops::Neg<Output = T> {}
