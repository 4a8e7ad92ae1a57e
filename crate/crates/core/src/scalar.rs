//! Scalar abstraction for the numeric core.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the algorithms are generic over: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every literal in this crate is representable in f32.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Vacuum permeability, 4π×10⁻⁷ H/m.
#[inline]
pub fn mu0<T: Real>() -> T {
    T::lit(4.0e-7) * T::PI()
}

/// μ0 / 2π, exactly 2×10⁻⁷.
#[inline]
pub fn mu0_over_2pi<T: Real>() -> T {
    T::lit(2.0e-7)
}
