//! Scalar abstraction for the numerical kernels.
//!
//! Everything downstream is generic over [`Real`]; `f64` is the production
//! choice (the default tolerances assume it), `f32` compiles and is useful
//! for quick sweeps at relaxed tolerances.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the geometry engine.
pub trait Real: Float + FromPrimitive + NumAssign + Debug + Display + Default + 'static {
    /// Lift an `f64` literal into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Widen to `f64` (lossless for f32/f64).
    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `max(|a|, |b|, ...)` style scale for relative comparisons.
pub fn scale1<S: Real>(x: S) -> S {
    S::one() + x.abs()
}
