//! Floating-point scalar abstraction.
//!
//! Everything that is inherently approximate (tail-bound exponentials,
//! amplitudes, bound formulas) is generic over [`Real`]; exact combinatorics
//! never goes through this trait.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` for constants and tolerances.
    fn from_f64_const(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }
}

impl Real for f32 {}
impl Real for f64 {}
