//! Numeric traits the game and dynamics code is generic over.
//!
//! [`Scalar`] is a field: payoff matrices, average payoffs, selection
//! gradients and the closed-form rest points only need `+ - * /`, so they
//! run unchanged on `f32`, `f64` or an exact rational. [`Real`] adds the
//! transcendental operations needed by integration and the Fermi rule.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A field element usable as a payoff: `f32`, `f64`, `Rational64`, ...
pub trait Scalar:
    Num
    + Neg<Output = Self>
    + Copy
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy view used only for tolerance checks and diagnostics.
    fn approx(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(self) -> bool {
        self.approx().is_finite()
    }
}

impl<T> Scalar for T where
    T: Num
        + Neg<Output = T>
        + Copy
        + PartialOrd
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Floating point scalar: f32 or f64.
pub trait Real: Scalar + Float {
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("literal representable")
    }
}

impl<T> Real for T where T: Scalar + Float {}
