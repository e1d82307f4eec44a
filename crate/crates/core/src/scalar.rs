//! Scalar abstraction for the numeric core.
//!
//! All analysis math is generic over a floating-point scalar so the same
//! code runs in `f32` or `f64`. The crate root exposes `f64` aliases for
//! every analysis type; those are what the I/O layer and CLI use.

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used throughout the analysis core: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for constants baked into formulas.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 constant must convert")
    }

    /// Conversion from a count; counts in this crate stay far below 2^53.
    fn from_count(value: usize) -> Self {
        Self::from_usize(value).expect("count must convert to scalar")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
}
