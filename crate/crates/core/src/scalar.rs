use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the geometric and spectral routines are generic over.
///
/// Implemented for `f32` and `f64`. Experiments and the CLI run in `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; used for literals and PRNG output.
    fn of(x: f64) -> Self;

    fn of_usize(n: usize) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        n as f64
    }
}

impl Scalar for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        n as f32
    }
}
