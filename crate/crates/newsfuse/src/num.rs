//! Scalar abstraction for the numeric core.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the whole crate is generic over.
///
/// Every public type defaults this parameter to `f64`, which is what the
/// CLI and the documented accuracy figures use. `f32` satisfies the trait
/// as well for callers that can live with its precision.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
pub(crate) fn c<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("f64 constant representable in scalar type")
}

/// Converts a count into the working scalar type.
pub(crate) fn cn<R: Real>(v: usize) -> R {
    R::from_usize(v).expect("count representable in scalar type")
}
