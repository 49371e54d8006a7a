//! Scalar abstraction shared by the closed-form models.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type used by the radio, contention and market formulas.
///
/// Implemented for `f32` and `f64`. The event engine itself always runs on
/// `f64` seconds; the formulas are generic so they can be evaluated and
/// cross-checked at either precision.
pub trait Scalar:
    'static
    + Send
    + Sync
    + Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Default
    + Sum
    + Debug
    + Display
{
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("count representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts decibels to a linear power ratio.
#[inline]
pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::of(10.0).powf(db / T::of(10.0))
}

/// Converts a linear power ratio to decibels.
#[inline]
pub fn linear_to_db<T: Scalar>(lin: T) -> T {
    T::of(10.0) * lin.log10()
}

/// Converts dBm to milliwatts.
#[inline]
pub fn dbm_to_mw<T: Scalar>(dbm: T) -> T {
    db_to_linear(dbm)
}
