//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Euclid, Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Tolerances in this crate are written as `f64` literals and lifted with
/// [`Scalar::lit`]; routines that need a tolerance below the type's
/// resolution use [`Scalar::tol`], which floors it at a small multiple of
/// machine epsilon.
pub trait Scalar:
    Float
    + Euclid
    + NumAssign
    + FloatConst
    + FromPrimitive
    + FromStr
    + Default
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
