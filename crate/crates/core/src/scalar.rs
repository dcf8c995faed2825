//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point type the crate is generic over (`f32` or `f64`).
///
/// All thresholds in the crate are written as `f64` literals and converted
/// through [`Real::tol`], which floors them at a small multiple of the type's
/// machine epsilon. For `f64` every threshold is used verbatim.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an `f64` tolerance into this type, never below `64·ε`.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(x).max(floor)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_are_verbatim_for_f64() {
        assert_eq!(f64::tol(1e-10), 1e-10);
        assert_eq!(f64::tol(1e-12), 1e-12);
    }

    #[test]
    fn tolerances_are_floored_for_f32() {
        assert!(f32::tol(1e-12) > 1e-6);
        assert_eq!(f32::tol(1e-3), 1e-3);
    }
}
