//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate is generic over a floating-point scalar so the
//! same algebra runs at `f32` or `f64`. Production paths use `f64`; the
//! `f32` instantiation exists for quick low-precision experiments.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable by the whole crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for literals and configuration values.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal converts to any Real")
    }

    /// Round-trip to `f64` (exact for `f64`, widening for `f32`).
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Scales an `f64`-calibrated tolerance to the precision of `T`.
///
/// Tolerances throughout the crate are stated for `f64` (roughly 100x the
/// round-off accumulated by chains of 2x2 products). At another precision
/// the same head-room is `tol * eps(T) / eps(f64)`.
pub fn scaled_tol<T: Real>(tol_f64: f64) -> T {
    T::epsilon() * T::of(tol_f64 / f64::EPSILON)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_tol_is_identity_at_f64() {
        let t: f64 = scaled_tol(1e-12);
        assert!((t - 1e-12).abs() < 1e-27);
    }

    #[test]
    fn scaled_tol_widens_at_f32() {
        let t: f32 = scaled_tol(1e-12);
        // f32 eps is ~5.4e8 times larger than f64 eps.
        assert!(t > 1e-5 && t < 1e-3);
    }
}
