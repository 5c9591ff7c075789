//! Scalar abstraction and small dB/unit helpers.
//!
//! All of the toolkit's math is written against [`Real`], so the same
//! formulas run in `f32` or `f64`. The concrete type aliases at the crate
//! root (and the CLI) use `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lifts an `f64` literal into this scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Lossy conversion back to `f64`, mostly for formatting and file output.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts a power ratio in dB to a linear factor (or dBm to milliwatts).
pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// Converts a linear power factor to dB (or milliwatts to dBm).
pub fn linear_to_db<T: Real>(linear: T) -> T {
    T::lit(10.0) * linear.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        let x = 23.45_f64;
        assert!((linear_to_db(db_to_linear(x)) - x).abs() < 1e-12);
        let y = -71.0_f32;
        assert!((linear_to_db(db_to_linear(y)) - y).abs() < 1e-4);
    }

    #[test]
    fn db_reference_points() {
        assert!((db_to_linear(0.0_f64) - 1.0).abs() < 1e-15);
        assert!((db_to_linear(10.0_f64) - 10.0).abs() < 1e-12);
        assert!((linear_to_db(2.0_f64) - 3.010_299_956_639_812).abs() < 1e-12);
    }
}
