//! Scalar abstractions.
//!
//! The simulator is generic over a floating-point [`Real`] (`f32` or `f64`);
//! the opportunity-cost model is generic over any ordered field-like
//! [`Scalar`], which includes exact rationals so that crossover points can be
//! solved without rounding.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Floating point type used for amplitudes: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
    /// Magnitude below which an amplitude is dropped from a sparse state.
    fn prune_tolerance() -> Self {
        Self::epsilon() * Self::from_f64(16.0).unwrap()
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Arithmetic used by the cost model.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    fn from_u64_exact(n: u64) -> Self {
        Self::from_u64(n).expect("integer fits in scalar")
    }

    /// Largest integer not above `self`, or `None` if unbounded or negative.
    fn floor_u64(self) -> Option<u64>;
}

impl Scalar for f64 {
    fn floor_u64(self) -> Option<u64> {
        if self.is_finite() && self >= 0.0 {
            self.floor().to_u64()
        } else {
            None
        }
    }
}

impl Scalar for f32 {
    fn floor_u64(self) -> Option<u64> {
        if self.is_finite() && self >= 0.0 {
            self.floor().to_u64()
        } else {
            None
        }
    }
}

impl Scalar for Ratio<i64> {
    fn floor_u64(self) -> Option<u64> {
        if *self.numer() < 0 {
            return None;
        }
        self.floor().to_integer().to_u64()
    }
}

impl Scalar for Ratio<i128> {
    fn floor_u64(self) -> Option<u64> {
        if *self.numer() < 0 {
            return None;
        }
        self.floor().to_integer().to_u64()
    }
}
