//! Floating-point abstraction shared by the one-dimensional stack.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar usable by the 1D modules (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` literal. Panics never happen for finite inputs.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lossy conversion to `f64`, used for reporting and diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Principal square root normalised so that `Re ≥ 0`, and `Im ≥ 0` on the cut.
pub fn principal_sqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let w = z.sqrt();
    if w.re < T::zero() || (w.re == T::zero() && w.im < T::zero()) {
        -w
    } else {
        w
    }
}

/// Reduce `x` modulo `period` into `[-period/2, period/2)`.
pub fn fold_symmetric<T: Real>(x: T, period: T) -> T {
    let half = period / T::lit(2.0);
    let mut y = x - period * ((x + half) / period).floor();
    // floor can land exactly on +half after rounding
    if y >= half {
        y = y - period;
    }
    if y < -half {
        y = y + period;
    }
    y
}

/// Distance between `a` and `b` on the circle of circumference `period`.
pub fn circular_distance<T: Real>(a: T, b: T, period: T) -> T {
    fold_symmetric(a - b, period).abs()
}
