//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All of the dynamics is written against [`Real`], so the same code runs in
//! `f32` and `f64`. Tolerances live on the trait because a residual threshold
//! that is sensible for `f64` is meaningless for `f32`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar used by the correspondence machinery.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative residual accepted when checking `(w - c)^q = z^p`.
    const RESIDUAL_TOL: f64;
    /// Absolute tolerance for bracketed root finding on the real line.
    const ROOT_TOL: f64;
    /// Step tolerance for Newton iterations on cycles.
    const NEWTON_TOL: f64;
    /// Distance under which two cycles or images are considered the same.
    const DEDUP_TOL: f64;
    /// Distance to 0 under which an orbit is considered to hit the branch point.
    const COLLAPSE_TOL: f64;

    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const RESIDUAL_TOL: f64 = 1e-10;
    const ROOT_TOL: f64 = 1e-12;
    const NEWTON_TOL: f64 = 1e-12;
    const DEDUP_TOL: f64 = 1e-8;
    const COLLAPSE_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const RESIDUAL_TOL: f64 = 1e-4;
    const ROOT_TOL: f64 = 1e-6;
    const NEWTON_TOL: f64 = 1e-5;
    const DEDUP_TOL: f64 = 1e-3;
    const COLLAPSE_TOL: f64 = 1e-4;
}

/// `exp(i t)` as a complex number.
#[inline]
pub fn cis<T: Real>(t: T) -> Complex<T> {
    Complex::new(t.cos(), t.sin())
}

/// Converts a complex number to `(re, im)` in `f64`.
#[inline]
pub fn to_pair<T: Real>(z: Complex<T>) -> (f64, f64) {
    (z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// Formats a float with 17 significant digits in scientific notation.
///
/// The output is a valid JSON and CSV number for finite inputs.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
