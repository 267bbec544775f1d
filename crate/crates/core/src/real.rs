use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the numerical routines are generic over (`f32` or `f64`).
///
/// Accuracy targets quoted in the docs refer to `f64`; `f32` runs the same
/// algorithms with correspondingly looser results.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Volume of the unit ball in `d` dimensions, `π^{d/2} / Γ(d/2 + 1)`; `κ_0 = 1`.
pub fn unit_ball_volume<T: Real>(d: usize) -> T {
    // two-step recurrence κ_d = 2π/d · κ_{d-2}
    let two_pi = T::PI() + T::PI();
    let mut k = if d % 2 == 0 { T::one() } else { T::lit(2.0) };
    let mut m = if d % 2 == 0 { 0 } else { 1 };
    while m < d {
        m += 2;
        k = k * two_pi / T::from_usize_lossy(m);
    }
    k
}

/// Surface measure of the unit sphere `S^{d-1}`, `d κ_d` (2 for `d = 1`).
pub fn unit_sphere_area<T: Real>(d: usize) -> T {
    T::from_usize_lossy(d) * unit_ball_volume::<T>(d)
}
