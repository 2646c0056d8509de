//! Scalar abstraction: every physical quantity in the simulator is generic
//! over a floating-point type implementing [`Real`].
//!
//! Random draws are always made in `f64` and converted, so `Real` carries no
//! distribution bounds and `f32` instantiations stay cheap to write.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` constant into the scalar type.
#[inline]
pub fn real<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("constant representable in scalar type")
}

/// Speed of light in vacuum, m/s.
pub fn speed_of_light<F: Real>() -> F {
    real(299_792_458.0)
}

/// Boltzmann constant, J/K.
pub fn boltzmann<F: Real>() -> F {
    real(1.380_649e-23)
}
