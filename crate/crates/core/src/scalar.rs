//! Scalar abstraction: all numerics are generic over the real floating-point
//! type, with complex values built on top via [`num_complex::Complex`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type underlying every matrix, state, and spectrum.
///
/// Implemented for `f32` and `f64`; everything downstream is written against
/// this trait so the whole stack can be instantiated at either precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Scale an `f64`-calibrated tolerance to this type's precision.
    ///
    /// Tolerances throughout the crate are quoted for `f64`; for another
    /// scalar the same tolerance is re-expressed as the equivalent multiple
    /// of the machine epsilon.
    fn tol(f64_tol: f64) -> Self {
        let mult = f64_tol / f64::EPSILON;
        Self::epsilon() * Self::from_f64(mult).expect("tolerance multiplier representable")
    }

    /// Shorthand for lossless-enough conversion of literal constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`] base type.
pub type C<T> = Complex<T>;

/// `i` as a complex constant.
pub fn im<T: Real>() -> C<T> {
    C::new(T::zero(), T::one())
}

/// Real number lifted to the complex plane.
pub fn re<T: Real>(x: T) -> C<T> {
    C::new(x, T::zero())
}
