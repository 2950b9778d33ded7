//! Numeric traits the walk and analysis code is generic over.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating point type: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Amplitude stored at one (site, coin) slot of a walk state.
///
/// Real amplitudes are exact whenever the coin and the input are real, which
/// is the case for every θ-parameterized input; complex amplitudes cover
/// arbitrary input states.
pub trait Amplitude:
    Copy
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Self::Real, Output = Self>
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
{
    type Real: Scalar;

    fn from_real(r: Self::Real) -> Self;

    /// Squared modulus.
    fn modulus_sqr(self) -> Self::Real;
}

impl<T: Scalar> Amplitude for T {
    type Real = T;

    fn from_real(r: T) -> T {
        r
    }

    fn modulus_sqr(self) -> T {
        self * self
    }
}

impl Amplitude for Complex<f32> {
    type Real = f32;

    fn from_real(r: f32) -> Self {
        Complex::new(r, 0.0)
    }

    fn modulus_sqr(self) -> f32 {
        self.norm_sqr()
    }
}

impl Amplitude for Complex<f64> {
    type Real = f64;

    fn from_real(r: f64) -> Self {
        Complex::new(r, 0.0)
    }

    fn modulus_sqr(self) -> f64 {
        self.norm_sqr()
    }
}
