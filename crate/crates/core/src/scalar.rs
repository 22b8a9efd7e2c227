//! The scalar abstraction shared by every numerical kernel.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

use crate::dd::Dd;

/// Real scalar the kernels are generic over: `f32`, `f64` or [`Dd`].
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Short name used in reports.
    const NAME: &'static str;

    fn from_real(x: f64) -> Self;

    fn as_f64(self) -> f64;

    fn of_usize(n: usize) -> Self {
        Self::from_real(n as f64)
    }
}

impl Real for f32 {
    const NAME: &'static str = "f32";
    fn from_real(x: f64) -> Self {
        x as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    const NAME: &'static str = "f64";
    fn from_real(x: f64) -> Self {
        x
    }
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for Dd {
    const NAME: &'static str = "double-double";
    fn from_real(x: f64) -> Self {
        Dd::new(x)
    }
    fn as_f64(self) -> f64 {
        self.hi() + self.lo()
    }
}

/// Shorthand for `T::from_real`.
#[inline]
pub fn r<T: Real>(x: f64) -> T {
    T::from_real(x)
}

pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_real(re), T::from_real(im))
}

pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_real(z.re), T::from_real(z.im))
}

/// `exp(z)` without going through polar form, so `Dd` keeps full accuracy.
#[inline]
pub fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Complex::new(m * c, m * s)
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// Modulus via `hypot`.
#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// Principal square root; branch cut on the negative real axis.
pub fn csqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let zero = T::zero();
    let half = r::<T>(0.5);
    if z.re == zero && z.im == zero {
        return Complex::new(zero, zero);
    }
    let m = cabs(z);
    if z.re >= zero {
        let s = ((m + z.re) * half).sqrt();
        Complex::new(s, z.im / (s + s))
    } else {
        let s = ((m - z.re) * half).sqrt();
        let s = if z.im < zero { -s } else { s };
        Complex::new(z.im / (s + s), s)
    }
}
