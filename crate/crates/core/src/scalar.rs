// SPDX-License-Identifier: Apache-2.0

//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_rational::{Ratio, Rational64};
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, Signed, ToPrimitive, Zero};

/// Real floating-point field used as the base of all complex matrices: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Signed
    + Debug
    + LowerExp
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `2π`.
    fn two_pi() -> Self {
        Self::PI() + Self::PI()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `2πi` as a complex scalar.
pub fn two_pi_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::two_pi())
}

pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// Field over which the lifting criterion is evaluated.
///
/// Floating types decide vanishing with an absolute threshold of `1e-12`;
/// rational types decide it exactly.
pub trait LiftScalar: Num + Clone + FromPrimitive + Debug {
    fn vanishes(&self) -> bool;
}

const LIFT_ZERO_TOL: f64 = 1e-12;

impl LiftScalar for f64 {
    fn vanishes(&self) -> bool {
        self.abs() <= LIFT_ZERO_TOL
    }
}

impl LiftScalar for f32 {
    fn vanishes(&self) -> bool {
        f64::from(self.abs()) <= LIFT_ZERO_TOL
    }
}

impl<T: Real> LiftScalar for Complex<T> {
    fn vanishes(&self) -> bool {
        self.norm().to_f64_lossy() <= LIFT_ZERO_TOL
    }
}

impl LiftScalar for Rational64 {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl LiftScalar for Complex<Ratio<i64>> {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}
