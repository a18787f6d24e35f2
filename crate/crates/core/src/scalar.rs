//! Scalars that forms can be evaluated over.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

/// A commutative ring into which integer coefficients embed.
pub trait Scalar: Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn from_integer(v: &BigInt) -> Self;
}

impl Scalar for BigInt {
    fn from_integer(v: &BigInt) -> Self {
        v.clone()
    }
}

impl Scalar for BigRational {
    fn from_integer(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

impl Scalar for i128 {
    fn from_integer(v: &BigInt) -> Self {
        v.to_i128().expect("coefficient fits in i128")
    }
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_integer(v: &BigInt) -> Self {
                v.to_f64().map(|x| x as $t).unwrap_or(<$t>::NAN)
            }
        }
    )*};
}

float_scalar!(f32, f64);

impl<F: Float + Scalar> Scalar for Complex<F> {
    fn from_integer(v: &BigInt) -> Self {
        Complex::new(F::from_integer(v), F::zero())
    }
}
