//! Common ring interface for the scalar types the assembly runs over:
//! exact rationals, quadratic-field elements, rational intervals and `f64`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::exact::{rational_to_f64, QuadExt, RatInterval, Rational};

pub trait Scalar:
    Clone + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    fn zero_value() -> Self {
        Self::from_rational(&Rational::zero())
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }

    /// Multiplication by an exact rational constant.
    fn scale(&self, k: &Rational) -> Self {
        self.clone() * Self::from_rational(k)
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::from_i64(1);
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn scale(&self, k: &Rational) -> Self {
        self * k
    }
}

impl Scalar for QuadExt {
    fn from_rational(r: &Rational) -> Self {
        QuadExt::rational(r.clone())
    }
}

impl Scalar for RatInterval {
    fn from_rational(r: &Rational) -> Self {
        RatInterval::point(r.clone())
    }

    fn scale(&self, k: &Rational) -> Self {
        RatInterval::scale(self, k)
    }

    fn powi(&self, k: u32) -> Self {
        RatInterval::powi(self, k)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn zero_value() -> Self {
        0.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn powi(&self, k: u32) -> Self {
        f64::powi(*self, k as i32)
    }
}
