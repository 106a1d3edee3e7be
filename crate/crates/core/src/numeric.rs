//! Scalar abstraction so the analytic machinery (h-table, brute-force
//! distributions, correction weights) runs both in `f64` and in exact
//! rational arithmetic on the same code path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Sub};

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Zero
    + One
{
    /// Exact value of `num / den`.
    fn ratio(num: u64, den: u64) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational out of f64 range")
    }
}
