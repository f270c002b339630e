//! The scalar abstraction shared by the apartment geometry.
//!
//! Everything combinatorial is computed over exact rationals. The same
//! geometric routines (charts, the He-Nie function, its gradient) are also
//! instantiated over `f64` so that finite-difference and integrator checks can
//! run against the exact data.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed, ToPrimitive};

/// A field element usable by the linear algebra in [`crate::linalg`].
pub trait Scalar:
    Num + Clone + Debug + Display + PartialOrd + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` for exact types; equality tests are only meaningful then.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Zero test: exact for rationals, a relative epsilon for floats.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }
    fn from_rational(r: &BigRational) -> Self {
        let n = r.numer().to_i64().expect("numerator overflows i64");
        let d = r.denom().to_i64().expect("denominator overflows i64");
        Rational64::new(n, d)
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn from_rational(r: &BigRational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn abs_val(&self) -> Self {
                <$t>::abs(*self)
            }
            fn is_negligible(&self) -> bool {
                <$t>::abs(*self) < $eps
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-6);

/// Exact rational from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_agree() {
        let r = ratio(7, 10);
        assert_eq!(<f64 as Scalar>::from_rational(&r), 0.7);
        assert_eq!(<Rational64 as Scalar>::from_rational(&r), Rational64::new(7, 10));
        assert_eq!(Scalar::to_f64(&r), 0.7);
        const { assert!(BigRational::EXACT && !f64::EXACT) };
    }

    #[test]
    fn float_negligible_uses_epsilon() {
        assert!(1e-14f64.is_negligible());
        assert!(!ratio(1, 1_000_000_000).is_negligible());
    }
}
