use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use super::{AlgebraError, RingContext, Scalar};

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }

    fn one_like(&self) -> Self {
        BigRational::one()
    }

    fn from_i64_like(&self, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio_like(&self, num: &BigInt, den: &BigInt) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::NotInvertible("0".into()));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// The rationals; random elements are small integers in `[-bound, bound]`.
#[derive(Clone, Copy, Debug)]
pub struct Rationals {
    pub bound: i64,
}

impl Default for Rationals {
    fn default() -> Self {
        Rationals { bound: 5 }
    }
}

impl RingContext for Rationals {
    type Elem = BigRational;

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.gen_range(-self.bound..=self.bound))
    }
}
