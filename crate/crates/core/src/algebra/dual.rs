use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::{AlgebraError, Scalar};

/// `re + eps·ε` with `ε² = 0`.
///
/// Evaluating a polynomial at `a + ε` yields the value and the derivative
/// in one pass, which is how gradients of invariants are computed.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub eps: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(re: S, eps: S) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: S) -> Self {
        let eps = re.zero_like();
        Dual { re, eps }
    }

    /// `re + ε`.
    pub fn variable(re: S) -> Self {
        let eps = re.one_like();
        Dual { re, eps }
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual { re: self.re + rhs.re, eps: self.eps + rhs.eps }
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual { re: self.re - rhs.re, eps: self.eps - rhs.eps }
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = self.re.clone() * rhs.eps + self.eps * rhs.re.clone();
        Dual { re: self.re * rhs.re, eps }
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { re: -self.re, eps: -self.eps }
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    fn zero_like(&self) -> Self {
        Dual::constant(self.re.zero_like())
    }

    fn one_like(&self) -> Self {
        Dual::constant(self.re.one_like())
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Dual::constant(self.re.from_i64_like(v))
    }

    fn from_i128_like(&self, v: i128) -> Self {
        Dual::constant(self.re.from_i128_like(v))
    }

    fn from_ratio_like(&self, num: &BigInt, den: &BigInt) -> Result<Self, AlgebraError> {
        Ok(Dual::constant(self.re.from_ratio_like(num, den)?))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.re.same_ring(&other.re)
    }
}
