//! Scalar rings and polynomial arithmetic.
//!
//! Every computation in the crate is generic over [`Scalar`]: exact
//! rationals for certification, prime-field elements for bulk evaluation,
//! dual numbers for gradients and sparse multivariate polynomials for
//! symbolic checks. Ring elements carry whatever context they need (the
//! modulus, the variable set), so a zero or one can always be produced
//! "like" an existing element.

mod dual;
mod fp;
mod multipoly;
mod rational;
mod unipoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use rand::RngCore;

pub use dual::Dual;
pub use fp::{is_prime, Fp, PrimeField, DEFAULT_PRIME};
pub use multipoly::{gcd_univariate, Monomial, MultiPoly, Vars};
pub use rational::{rational, Rationals};
pub use unipoly::UniPoly;

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("{0} is not invertible in this ring")]
    NotInvertible(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expected a univariate polynomial, got one in {0} variables")]
    NotUnivariate(usize),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// A commutative ring element.
///
/// Arithmetic between elements of different rings (two moduli, two variable
/// sets) is a logic error and panics in the operator impls; use
/// [`Scalar::same_ring`] to check beforehand where inputs are untrusted.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn from_i64_like(&self, v: i64) -> Self;

    /// The image of `num / den`; fails when `den` is not invertible.
    fn from_ratio_like(&self, num: &BigInt, den: &BigInt) -> Result<Self, AlgebraError>;

    /// Integer embedding; rings with a cheaper path than `BigInt` override it.
    fn from_i128_like(&self, v: i128) -> Self {
        self.from_ratio_like(&BigInt::from(v), &BigInt::from(1))
            .expect("1 is invertible")
    }

    fn is_zero(&self) -> bool;

    fn same_ring(&self, _other: &Self) -> bool {
        true
    }

    fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A ring that can manufacture elements from scratch, including random ones.
pub trait RingContext: Clone + Send + Sync {
    type Elem: Scalar;

    fn from_i64(&self, v: i64) -> Self::Elem;

    fn zero(&self) -> Self::Elem {
        self.from_i64(0)
    }

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    /// A random element; for infinite rings a small integer.
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
}
