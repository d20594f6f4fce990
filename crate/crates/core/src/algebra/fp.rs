use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, RngCore};

use super::{AlgebraError, RingContext, Scalar};

pub const DEFAULT_PRIME: u32 = 32003;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of the prime field `F_p`, always fully reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: i64, modulus: u32) -> Self {
        let m = modulus as i64;
        Fp { value: value.rem_euclid(m) as u32, modulus }
    }

    /// Builds from a value already known to lie in `[0, modulus)`.
    #[inline]
    pub fn from_reduced(value: u32, modulus: u32) -> Self {
        debug_assert!(value < modulus);
        Fp { value, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn inverse(self) -> Option<Fp> {
        if self.value == 0 {
            return None;
        }
        let (mut a, mut b) = (self.value as i64, self.modulus as i64);
        let (mut x0, mut x1) = (1i64, 0i64);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        debug_assert_eq!(a, 1);
        Some(Fp::new(x0, self.modulus))
    }

    pub fn from_bigint(v: &BigInt, modulus: u32) -> Self {
        let r = v.mod_floor(&BigInt::from(modulus));
        Fp { value: r.to_u32().expect("reduced value fits"), modulus }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        let s = self.value as u64 + rhs.value as u64;
        let m = self.modulus as u64;
        Fp { value: if s >= m { (s - m) as u32 } else { s as u32 }, modulus: self.modulus }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        Fp { value: v, modulus: self.modulus }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        let v = (self.value as u64 * rhs.value as u64) % self.modulus as u64;
        Fp { value: v as u32, modulus: self.modulus }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        let v = if self.value == 0 { 0 } else { self.modulus - self.value };
        Fp { value: v, modulus: self.modulus }
    }
}

impl Scalar for Fp {
    fn zero_like(&self) -> Self {
        Fp { value: 0, modulus: self.modulus }
    }

    fn one_like(&self) -> Self {
        Fp { value: 1, modulus: self.modulus }
    }

    fn from_i64_like(&self, v: i64) -> Self {
        Fp::new(v, self.modulus)
    }

    fn from_i128_like(&self, v: i128) -> Self {
        Fp { value: v.rem_euclid(self.modulus as i128) as u32, modulus: self.modulus }
    }

    fn from_ratio_like(&self, num: &BigInt, den: &BigInt) -> Result<Self, AlgebraError> {
        let d = Fp::from_bigint(den, self.modulus);
        let inv = d.inverse().ok_or_else(|| {
            AlgebraError::NotInvertible(format!("{} mod {}", den.abs(), self.modulus))
        })?;
        Ok(Fp::from_bigint(num, self.modulus) * inv)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_ring(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

/// The field `F_p` for an odd prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, AlgebraError> {
        if p % 2 == 0 || !is_prime(p as u64) {
            return Err(AlgebraError::NotAnOddPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp::new(v, self.p)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl RingContext for PrimeField {
    type Elem = Fp;

    fn from_i64(&self, v: i64) -> Fp {
        Fp::new(v, self.p)
    }

    fn random(&self, rng: &mut dyn RngCore) -> Fp {
        Fp::from_reduced(rng.gen_range(0..self.p), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        assert!(is_prime(32003));
        assert!(!is_prime(32001));
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(21).is_err());
        assert!(PrimeField::new(23).is_ok());
    }

    #[test]
    fn field_ops_match_bigint() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = DEFAULT_PRIME;
        let bp = BigInt::from(p);
        for _ in 0..1000 {
            let a: i64 = rng.gen_range(-1_000_000_000..1_000_000_000);
            let b: i64 = rng.gen_range(-1_000_000_000..1_000_000_000);
            let (fa, fb) = (Fp::new(a, p), Fp::new(b, p));
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            let lift = |x: BigInt| Fp::from_bigint(&x.mod_floor(&bp), p);
            assert_eq!(fa + fb, lift(&ba + &bb));
            assert_eq!(fa - fb, lift(&ba - &bb));
            assert_eq!(fa * fb, lift(&ba * &bb));
            assert_eq!(-fa, lift(-ba.clone()));
            if !fb.is_zero() {
                assert_eq!(fb * fb.inverse().unwrap(), fb.one_like());
            }
        }
    }

    #[test]
    fn ratio_embedding() {
        let one = Fp::new(1, 23);
        let half = one.from_ratio_like(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half * Fp::new(2, 23), one);
        assert!(one.from_ratio_like(&BigInt::from(1), &BigInt::from(46)).is_err());
    }
}
