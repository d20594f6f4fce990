use num_bigint::{BigInt, BigUint};
use num_traits::{CheckedAdd, CheckedSub, One, ToPrimitive, Zero};
use rayon::prelude::*;

/// Coefficients up to `q^w` of the Gaussian binomial `[k+m, k]_q`, i.e. the
/// number of partitions of each weight into at most `k` parts of size at most `m`.
/// Returns `None` on overflow.
fn box_partitions<T>(k: u32, m: u32, w: usize) -> Option<Vec<T>>
where
    T: Clone + Zero + One + CheckedAdd + CheckedSub,
{
    let mut c = vec![T::zero(); w + 1];
    c[0] = T::one();
    for i in 1..=k as usize {
        let up = m as usize + i;
        for j in (up..=w).rev() {
            c[j] = c[j].checked_sub(&c[j - up])?;
        }
        for j in i..=w {
            c[j] = c[j].checked_add(&c[j - i])?;
        }
    }
    Some(c)
}

fn difference_at<T>(k: u32, m: u32, w: usize) -> Option<T>
where
    T: Clone + Zero + One + CheckedAdd + CheckedSub,
{
    let c = box_partitions::<T>(k, m, w)?;
    if w == 0 {
        return Some(c[0].clone());
    }
    c[w].checked_sub(&c[w - 1])
}

/// Dimension of the degree-`d` invariants of binary forms of order `n`,
/// by the Cayley–Sylvester count of partitions of `nd/2` in a `d × n` box.
pub fn invariant_dimension(n: u32, d: u32) -> BigUint {
    if (n as u64 * d as u64) % 2 == 1 {
        return BigUint::zero();
    }
    let w = (n as usize * d as usize) / 2;
    let (k, m) = (n.min(d), n.max(d));
    if let Some(v) = difference_at::<i128>(k, m, w) {
        return BigUint::try_from(v).expect("dimension is nonnegative");
    }
    let v = difference_at::<BigInt>(k, m, w).expect("bigint arithmetic does not overflow");
    v.to_biguint().expect("dimension is nonnegative")
}

/// Invariant dimensions of `V_n` by degree, from degree 0 up to a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    n: u32,
    dims: Vec<BigUint>,
}

impl DimTable {
    pub fn from_dims(n: u32, dims: Vec<BigUint>) -> Self {
        DimTable { n, dims }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn max_degree(&self) -> u32 {
        self.dims.len() as u32 - 1
    }

    pub fn dim(&self, d: u32) -> Option<&BigUint> {
        self.dims.get(d as usize)
    }

    /// Dimension as a machine integer, for degrees where it fits.
    pub fn dim_u64(&self, d: u32) -> Option<u64> {
        self.dim(d).and_then(ToPrimitive::to_u64)
    }

    pub fn dims(&self) -> &[BigUint] {
        &self.dims
    }

    /// Degrees in `1..=max_degree` carrying nonzero invariants.
    pub fn positive_degrees(&self) -> Vec<u32> {
        (1..=self.max_degree()).filter(|&d| !self.dims[d as usize].is_zero()).collect()
    }
}

pub fn poincare_series(n: u32, max_degree: u32) -> DimTable {
    let dims = (0..=max_degree).into_par_iter().map(|d| invariant_dimension(n, d)).collect();
    DimTable { n, dims }
}
