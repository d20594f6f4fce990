//! Dense linear algebra over `F_p`: rank, left nullspace and streamed echelon bases.

mod dump;
mod echelon;
mod matrix;

use thiserror::Error;

pub use echelon::{rank_streaming, EchelonBasis, StreamOutcome};
pub use matrix::ModMatrix;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("row has length {found}, expected {expected}")]
    RowLength { expected: usize, found: usize },
    #[error("{0} is not an odd prime below 2^31")]
    BadPrime(u64),
    #[error("malformed matrix dump: {0}")]
    BadDump(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let (mut b, mut e, mut r) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

pub(crate) fn check_prime(p: u64) -> Result<u32, LinalgError> {
    if p < 3 || p >= 1 << 31 || !crate::algebra::is_prime(p) {
        return Err(LinalgError::BadPrime(p));
    }
    Ok(p as u32)
}

/// How many products `< p^2` fit in a `u64` on top of a reduced value.
pub(crate) fn delay_budget(p: u32) -> usize {
    let sq = (p as u64 - 1) * (p as u64 - 1);
    ((u64::MAX - p as u64) / sq).min(1 << 20) as usize
}
