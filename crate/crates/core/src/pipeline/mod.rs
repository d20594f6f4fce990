//! Basic-invariant discovery and parameter-system certification by
//! evaluating invariants at random points over `F_p`.
//!
//! Everything here is Monte Carlo linear algebra: an invariant is known only
//! through its values at a seeded sequence of random forms, and spans are
//! measured by modular ranks of evaluation matrices. The point sequence is
//! prefix-stable, so a computation that needs more points simply extends
//! the values it already has.

mod basis;
mod candidates;
mod hsop;
mod products;
mod session;

use std::path::PathBuf;

use thiserror::Error;

use crate::forms::FormError;
use crate::modlinalg::LinalgError;
use crate::series::SeriesError;

pub use basis::{compute_dm, find_basic_invariants, BasisRecord, DmEntry, DmOutcome, DmTable};
pub use candidates::{generate_candidate, CandidateGenerator};
pub use hsop::{
    certify_hsop, ideal_membership_dim, jacobian_rank, vanish_on_nullcone_sample, HsopReport, MembershipResult,
    NullconeSample, Verdict,
};
pub use products::{product_monomials, spanning_products};
pub use session::{evaluation_matrix, Session};

/// Environment variable naming a directory for persisted invariant values.
pub const CACHE_ENV: &str = "BINVAR_CACHE_DIR";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("prime {prime} must be an odd prime above {bound}")]
    BadPrime { prime: u32, bound: u32 },
    #[error("`{0}` is not an invariant")]
    NotInvariant(String),
    #[error("no invariant of degree {degree} is reachable by transvectant trees")]
    Unreachable { degree: u32 },
    #[error("degree {degree}: rank {achieved} of {dim} after the candidate budget")]
    Inconclusive { degree: u32, dim: usize, achieved: usize },
    #[error("degree {degree}: products of the basis reach rank {achieved} of {dim}")]
    BasisIncomplete { degree: u32, dim: usize, achieved: usize },
    #[error("dimension of degree {0} does not fit in memory")]
    TooLarge(u32),
    #[error("cache: {0}")]
    Cache(#[from] std::io::Error),
}

/// Knobs shared by all pipeline computations. The seed determines every
/// random choice.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub prime: u32,
    pub seed: u64,
    /// Length of the fingerprint stored with each basis record.
    pub fingerprint_points: usize,
    pub margin_min: usize,
    pub margin_percent: usize,
    /// Candidate draws allowed per missing dimension, on top of a fixed
    /// allowance.
    pub candidates_per_dim: usize,
    /// Covariants kept per degree in the candidate pool.
    pub pool_width: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            prime: crate::algebra::DEFAULT_PRIME,
            seed: 1,
            fingerprint_points: 16,
            margin_min: 10,
            margin_percent: 5,
            candidates_per_dim: 40,
            pool_width: 40,
            cache_dir: None,
        }
    }
}

impl PipelineConfig {
    pub fn with_seed(seed: u64) -> Self {
        PipelineConfig { seed, ..Self::default() }
    }

    /// Extra evaluation points beyond `dim`: `max(margin_min, margin_percent% of dim)`.
    pub fn margin(&self, dim: usize) -> usize {
        self.margin_min.max(dim * self.margin_percent / 100)
    }

    /// Reads the cache directory from [`CACHE_ENV`] when it is set.
    pub fn cache_from_env(mut self) -> Self {
        if let Some(dir) = std::env::var_os(CACHE_ENV) {
            self.cache_dir = Some(PathBuf::from(dir));
        }
        self
    }
}

pub(crate) fn dim_usize(n: u32, m: u32) -> Result<usize, PipelineError> {
    use num_traits::ToPrimitive;
    crate::series::invariant_dimension(n, m).to_usize().filter(|d| *d < 1 << 24).ok_or(PipelineError::TooLarge(m))
}

/// Mixes a seed with a stream label into an independent seed.
pub(crate) fn derive_seed(seed: u64, label: &[u64]) -> u64 {
    let mut h = seed ^ 0x6a09_e667_f3bc_c908;
    for &v in label {
        h = splitmix(h ^ v.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Size of a parameter system for forms of order `n`: `n - 2` from the cubic
/// on. A linear form has no invariants, a constant or quadratic has one.
pub fn krull_dimension(n: u32) -> usize {
    match n {
        1 => 0,
        0 | 2 => 1,
        _ => n as usize - 2,
    }
}
