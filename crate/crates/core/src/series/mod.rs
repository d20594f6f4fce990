//! Invariant dimensions, Poincaré series and degree sequences for parameter systems.

mod dims;
mod ecriture;
mod filters;
mod rational;

use thiserror::Error;

pub use dims::{invariant_dimension, poincare_series, DimTable};
pub use ecriture::{default_seed, ecriture_minimale_search, Ecriture};
pub use filters::{check_sequence, min_degree_count, DegreeConstraint, SequenceCheck};
pub use rational::{reference_rational, to_rational, to_rational_exact, PoincareRational, RationalForm, Rejection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("table reaches degree {available}, need at least {needed}")]
    InsufficientDepth { needed: u32, available: u32 },
    #[error("degree sequences need at least one positive entry")]
    EmptySequence,
    #[error("degree 0 is not allowed in a degree sequence")]
    ZeroDegree,
    #[error("product of degrees overflows")]
    Overflow,
    #[error("no seed sequence known for n = {0}")]
    MissingSeed(u32),
    #[error("seed has {found} degrees, expected {expected}")]
    SeedLength { expected: usize, found: usize },
    #[error("seed {0} is not an accepted rational form")]
    SeedRejected(String),
    #[error("order {0} is out of range")]
    BadOrder(u32),
}

/// A sorted multiset of positive degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct DegreeSequence(Vec<u32>);

impl DegreeSequence {
    pub fn new(mut degrees: Vec<u32>) -> Result<Self, SeriesError> {
        if degrees.is_empty() {
            return Err(SeriesError::EmptySequence);
        }
        if degrees.contains(&0) {
            return Err(SeriesError::ZeroDegree);
        }
        degrees.sort_unstable();
        let s = DegreeSequence(degrees);
        s.checked_product().ok_or(SeriesError::Overflow)?;
        Ok(s)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_entry(&self) -> u32 {
        self.0[0]
    }

    pub fn max_entry(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn product(&self) -> u128 {
        self.checked_product().expect("checked at construction")
    }

    fn checked_product(&self) -> Option<u128> {
        self.0.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }
}

impl std::fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for DegreeSequence {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let degrees = trimmed
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| SeriesError::EmptySequence))
            .collect::<Result<Vec<_>, _>>()?;
        DegreeSequence::new(degrees)
    }
}
