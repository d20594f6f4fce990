use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedSub, Signed, Zero};

use super::{poincare_series, DegreeSequence, DimTable, SeriesError};

/// `P(t) = a(t) / Π (1 - t^{d_i})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareRational {
    numerator: Vec<BigInt>,
    denominator: DegreeSequence,
}

impl PoincareRational {
    pub fn new(mut numerator: Vec<BigInt>, denominator: DegreeSequence) -> Self {
        while numerator.len() > 1 && numerator.last().is_some_and(Zero::is_zero) {
            numerator.pop();
        }
        if numerator.is_empty() {
            numerator.push(BigInt::zero());
        }
        PoincareRational { numerator, denominator }
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &DegreeSequence {
        &self.denominator
    }

    pub fn numerator_degree(&self) -> usize {
        self.numerator.len() - 1
    }

    /// `a(1)`, the sum of the numerator coefficients.
    pub fn numerator_at_one(&self) -> BigInt {
        self.numerator.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.numerator.iter().eq(self.numerator.iter().rev())
    }

    /// Power-series coefficients of `P(t)` for degrees `0..=up_to`.
    pub fn expand(&self, up_to: u32) -> Vec<BigInt> {
        let len = up_to as usize + 1;
        let mut c: Vec<BigInt> = self.numerator.iter().take(len).cloned().collect();
        c.resize(len, BigInt::zero());
        for &d in self.denominator.degrees() {
            let d = d as usize;
            for j in d..len {
                let prev = c[j - d].clone();
                c[j] += prev;
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    NegativeCoefficient { degree: u32 },
    NonzeroBeyondBound { degree: u32 },
    InexactDivision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalForm {
    Accepted(PoincareRational),
    Rejected(Rejection),
}

impl RationalForm {
    pub fn accepted(self) -> Option<PoincareRational> {
        match self {
            RationalForm::Accepted(p) => Some(p),
            RationalForm::Rejected(_) => None,
        }
    }
}

fn multiply_by_one_minus<T: Clone + CheckedSub>(c: &mut [T], d: usize) -> Option<()> {
    for j in (d..c.len()).rev() {
        c[j] = c[j].checked_sub(&c[j - d])?;
    }
    Some(())
}

/// Multiplies the series by `Π (1 - t^{d_i})`, accepting only if every
/// coefficient is nonnegative and all coefficients above `sum(d_i)` vanish.
/// The table must reach `sum + max` so that a full guard window is inspected.
pub fn to_rational(table: &DimTable, denominator: &DegreeSequence) -> Result<RationalForm, SeriesError> {
    let (sum, max) = (denominator.sum(), denominator.max_entry());
    let needed = sum + max;
    if table.max_degree() < needed {
        return Err(SeriesError::InsufficientDepth { needed, available: table.max_degree() });
    }
    let mut c: Vec<BigInt> = table.dims().iter().map(|d| BigInt::from(d.clone())).collect();
    for &d in denominator.degrees() {
        multiply_by_one_minus(&mut c, d as usize).expect("bigint");
    }
    for (j, v) in c.iter().enumerate() {
        if j as u32 > sum && !v.is_zero() {
            return Ok(RationalForm::Rejected(Rejection::NonzeroBeyondBound { degree: j as u32 }));
        }
        if v.is_negative() {
            return Ok(RationalForm::Rejected(Rejection::NegativeCoefficient { degree: j as u32 }));
        }
    }
    c.truncate(sum as usize + 1);
    Ok(RationalForm::Accepted(PoincareRational::new(c, denominator.clone())))
}

trait Coeff: Clone + Zero + CheckedAdd + CheckedSub + PartialOrd + From<i32> {}
impl<T: Clone + Zero + CheckedAdd + CheckedSub + PartialOrd + From<i32>> Coeff for T {}

enum Division<T> {
    Exact(Vec<T>),
    Inexact,
    Overflow,
}

fn exact_rewrite<T: Coeff>(numerator: &[T], multiply: &[u32], divide: &[u32]) -> Division<T> {
    let extra: usize = multiply.iter().map(|&d| d as usize).sum();
    let mut c: Vec<T> = numerator.to_vec();
    c.resize(numerator.len() + extra, T::zero());
    for &d in multiply {
        if multiply_by_one_minus(&mut c, d as usize).is_none() {
            return Division::Overflow;
        }
    }
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    for &e in divide {
        let e = e as usize;
        let deg = c.len() - 1;
        if deg < e {
            return if c.iter().all(Zero::is_zero) { Division::Exact(c) } else { Division::Inexact };
        }
        let mut q: Vec<T> = Vec::with_capacity(deg - e + 1);
        for j in 0..=deg {
            let r = if j >= e { c[j].checked_add(&q[j - e]) } else { Some(c[j].clone()) };
            let Some(r) = r else { return Division::Overflow };
            if j <= deg - e {
                q.push(r);
            } else if !r.is_zero() {
                return Division::Inexact;
            }
        }
        c = q;
    }
    Division::Exact(c)
}

/// Rewrites a known rational form over a new denominator by exact polynomial
/// division: `a'(t) = a(t) Π(1 - t^{d_i}) / Π(1 - t^{e_j})`. Accepted iff the
/// division is exact and `a'` has nonnegative coefficients.
pub fn to_rational_exact(reference: &PoincareRational, denominator: &DegreeSequence) -> RationalForm {
    let mut multiply = Vec::new();
    let mut divide: Vec<u32> = reference.denominator.degrees().to_vec();
    for &d in denominator.degrees() {
        match divide.iter().position(|&e| e == d) {
            Some(i) => {
                divide.swap_remove(i);
            }
            None => multiply.push(d),
        }
    }
    let small: Option<Vec<i128>> = reference.numerator.iter().map(|v| i128::try_from(v).ok()).collect();
    let result = match small.map(|s| exact_rewrite(&s, &multiply, &divide)) {
        Some(Division::Exact(c)) => Division::Exact(c.into_iter().map(BigInt::from).collect()),
        Some(Division::Inexact) => Division::Inexact,
        _ => exact_rewrite::<BigInt>(&reference.numerator, &multiply, &divide),
    };
    match result {
        Division::Exact(c) => {
            if let Some(j) = c.iter().position(Signed::is_negative) {
                return RationalForm::Rejected(Rejection::NegativeCoefficient { degree: j as u32 });
            }
            RationalForm::Accepted(PoincareRational::new(c, denominator.clone()))
        }
        Division::Inexact => RationalForm::Rejected(Rejection::InexactDivision),
        Division::Overflow => unreachable!("bigint arithmetic does not overflow"),
    }
}

/// The rational form of the Poincaré series of `V_n` over a seed denominator.
/// The seed is checked with a long guard: the table runs to `2·sum + max`
/// and every coefficient above `sum` must vanish.
pub fn reference_rational(n: u32, seed: &DegreeSequence) -> Result<PoincareRational, SeriesError> {
    let table = poincare_series(n, 2 * seed.sum() + seed.max_entry());
    match to_rational(&table, seed)? {
        RationalForm::Accepted(p) => Ok(p),
        RationalForm::Rejected(_) => Err(SeriesError::SeedRejected(seed.to_string())),
    }
}
