use rayon::prelude::*;

use super::{check_prime, delay_budget, inv_mod, LinalgError};

/// A row space over `F_p` kept in reduced row echelon form: every basis row
/// has a leading 1 in its pivot column and every other row is zero there.
///
/// Because of that, the multipliers needed to reduce a new vector are read
/// directly off its pivot entries, so the whole reduction can accumulate in
/// `u64` and be reduced mod `p` only occasionally.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    p: u32,
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct StreamOutcome {
    pub achieved_rank: usize,
    pub rows_consumed: usize,
}

impl EchelonBasis {
    pub fn new(p: u64, cols: usize) -> Result<Self, LinalgError> {
        Ok(EchelonBasis { p: check_prime(p)?, cols, pivots: Vec::new(), rows: Vec::new() })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Basis rows sorted by pivot column.
    pub fn into_rows(self) -> Vec<Vec<u32>> {
        let mut pairs: Vec<_> = self.pivots.into_iter().zip(self.rows).collect();
        pairs.sort_by_key(|(c, _)| *c);
        pairs.into_iter().map(|(_, r)| r).collect()
    }

    fn check_len(&self, row: &[u32]) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::RowLength { expected: self.cols, found: row.len() });
        }
        Ok(())
    }

    fn reduce_with(&self, row: &[u32], which: impl Iterator<Item = usize>) -> Vec<u32> {
        let p = self.p as u64;
        let budget = delay_budget(self.p);
        let mut acc: Vec<u64> = row.iter().map(|&x| x as u64).collect();
        let mut pending = 0;
        for i in which {
            let c = self.pivots[i];
            let f = (row[c] as u64) % p;
            if f == 0 {
                continue;
            }
            if pending == budget {
                acc.iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
            let g = p - f;
            for (x, &y) in acc[c..].iter_mut().zip(&self.rows[i][c..]) {
                *x += g * y as u64;
            }
            pending += 1;
        }
        acc.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// The remainder of `row` modulo the current span; zero iff `row` lies in it.
    pub fn reduce(&self, row: &[u32]) -> Result<Vec<u32>, LinalgError> {
        self.check_len(row)?;
        Ok(self.reduce_with(row, 0..self.rows.len()))
    }

    pub fn contains(&self, row: &[u32]) -> Result<bool, LinalgError> {
        Ok(self.reduce(row)?.iter().all(|&x| x == 0))
    }

    /// Adds an already reduced vector; returns its pivot column, or `None` if zero.
    fn push_reduced(&mut self, mut r: Vec<u32>) -> Option<usize> {
        let c = r.iter().position(|&x| x != 0)?;
        let p = self.p as u64;
        let inv = inv_mod(r[c], self.p) as u64;
        for x in r[c..].iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        let eliminate = |b: &mut Vec<u32>| {
            let f = b[c] as u64;
            if f != 0 {
                let g = p - f;
                for (x, &y) in b[c..].iter_mut().zip(&r[c..]) {
                    *x = ((*x as u64 + g * y as u64) % p) as u32;
                }
            }
        };
        if self.rows.len() * (self.cols - c) >= 1 << 16 {
            self.rows.par_iter_mut().for_each(eliminate);
        } else {
            self.rows.iter_mut().for_each(eliminate);
        }
        self.pivots.push(c);
        self.rows.push(r);
        Some(c)
    }

    /// Adds `row` to the span; returns the new pivot column if the rank grew.
    pub fn insert(&mut self, row: &[u32]) -> Result<Option<usize>, LinalgError> {
        let r = self.reduce(row)?;
        Ok(self.push_reduced(r))
    }

    /// Inserts rows in order, stopping once the rank reaches `target`.
    /// Rows are first reduced against the current basis in parallel, then
    /// finished and inserted sequentially, so the outcome is independent of
    /// scheduling. Returns how many rows were consumed and, for each, whether
    /// it increased the rank.
    pub fn extend_batch(&mut self, rows: &[Vec<u32>], target: Option<usize>) -> Result<(usize, Vec<bool>), LinalgError> {
        for r in rows {
            self.check_len(r)?;
        }
        let before = self.rows.len();
        let partial: Vec<Vec<u32>> = rows.par_iter().map(|r| self.reduce_with(r, 0..before)).collect();
        let mut grew = Vec::with_capacity(rows.len());
        for r in partial {
            if target.is_some_and(|t| self.rank() >= t) {
                break;
            }
            let r = self.reduce_with(&r, before..self.rows.len());
            grew.push(self.push_reduced(r).is_some());
        }
        Ok((grew.len(), grew))
    }
}

/// Consumes rows one at a time into an echelon basis until the rank reaches
/// `target_rank` or `max_rows` rows have been read. The rank is exact for the
/// consumed prefix.
pub fn rank_streaming<I>(
    p: u64,
    rows: I,
    n_cols: usize,
    target_rank: usize,
    max_rows: usize,
) -> Result<StreamOutcome, LinalgError>
where
    I: IntoIterator<Item = Vec<u32>>,
{
    let mut basis = EchelonBasis::new(p, n_cols)?;
    let mut it = rows.into_iter();
    let mut consumed = 0;
    while consumed < max_rows && basis.rank() < target_rank {
        let want = (max_rows - consumed).min(256);
        let batch: Vec<Vec<u32>> = it.by_ref().take(want).collect();
        if batch.is_empty() {
            break;
        }
        let (used, _) = basis.extend_batch(&batch, Some(target_rank))?;
        consumed += used;
    }
    Ok(StreamOutcome { achieved_rank: basis.rank(), rows_consumed: consumed })
}
