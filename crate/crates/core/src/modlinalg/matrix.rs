use rayon::prelude::*;

use super::{check_prime, inv_mod, EchelonBasis, LinalgError};
use crate::algebra::Fp;

/// Row-major dense matrix over `F_p` with entries in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

const PAR_THRESHOLD: usize = 1 << 14;

impl ModMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        let p = check_prime(p)?;
        Ok(ModMatrix { p, rows, cols, data: vec![0; rows * cols] })
    }

    pub fn identity(p: u64, n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Builds a matrix from signed rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(p: u64, cols: usize, rows: &[R]) -> Result<Self, LinalgError> {
        let p32 = check_prime(p)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::RowLength { expected: cols, found: r.len() });
            }
            data.extend(r.iter().map(|&v| v.rem_euclid(p as i64) as u32));
        }
        Ok(ModMatrix { p: p32, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from rows of field elements sharing the modulus `p`.
    pub fn from_fp_rows<R: AsRef<[Fp]>>(p: u64, cols: usize, rows: &[R]) -> Result<Self, LinalgError> {
        let p32 = check_prime(p)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::RowLength { expected: cols, found: r.len() });
            }
            for v in r {
                assert_eq!(v.modulus(), p32, "modulus mismatch");
                data.push(v.value());
            }
        }
        Ok(ModMatrix { p: p32, rows: rows.len(), cols, data })
    }

    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ModMatrix { p, rows, cols, data }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v.rem_euclid(self.p as i64) as u32;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub(crate) fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        ModMatrix { p: self.p, rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let p = self.p as u64;
        let mut data = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u64 * other.get(k, j) as u64) % p;
                }
                data[i * other.cols + j] = acc as u32;
            }
        }
        ModMatrix { p: self.p, rows: self.rows, cols: other.cols, data }
    }

    /// `v · M` for a row vector `v` of length `n_rows`.
    pub fn left_apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let p = self.p as u64;
        let mut out = vec![0u64; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(r)) {
                *o = (*o + coef as u64 * m as u64) % p;
            }
        }
        out.into_iter().map(|x| x as u32).collect()
    }

    /// Rank by Gaussian elimination, pivoting on the first nonzero entry of
    /// each column. The row updates below a pivot run in parallel on large
    /// matrices; the result does not depend on the thread count.
    pub fn rank(&self) -> usize {
        let (p, cols) = (self.p as u64, self.cols);
        if cols == 0 || self.rows == 0 {
            return 0;
        }
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&r| a[r * cols + col] != 0) else { continue };
            if piv != rank {
                for c in col..cols {
                    a.swap(piv * cols + c, rank * cols + c);
                }
            }
            let (head, tail) = a.split_at_mut((rank + 1) * cols);
            let pivot = &mut head[rank * cols..];
            let inv = inv_mod(pivot[col], self.p) as u64;
            for x in pivot[col..].iter_mut() {
                *x = (*x as u64 * inv % p) as u32;
            }
            let pivot = &*pivot;
            let update = |row: &mut [u32]| {
                let f = row[col] as u64;
                if f != 0 {
                    let g = p - f;
                    for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                        *x = ((*x as u64 + g * y as u64) % p) as u32;
                    }
                }
            };
            if tail.len() * (cols - col) / cols.max(1) >= PAR_THRESHOLD {
                tail.par_chunks_mut(cols).for_each(update);
            } else {
                tail.chunks_mut(cols).for_each(update);
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the left nullspace `{v : v·M = 0}`, in reduced row echelon form
    /// with leading coefficient 1. Its size is `n_rows - rank`.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let (p, rows, cols) = (self.p as u64, self.rows, self.cols);
        let width = cols + rows;
        let mut a = vec![0u32; rows * width];
        for r in 0..rows {
            a[r * width..r * width + cols].copy_from_slice(self.row(r));
            a[r * width + cols + r] = 1;
        }
        let mut rank = 0;
        for col in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| a[r * width + col] != 0) else { continue };
            for c in 0..width {
                a.swap(piv * width + c, rank * width + c);
            }
            let inv = inv_mod(a[rank * width + col], self.p) as u64;
            for c in 0..width {
                a[rank * width + c] = (a[rank * width + c] as u64 * inv % p) as u32;
            }
            for r in rank + 1..rows {
                let f = a[r * width + col] as u64;
                if f != 0 {
                    for c in 0..width {
                        let y = a[rank * width + c] as u64;
                        a[r * width + c] = ((a[r * width + c] as u64 + (p - f) * y) % p) as u32;
                    }
                }
            }
            rank += 1;
        }
        let mut basis = EchelonBasis::new(self.p as u64, rows).expect("prime already checked");
        for r in rank..rows {
            basis.insert(&a[r * width + cols..(r + 1) * width]).expect("row length matches");
        }
        basis.into_rows()
    }
}
