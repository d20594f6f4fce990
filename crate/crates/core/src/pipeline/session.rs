use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{derive_seed, PipelineConfig, PipelineError};
use crate::algebra::{Fp, PrimeField, RingContext};
use crate::forms::{evaluate_at_points, BinaryForm, Catalog, CovariantExpr};
use crate::modlinalg::ModMatrix;

const POINT_STREAM: u64 = 0x706f_696e_7473;

/// Values of order-0 expressions at a seeded sequence of random forms.
///
/// Point `i` depends only on the seed, the prime and `i`, so growing the
/// point count extends earlier results. Values are memoized by expression
/// and, when a cache directory is configured, persisted across runs.
pub struct Session<'c> {
    catalog: &'c Catalog,
    config: PipelineConfig,
    field: PrimeField,
    points: Vec<BinaryForm<Fp>>,
    store: HashMap<CovariantExpr, Vec<u32>>,
}

impl<'c> Session<'c> {
    pub fn new(catalog: &'c Catalog, config: PipelineConfig) -> Result<Self, PipelineError> {
        let n = catalog.base_order();
        let bound = 2 * n + 1;
        let field = PrimeField::new(config.prime)
            .ok()
            .filter(|_| config.prime > bound)
            .ok_or(PipelineError::BadPrime { prime: config.prime, bound })?;
        Ok(Session { catalog, config, field, points: Vec::new(), store: HashMap::new() })
    }

    pub fn n(&self) -> u32 {
        self.catalog.base_order()
    }

    pub fn catalog(&self) -> &'c Catalog {
        self.catalog
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prime(&self) -> u32 {
        self.field.modulus()
    }

    /// The first `count` points, generating any that are missing.
    pub fn points(&mut self, count: usize) -> &[BinaryForm<Fp>] {
        while self.points.len() < count {
            let i = self.points.len() as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.config.seed, &[POINT_STREAM, i]));
            let f = BinaryForm::new((0..=self.n()).map(|_| self.field.random(&mut rng)).collect());
            self.points.push(f);
        }
        &self.points[..count]
    }

    /// Makes sure every expression has values at the first `count` points.
    pub fn ensure_values(&mut self, exprs: &[CovariantExpr], count: usize) -> Result<(), PipelineError> {
        let mut missing: Vec<CovariantExpr> = Vec::new();
        for e in exprs {
            if !e.is_invariant() {
                return Err(PipelineError::NotInvariant(e.to_string()));
            }
            if !self.store.contains_key(e) {
                let loaded = self.load_cached(e);
                self.store.insert(e.clone(), loaded);
            }
            if self.store[e].len() < count && !missing.contains(e) {
                missing.push(e.clone());
            }
        }
        if missing.is_empty() {
            return Ok(());
        }
        let start = missing.iter().map(|e| self.store[e].len()).min().unwrap_or(count);
        self.points(count);
        let values = evaluate_at_points(&missing, &self.points[start..count], self.catalog)?;
        for (j, e) in missing.iter().enumerate() {
            let have = self.store[e].len();
            let column: Vec<u32> = values[have - start..].iter().map(|row| row[j].coeffs()[0].value()).collect();
            let slot = self.store.get_mut(e).expect("inserted above");
            slot.extend(column);
            self.save_cached(e)?;
        }
        Ok(())
    }

    /// Values at the first `count` points.
    pub fn values(&mut self, e: &CovariantExpr, count: usize) -> Result<&[u32], PipelineError> {
        self.ensure_values(std::slice::from_ref(e), count)?;
        Ok(&self.store[e][..count])
    }

    /// Evaluation matrix with one row per expression and `count` columns.
    pub fn matrix(&mut self, exprs: &[CovariantExpr], count: usize) -> Result<ModMatrix, PipelineError> {
        self.ensure_values(exprs, count)?;
        let mut data = Vec::with_capacity(exprs.len() * count);
        for e in exprs {
            data.extend_from_slice(&self.store[e][..count]);
        }
        Ok(ModMatrix::from_raw(self.prime(), exprs.len(), count, data))
    }

    /// Records values computed elsewhere (for example through the candidate
    /// pool) so later lookups do not re-evaluate the expression.
    pub(crate) fn remember(&mut self, e: &CovariantExpr, values: Vec<u32>) {
        let slot = self.store.entry(e.clone()).or_default();
        if values.len() > slot.len() {
            *slot = values;
        }
    }

    fn cache_path(&self, e: &CovariantExpr) -> Option<PathBuf> {
        let dir = self.config.cache_dir.as_ref()?;
        Some(dir.join(format!("n{}-p{}-s{}-{:016x}.u32", self.n(), self.prime(), self.config.seed, e.hash())))
    }

    fn load_cached(&self, e: &CovariantExpr) -> Vec<u32> {
        let Some(path) = self.cache_path(e) else { return Vec::new() };
        let mut bytes = Vec::new();
        if fs::File::open(&path).and_then(|mut f| f.read_to_end(&mut bytes)).is_err() {
            return Vec::new();
        }
        let p = self.prime();
        let values: Vec<u32> =
            bytes.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().expect("chunk of 4"))).collect();
        // a damaged file is ignored rather than trusted
        if bytes.len() % 4 != 0 || values.iter().any(|&v| v >= p) {
            return Vec::new();
        }
        values
    }

    fn save_cached(&self, e: &CovariantExpr) -> Result<(), PipelineError> {
        let Some(path) = self.cache_path(e) else { return Ok(()) };
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        for v in &self.store[e] {
            f.write_all(&v.to_le_bytes())?;
        }
        drop(f);
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// Evaluation matrix of order-0 expressions (rows) at the given points
/// (columns) over `F_p`.
pub fn evaluation_matrix(
    exprs: &[CovariantExpr],
    points: &[BinaryForm<Fp>],
    catalog: &Catalog,
) -> Result<ModMatrix, PipelineError> {
    if let Some(e) = exprs.iter().find(|e| !e.is_invariant()) {
        return Err(PipelineError::NotInvariant(e.to_string()));
    }
    let p = points.first().map_or(crate::algebra::DEFAULT_PRIME, |f| f.coeffs()[0].modulus());
    let values = evaluate_at_points(exprs, points, catalog)?;
    let mut data = vec![0u32; exprs.len() * points.len()];
    for (j, row) in values.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            data[i * points.len() + j] = v.coeffs()[0].value();
        }
    }
    Ok(ModMatrix::from_raw(p, exprs.len(), points.len(), data))
}
