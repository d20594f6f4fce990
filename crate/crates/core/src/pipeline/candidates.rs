use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{derive_seed, PipelineConfig, PipelineError, Session};
use crate::algebra::Fp;
use crate::forms::{catalog_for, BinaryForm, Catalog, CovariantExpr, TransvectantPlan};
use crate::modlinalg::EchelonBasis;

const POOL_STREAM: u64 = 0x706f_6f6c;
const DRAW_STREAM: u64 = 0x6472_6177;

struct PoolEntry {
    expr: CovariantExpr,
    /// `(left, right, index)` for a transvectant of two earlier entries;
    /// `None` for the form itself.
    parts: Option<(usize, usize, u32)>,
}

/// A seeded source of random invariants built as transvectant trees.
///
/// The generator keeps a pool of covariants layered by degree. Layer `d` is
/// filled with random transvectants `(A, B)_k` of entries from layers `a`
/// and `d - a`, keeping an entry only if its values at the fingerprint
/// points are independent of the entries already kept with the same degree
/// and order. A candidate invariant of degree `m` is `(A, B)_o` for pool
/// entries of equal order `o` with degrees adding up to `m`.
///
/// Pool values are cached per point, so a candidate costs one transvectant
/// of two order-`o` forms per point.
pub struct CandidateGenerator {
    n: u32,
    seed: u64,
    width: usize,
    check_points: usize,
    max_order: u32,
    entries: Vec<PoolEntry>,
    layers: Vec<Vec<usize>>,
    /// `values[entry][point]`
    values: Vec<Vec<BinaryForm<Fp>>>,
    plans: HashMap<(u32, u32, u32), TransvectantPlan<Fp>>,
    sample: Fp,
    /// Per-degree stream state: (rng, candidates already returned).
    streams: HashMap<u32, (ChaCha8Rng, HashSet<u64>)>,
}

impl CandidateGenerator {
    pub fn new(session: &mut Session) -> Result<Self, PipelineError> {
        let n = session.n();
        let config = session.config().clone();
        let check_points = config.fingerprint_points.max(1);
        let base = session.points(check_points).to_vec();
        let sample = base[0].coeffs()[0];
        Ok(CandidateGenerator {
            n,
            seed: config.seed,
            width: config.pool_width.max(1),
            check_points,
            max_order: (2 * n).max(4),
            entries: vec![PoolEntry { expr: CovariantExpr::base(n), parts: None }],
            layers: vec![Vec::new(), vec![0]],
            values: vec![base],
            plans: HashMap::new(),
            sample,
            streams: HashMap::new(),
        })
    }

    /// Number of covariants currently in the pool.
    pub fn pool_size(&self) -> usize {
        self.entries.len()
    }

    fn plan(&mut self, m: u32, n: u32, p: u32) -> Result<&TransvectantPlan<Fp>, PipelineError> {
        if !self.plans.contains_key(&(m, n, p)) {
            let plan = TransvectantPlan::new(m, n, p, &self.sample)?;
            self.plans.insert((m, n, p), plan);
        }
        Ok(&self.plans[&(m, n, p)])
    }

    fn apply_at(&self, left: usize, right: usize, k: u32, point: usize) -> BinaryForm<Fp> {
        let (a, b) = (&self.values[left][point], &self.values[right][point]);
        self.plans[&(a.order(), b.order(), k)].apply(a, b)
    }

    /// Extends the values of every pool entry to the first `count` points.
    fn ensure_points(&mut self, session: &mut Session, count: usize) -> Result<(), PipelineError> {
        let have = self.values[0].len();
        if have >= count {
            return Ok(());
        }
        let fresh = session.points(count)[have..].to_vec();
        for e in &self.entries {
            if let Some((l, r, k)) = e.parts {
                let (m, n) = (self.entries[l].expr.order(), self.entries[r].expr.order());
                if !self.plans.contains_key(&(m, n, k)) {
                    self.plans.insert((m, n, k), TransvectantPlan::new(m, n, k, &self.sample)?);
                }
            }
        }
        let entries = &self.entries;
        let plans = &self.plans;
        let columns: Vec<Vec<BinaryForm<Fp>>> = fresh
            .into_par_iter()
            .map(|f| {
                let mut col: Vec<BinaryForm<Fp>> = Vec::with_capacity(entries.len());
                for e in entries {
                    let v = match e.parts {
                        None => f.clone(),
                        Some((l, r, k)) => {
                            let (a, b) = (&col[l], &col[r]);
                            plans[&(a.order(), b.order(), k)].apply(a, b)
                        }
                    };
                    col.push(v);
                }
                col
            })
            .collect();
        for col in columns {
            for (slot, v) in self.values.iter_mut().zip(col) {
                slot.push(v);
            }
        }
        Ok(())
    }

    /// Fills pool layers up to and including `degree`.
    fn grow_to(&mut self, degree: u32) -> Result<(), PipelineError> {
        while (self.layers.len() as u32) <= degree {
            let d = self.layers.len() as u32;
            self.fill_layer(d)?;
        }
        Ok(())
    }

    fn fill_layer(&mut self, d: u32) -> Result<(), PipelineError> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, &[POOL_STREAM, d as u64]));
        let splits: Vec<u32> =
            (1..=d / 2).filter(|&a| !self.layers[a as usize].is_empty() && !self.layers[(d - a) as usize].is_empty()).collect();
        let mut layer = Vec::new();
        let mut seen: HashSet<u64> = HashSet::new();
        let mut spans: HashMap<u32, EchelonBasis> = HashMap::new();
        let attempts = 20 * self.width;
        for _ in 0..attempts {
            if layer.len() >= self.width || splits.is_empty() {
                break;
            }
            let a = *splits.choose(&mut rng).expect("nonempty");
            let l = *self.layers[a as usize].choose(&mut rng).expect("nonempty layer");
            let r = *self.layers[(d - a) as usize].choose(&mut rng).expect("nonempty layer");
            let (ol, or) = (self.entries[l].expr.order(), self.entries[r].expr.order());
            let ks: Vec<u32> = (0..=ol.min(or))
                .filter(|&k| {
                    let o = ol + or - 2 * k;
                    o >= 1 && o <= self.max_order && !(l == r && k % 2 == 1)
                })
                .collect();
            let Some(&k) = ks.choose(&mut rng) else { continue };
            let expr = CovariantExpr::transvect(&self.entries[l].expr, &self.entries[r].expr, k)?;
            if !seen.insert(expr.hash()) {
                continue;
            }
            self.plan(ol, or, k)?;
            let vals: Vec<BinaryForm<Fp>> = (0..self.check_points).map(|j| self.apply_at(l, r, k, j)).collect();
            let flat: Vec<u32> = vals.iter().flat_map(|v| v.coeffs().iter().map(|c| c.value())).collect();
            let order = expr.order();
            let p = self.sample.modulus() as u64;
            let span = match spans.entry(order) {
                std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                std::collections::hash_map::Entry::Vacant(v) => v.insert(EchelonBasis::new(p, flat.len())?),
            };
            if span.insert(&flat)?.is_none() {
                continue;
            }
            layer.push(self.entries.len());
            self.entries.push(PoolEntry { expr, parts: Some((l, r, k)) });
            self.values.push(vals);
        }
        // entries beyond the check points are filled lazily
        let have = self.values[0].len();
        if have > self.check_points {
            for &i in &layer {
                let (l, r, k) = self.entries[i].parts.expect("generated entry");
                let extra: Vec<BinaryForm<Fp>> = (self.check_points..have).map(|j| self.apply_at(l, r, k, j)).collect();
                self.values[i].extend(extra);
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    /// `(a, o)` pairs for which layers `a` and `m - a` share order `o`.
    fn invariant_shapes(&self, m: u32) -> Vec<(u32, u32)> {
        let mut shapes = Vec::new();
        for a in 1..=m / 2 {
            let (la, lb) = (&self.layers[a as usize], &self.layers[(m - a) as usize]);
            let orders_b: HashSet<u32> = lb.iter().map(|&i| self.entries[i].expr.order()).collect();
            let mut orders: Vec<u32> =
                la.iter().map(|&i| self.entries[i].expr.order()).filter(|o| orders_b.contains(o)).collect();
            orders.sort_unstable();
            orders.dedup();
            shapes.extend(orders.into_iter().map(|o| (a, o)));
        }
        shapes
    }

    /// The next candidate of degree `m` with its values at the first `count`
    /// points. Candidates of one degree never repeat; `None` once the
    /// bounded redraws fail to find a new one that is nonzero at the
    /// fingerprint points.
    pub fn next_candidate(
        &mut self,
        session: &mut Session,
        m: u32,
        count: usize,
    ) -> Result<Option<(CovariantExpr, Vec<u32>)>, PipelineError> {
        if m < 2 {
            return Ok(None);
        }
        self.grow_to(m - 1)?;
        self.ensure_points(session, count.max(self.check_points))?;
        let shapes = self.invariant_shapes(m);
        if shapes.is_empty() {
            return Ok(None);
        }
        let seed = self.seed;
        let (mut rng, mut seen) = self
            .streams
            .remove(&m)
            .unwrap_or_else(|| (ChaCha8Rng::seed_from_u64(derive_seed(seed, &[DRAW_STREAM, m as u64])), HashSet::new()));
        let mut found = None;
        for _ in 0..2000 {
            let (a, o) = shapes[rng.gen_range(0..shapes.len())];
            let pick = |layer: &Vec<usize>, rng: &mut ChaCha8Rng| {
                let of: Vec<usize> = layer.iter().copied().filter(|&i| self.entries[i].expr.order() == o).collect();
                *of.choose(rng).expect("shape lists shared orders")
            };
            let l = pick(&self.layers[a as usize], &mut rng);
            let r = pick(&self.layers[(m - a) as usize], &mut rng);
            if l == r && o % 2 == 1 {
                continue;
            }
            let expr = CovariantExpr::transvect(&self.entries[l].expr, &self.entries[r].expr, o)?;
            if !seen.insert(expr.hash()) {
                continue;
            }
            self.plan(o, o, o)?;
            let check: Vec<u32> = (0..self.check_points).map(|j| self.apply_at(l, r, o, j).coeffs()[0].value()).collect();
            if check.iter().all(|&v| v == 0) {
                continue;
            }
            let values: Vec<u32> = (0..count).map(|j| self.apply_at(l, r, o, j).coeffs()[0].value()).collect();
            found = Some((expr, values));
            break;
        }
        self.streams.insert(m, (rng, seen));
        Ok(found)
    }

    /// Up to `k` distinct candidates of degree `m`.
    pub fn candidates(
        &mut self,
        session: &mut Session,
        m: u32,
        k: usize,
        count: usize,
    ) -> Result<Vec<(CovariantExpr, Vec<u32>)>, PipelineError> {
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            match self.next_candidate(session, m, count)? {
                Some(c) => out.push(c),
                None => break,
            }
        }
        Ok(out)
    }

    pub fn base_order(&self) -> u32 {
        self.n
    }
}

/// A seeded random invariant of the given degree for forms of order `n`,
/// nonzero at the default fingerprint points.
pub fn generate_candidate(n: u32, degree: u32, seed: u64) -> Result<CovariantExpr, PipelineError> {
    let catalog = catalog_for(n).unwrap_or_else(|_| Catalog::empty(n));
    let config = PipelineConfig::with_seed(seed);
    let mut session = Session::new(&catalog, config)?;
    let mut generator = CandidateGenerator::new(&mut session)?;
    generator
        .next_candidate(&mut session, degree, 0)?
        .map(|(e, _)| e)
        .ok_or(PipelineError::Unreachable { degree })
}
