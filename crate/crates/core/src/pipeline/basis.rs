use serde::Serialize;

use super::products::product_monomials;
use super::{dim_usize, CandidateGenerator, PipelineError, Session};
use crate::forms::CovariantExpr;
use crate::modlinalg::EchelonBasis;
use crate::series::{default_seed, reference_rational};

/// A basic invariant found by the pipeline, with its values at the first
/// fingerprint points.
#[derive(Clone, Debug, Serialize)]
pub struct BasisRecord {
    pub degree: u32,
    #[serde(serialize_with = "as_text")]
    pub expr: CovariantExpr,
    pub fingerprint: Vec<u32>,
}

fn as_text<S: serde::Serializer>(e: &CovariantExpr, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(e)
}

/// Evidence for one degree: `d_m = dim - product_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DmEntry {
    pub degree: u32,
    pub dim: usize,
    pub product_rank: usize,
    pub d_m: usize,
    pub adjoined: usize,
    pub points: usize,
    pub candidates_tried: usize,
}

impl DmEntry {
    fn empty(degree: u32) -> Self {
        DmEntry { degree, dim: 0, product_rank: 0, d_m: 0, adjoined: 0, points: 0, candidates_tried: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DmTable {
    pub n: u32,
    pub prime: u32,
    pub seed: u64,
    pub entries: Vec<DmEntry>,
}

impl DmTable {
    pub fn d(&self, m: u32) -> Option<usize> {
        self.entries.iter().find(|e| e.degree == m).map(|e| e.d_m)
    }

    /// Number of basic invariants over all listed degrees.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.d_m).sum()
    }

    /// Degrees with `d_m > 0` and their counts, in increasing degree.
    pub fn nonzero(&self) -> Vec<(u32, usize)> {
        self.entries.iter().filter(|e| e.d_m > 0).map(|e| (e.degree, e.d_m)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,d_m,dim,product_rank,adjoined,points\n");
        for e in &self.entries {
            out += &format!("{},{},{},{},{},{}\n", e.degree, e.d_m, e.dim, e.product_rank, e.adjoined, e.points);
        }
        out
    }
}

pub struct DmOutcome {
    pub entry: DmEntry,
    pub records: Vec<BasisRecord>,
}

/// Rows of the products of basis invariants of total degree `m`, evaluated
/// at the first `points` points.
pub(crate) fn product_rows<'a>(
    session: &'a mut Session,
    basis: &[CovariantExpr],
    m: u32,
    points: usize,
) -> Result<impl Iterator<Item = Vec<u32>> + 'a, PipelineError> {
    session.ensure_values(basis, points)?;
    let degrees: Vec<u32> = basis.iter().map(|e| e.degree()).collect();
    let p = session.prime() as u64;
    let values: Vec<Vec<u32>> = basis
        .iter()
        .map(|e| session.values(e, points).map(<[u32]>::to_vec))
        .collect::<Result<_, _>>()?;
    Ok(product_monomials(&degrees, m).into_iter().map(move |mono| {
        let mut row = vec![1u32; points];
        for &i in &mono {
            for (r, v) in row.iter_mut().zip(&values[i]) {
                *r = (*r as u64 * *v as u64 % p) as u32;
            }
        }
        row
    }))
}

/// Settles `d_m` given a basis complete below degree `m`.
///
/// Products of the basis are streamed into an echelon basis at
/// `dim I_m + margin` points; generated candidates are then adjoined until
/// the rank reaches `dim I_m`, and those that raised the rank become new
/// basis records. If the candidate budget runs out, the computation is
/// repeated once with the margin doubled before giving up.
pub fn compute_dm(
    session: &mut Session,
    generator: &mut CandidateGenerator,
    m: u32,
    basis: &[BasisRecord],
) -> Result<DmOutcome, PipelineError> {
    let dim = dim_usize(session.n(), m)?;
    if dim == 0 {
        return Ok(DmOutcome { entry: DmEntry::empty(m), records: Vec::new() });
    }
    let config = session.config().clone();
    let exprs: Vec<CovariantExpr> = basis.iter().filter(|r| r.degree < m).map(|r| r.expr.clone()).collect();
    let p = session.prime() as u64;
    let mut last = 0;
    for attempt in 0..2 {
        let points = dim + (config.margin(dim) << attempt);
        let mut echelon = EchelonBasis::new(p, points)?;
        let mut rows = product_rows(session, &exprs, m, points)?;
        loop {
            let batch: Vec<Vec<u32>> = rows.by_ref().take(256).collect();
            if batch.is_empty() || echelon.rank() >= dim {
                break;
            }
            echelon.extend_batch(&batch, Some(dim))?;
        }
        drop(rows);
        let product_rank = echelon.rank();
        let budget = config.candidates_per_dim * (dim - product_rank) + 200;
        let mut tried = 0;
        let mut records = Vec::new();
        while echelon.rank() < dim && tried < budget {
            let want = 32.min(budget - tried);
            let batch = generator.candidates(session, m, want, points)?;
            if batch.is_empty() {
                break;
            }
            tried += batch.len();
            let rows: Vec<Vec<u32>> = batch.iter().map(|(_, v)| v.clone()).collect();
            let (_, grew) = echelon.extend_batch(&rows, Some(dim))?;
            for ((expr, values), g) in batch.into_iter().zip(grew) {
                if g {
                    session.remember(&expr, values);
                    let fingerprint = session.values(&expr, config.fingerprint_points)?.to_vec();
                    records.push(BasisRecord { degree: m, expr, fingerprint });
                }
            }
        }
        last = echelon.rank();
        if last == dim {
            let entry = DmEntry {
                degree: m,
                dim,
                product_rank,
                d_m: dim - product_rank,
                adjoined: records.len(),
                points,
                candidates_tried: tried,
            };
            return Ok(DmOutcome { entry, records });
        }
    }
    Err(PipelineError::Inconclusive { degree: m, dim, achieved: last })
}

/// Degree beyond which no basic invariants exist, from the numerator of the
/// Poincaré series over a known parameter system.
fn generator_degree_bound(n: u32) -> Option<u32> {
    let seed = default_seed(n)?;
    let rational = reference_rational(n, &seed).ok()?;
    Some((rational.numerator_degree() as u32).max(seed.max_entry()))
}

/// Runs [`compute_dm`] degree by degree up to `max_degree`.
///
/// Degrees whose invariant space is empty, including all odd degrees when
/// `n` is odd, get `d_m = 0` without computation, as do degrees above the
/// numerator bound of the Poincaré series when one is known.
pub fn find_basic_invariants(
    session: &mut Session,
    max_degree: u32,
) -> Result<(DmTable, Vec<BasisRecord>), PipelineError> {
    let n = session.n();
    let bound = if max_degree > 2 * n { generator_degree_bound(n) } else { None };
    let mut generator = CandidateGenerator::new(session)?;
    let mut basis: Vec<BasisRecord> = Vec::new();
    let mut entries = Vec::new();
    for m in 1..=max_degree {
        if (m * n) % 2 == 1 {
            continue;
        }
        if bound.is_some_and(|b| m > b) {
            entries.push(DmEntry::empty(m));
            continue;
        }
        let outcome = compute_dm(session, &mut generator, m, &basis)?;
        basis.extend(outcome.records);
        entries.push(outcome.entry);
    }
    let table = DmTable { n, prime: session.prime(), seed: session.config().seed, entries };
    Ok((table, basis))
}
