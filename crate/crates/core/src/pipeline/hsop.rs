use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::basis::product_rows;
use super::{derive_seed, dim_usize, find_basic_invariants, BasisRecord, PipelineError, Session};
use crate::algebra::{Dual, Fp, PrimeField, Rationals, RingContext};
use crate::forms::{evaluate_at_points, BinaryForm, Catalog, CovariantExpr, Evaluator};
use crate::modlinalg::{EchelonBasis, ModMatrix};
use crate::nullcone::random_nullform;
use crate::series::{check_sequence, default_seed, reference_rational, to_rational_exact, DegreeSequence, SequenceCheck};

const NULLFORM_STREAM: u64 = 0x6e75_6c6c;
const GENERIC_STREAM: u64 = 0x6765_6e65;

/// Rank of the Jacobian matrix `∂I_j/∂c_i` of the invariants at `point`,
/// with `c_i` the raw coefficients. Each column comes from one evaluation
/// over dual numbers.
pub fn jacobian_rank(invariants: &[CovariantExpr], point: &BinaryForm<Fp>, catalog: &Catalog) -> Result<usize, PipelineError> {
    if let Some(e) = invariants.iter().find(|e| !e.is_invariant()) {
        return Err(PipelineError::NotInvariant(e.to_string()));
    }
    let p = point.coeffs()[0].modulus();
    let cols = point.order() as usize + 1;
    let mut data = vec![0u32; invariants.len() * cols];
    let mut ev: Evaluator<Dual<Fp>> = Evaluator::new(catalog);
    for i in 0..cols {
        let lifted = BinaryForm::new(
            point
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, &c)| if i == j { Dual::variable(c) } else { Dual::constant(c) })
                .collect(),
        );
        for (r, v) in ev.eval_point(invariants, &lifted)?.iter().enumerate() {
            data[r * cols + i] = v.coeffs()[0].eps.value();
        }
    }
    Ok(ModMatrix::from_raw(p, invariants.len(), cols, data).rank())
}

/// Outcome of evaluating invariants on sampled nullforms and generic forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NullconeSample {
    pub nullform_trials: usize,
    /// Nullforms on which every invariant vanished.
    pub nullform_all_vanish: usize,
    /// `(trial, invariant index)` pairs with a nonzero value on a nullform;
    /// always empty for genuine invariants.
    pub nonzero_on_nullform: Vec<(usize, usize)>,
    pub generic_trials: usize,
    /// Generic forms over `F_p` on which every invariant vanished.
    pub generic_all_vanish: usize,
}

/// Evaluates the invariants on `trials` seeded random nullforms over the
/// rationals and on `trials` random forms over `F_prime`.
pub fn vanish_on_nullcone_sample(
    invariants: &[CovariantExpr],
    catalog: &Catalog,
    trials: usize,
    seed: u64,
    prime: u32,
) -> Result<NullconeSample, PipelineError> {
    let n = catalog.base_order();
    let ring = Rationals { bound: 3 };
    let nullforms: Vec<_> =
        (0..trials).map(|t| random_nullform(n, &ring, derive_seed(seed, &[NULLFORM_STREAM, t as u64]))).collect();
    let values = evaluate_at_points(invariants, &nullforms, catalog)?;
    let mut nonzero = Vec::new();
    let mut all_vanish = 0;
    for (t, row) in values.iter().enumerate() {
        let bad: Vec<usize> = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect();
        if bad.is_empty() {
            all_vanish += 1;
        }
        nonzero.extend(bad.into_iter().map(|i| (t, i)));
    }
    let field = PrimeField::new(prime).map_err(|_| PipelineError::BadPrime { prime, bound: 2 })?;
    let generic: Vec<BinaryForm<Fp>> = (0..trials)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[GENERIC_STREAM, t as u64]));
            BinaryForm::new((0..=n).map(|_| field.random(&mut rng)).collect())
        })
        .collect();
    let generic_all_vanish = evaluate_at_points(invariants, &generic, catalog)?
        .iter()
        .filter(|row| row.iter().all(|v| v.is_zero()))
        .count();
    Ok(NullconeSample {
        nullform_trials: trials,
        nullform_all_vanish: all_vanish,
        nonzero_on_nullform: nonzero,
        generic_trials: trials,
        generic_all_vanish,
    })
}

/// Measured `dim(I_i ∩ H)` for the ideal `H` generated by some invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipResult {
    pub degree: u32,
    pub dim: usize,
    pub dim_cap_h: usize,
    /// `a_i` from the numerator of the Poincaré series over the degrees
    /// of `H`, when `H` is a candidate parameter system.
    pub a_i_expected: Option<i64>,
    pub points: usize,
    pub rows_consumed: usize,
}

impl MembershipResult {
    /// `dim(I_i ∩ H) + a_i = dim I_i`, or `I_i ⊆ H` when no `a_i` is known.
    pub fn consistent(&self) -> bool {
        match self.a_i_expected {
            Some(a) => self.dim_cap_h as i64 + a == self.dim as i64,
            None => self.dim_cap_h == self.dim,
        }
    }

    pub fn contained(&self) -> bool {
        self.dim_cap_h == self.dim
    }
}

/// A maximal independent set of basis monomials of degree `j`, selected by
/// streaming all monomials at `dim I_j + margin` points.
fn spanning_monomials(
    session: &mut Session,
    basis: &[CovariantExpr],
    j: u32,
) -> Result<Vec<Vec<usize>>, PipelineError> {
    if j == 0 {
        return Ok(vec![Vec::new()]);
    }
    let dim = dim_usize(session.n(), j)?;
    if dim == 0 {
        return Ok(Vec::new());
    }
    let points = dim + session.config().margin(dim);
    let degrees: Vec<u32> = basis.iter().map(|e| e.degree()).collect();
    let monos = super::product_monomials(&degrees, j);
    let p = session.prime() as u64;
    let mut echelon = EchelonBasis::new(p, points)?;
    let mut chosen = Vec::with_capacity(dim);
    let mut rows = product_rows(session, basis, j, points)?;
    let mut offset = 0;
    while echelon.rank() < dim {
        let batch: Vec<Vec<u32>> = rows.by_ref().take(256).collect();
        if batch.is_empty() {
            break;
        }
        let (_, grew) = echelon.extend_batch(&batch, Some(dim))?;
        chosen.extend(grew.iter().enumerate().filter(|(_, g)| **g).map(|(k, _)| monos[offset + k].clone()));
        offset += batch.len();
    }
    if echelon.rank() < dim {
        return Err(PipelineError::BasisIncomplete { degree: j, dim, achieved: echelon.rank() });
    }
    Ok(chosen)
}

/// The numerator coefficient `a_i` of the Poincaré series written over the
/// given parameter degrees.
pub(crate) fn numerator_coefficient(n: u32, degrees: &DegreeSequence, i: u32) -> Option<i64> {
    let seed = default_seed(n)?;
    let reference = reference_rational(n, &seed).ok()?;
    let rational = to_rational_exact(&reference, degrees).accepted()?;
    Some(rational.numerator().get(i as usize).map_or(0, |c: &BigInt| c.to_i64().unwrap_or(i64::MAX)))
}

/// `dim(I_i ∩ H)` for `H = (hsop)`, as the rank of all products `h_k · g`
/// with `g` running through a basis of `I_{i - deg h_k}` made of monomials
/// in `basis`.
pub fn ideal_membership_dim(
    session: &mut Session,
    hsop: &[CovariantExpr],
    basis: &[BasisRecord],
    i: u32,
) -> Result<MembershipResult, PipelineError> {
    if let Some(e) = hsop.iter().find(|e| !e.is_invariant()) {
        return Err(PipelineError::NotInvariant(e.to_string()));
    }
    let n = session.n();
    let dim = dim_usize(n, i)?;
    let a_i_expected = if hsop.len() == super::krull_dimension(n) {
        DegreeSequence::new(hsop.iter().map(|e| e.degree()).collect())
            .ok()
            .and_then(|seq| numerator_coefficient(n, &seq, i))
    } else {
        None
    };
    let points = dim + session.config().margin(dim);
    let mut result = MembershipResult { degree: i, dim, dim_cap_h: 0, a_i_expected, points, rows_consumed: 0 };
    if dim == 0 {
        return Ok(result);
    }
    let exprs: Vec<CovariantExpr> = basis.iter().map(|r| r.expr.clone()).collect();
    session.ensure_values(&exprs, points)?;
    session.ensure_values(hsop, points)?;
    let basis_values: Vec<Vec<u32>> =
        exprs.iter().map(|e| session.values(e, points).map(<[u32]>::to_vec)).collect::<Result<_, _>>()?;
    let p = session.prime() as u64;
    let mut echelon = EchelonBasis::new(p, points)?;
    let mut spans: std::collections::HashMap<u32, Vec<Vec<usize>>> = Default::default();
    for h in hsop {
        if echelon.rank() >= dim || h.degree() > i {
            continue;
        }
        let j = i - h.degree();
        if !spans.contains_key(&j) {
            let usable: Vec<CovariantExpr> = exprs.iter().filter(|e| e.degree() <= j).cloned().collect();
            let monos = spanning_monomials(session, &usable, j)?;
            // indices into `usable` map back to `exprs` by position among the kept entries
            let map: Vec<usize> = (0..exprs.len()).filter(|&k| exprs[k].degree() <= j).collect();
            spans.insert(j, monos.into_iter().map(|m| m.into_iter().map(|k| map[k]).collect()).collect());
        }
        let hv = session.values(h, points)?.to_vec();
        for chunk in spans[&j].chunks(256) {
            if echelon.rank() >= dim {
                break;
            }
            let rows: Vec<Vec<u32>> = chunk
                .iter()
                .map(|mono| {
                    let mut row = hv.clone();
                    for &k in mono {
                        for (r, v) in row.iter_mut().zip(&basis_values[k]) {
                            *r = (*r as u64 * *v as u64 % p) as u32;
                        }
                    }
                    row
                })
                .collect();
            let (used, _) = echelon.extend_batch(&rows, Some(dim))?;
            result.rows_consumed += used;
        }
    }
    result.dim_cap_h = echelon.rank();
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedAtSamplingLevel,
    Refuted,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedAtSamplingLevel => "certified-at-sampling-level",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HsopReport {
    pub n: u32,
    pub prime: u32,
    pub seed: u64,
    pub candidates: Vec<(String, u32)>,
    pub expected_count: usize,
    pub degree_check: Option<String>,
    pub jacobian_ranks: Vec<usize>,
    pub nullcone: Option<NullconeSample>,
    pub membership: Vec<MembershipResult>,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
}

/// Runs the sampling-level certification of a candidate parameter system:
/// count and degree restrictions, Jacobian rank at five points, vanishing on
/// sampled nullforms and generic forms, and membership dimensions at the
/// requested degrees.
///
/// Refutation needs a definite reason: a wrong count, a violated degree
/// restriction, a Jacobian rank below the count at every sampled point, or
/// a membership dimension disagreeing with the Poincaré numerator.
pub fn certify_hsop(
    session: &mut Session,
    candidates: &[(String, CovariantExpr)],
    membership_degrees: &[u32],
    nullcone_trials: usize,
) -> Result<HsopReport, PipelineError> {
    let n = session.n();
    let expected = super::krull_dimension(n);
    let exprs: Vec<CovariantExpr> = candidates.iter().map(|(_, e)| e.clone()).collect();
    if let Some(e) = exprs.iter().find(|e| !e.is_invariant()) {
        return Err(PipelineError::NotInvariant(e.to_string()));
    }
    let mut report = HsopReport {
        n,
        prime: session.prime(),
        seed: session.config().seed,
        candidates: candidates.iter().map(|(name, e)| (name.clone(), e.degree())).collect(),
        expected_count: expected,
        degree_check: None,
        jacobian_ranks: Vec::new(),
        nullcone: None,
        membership: Vec::new(),
        verdict: Verdict::CertifiedAtSamplingLevel,
        reasons: Vec::new(),
    };
    if exprs.len() != expected {
        report.verdict = Verdict::Refuted;
        report.reasons.push(format!("{} invariants given, a parameter system has {}", exprs.len(), expected));
        return Ok(report);
    }
    let seq = DegreeSequence::new(exprs.iter().map(|e| e.degree()).collect())?;
    if n >= 3 {
        match check_sequence(n, &seq) {
            SequenceCheck::Pass => report.degree_check = Some("pass".into()),
            SequenceCheck::Fail { constraint, found } => {
                let msg = format!(
                    "at least {} degrees must be divisible by {}, found {}",
                    constraint.required, constraint.divisor, found
                );
                report.degree_check = Some(msg.clone());
                report.verdict = Verdict::Refuted;
                report.reasons.push(msg);
                return Ok(report);
            }
        }
    }
    let points = session.points(5).to_vec();
    for f in &points {
        report.jacobian_ranks.push(jacobian_rank(&exprs, f, session.catalog())?);
    }
    if report.jacobian_ranks.iter().all(|&r| r < expected) {
        report.verdict = Verdict::Refuted;
        report.reasons.push("Jacobian rank deficient at every sampled point".into());
        return Ok(report);
    }
    let sample = vanish_on_nullcone_sample(&exprs, session.catalog(), nullcone_trials, session.config().seed, session.prime())?;
    if !sample.nonzero_on_nullform.is_empty() {
        report.verdict = Verdict::Inconclusive;
        report.reasons.push("an invariant is nonzero on a nullform".into());
    }
    if sample.generic_all_vanish > 0 {
        report.verdict = Verdict::Inconclusive;
        report.reasons.push(format!("{} sampled forms are common zeros", sample.generic_all_vanish));
    }
    report.nullcone = Some(sample);
    if let Some(&top) = membership_degrees.iter().max() {
        let low = seq.min_entry();
        let (_, basis) = find_basic_invariants(session, top.saturating_sub(low))?;
        for &i in membership_degrees {
            let r = ideal_membership_dim(session, &exprs, &basis, i)?;
            if !r.consistent() {
                report.verdict = Verdict::Refuted;
                report.reasons.push(format!(
                    "degree {}: dim(I ∩ H) = {} but dim I = {} and a = {:?}",
                    i, r.dim_cap_h, r.dim, r.a_i_expected
                ));
            }
            report.membership.push(r);
        }
    }
    Ok(report)
}
