use rayon::prelude::*;

use super::{
    check_sequence, invariant_dimension, poincare_series, reference_rational, to_rational, to_rational_exact,
    DegreeSequence, PoincareRational, SeriesError,
};

/// A rewriting of the Poincaré series over a given denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ecriture {
    pub rational: PoincareRational,
}

impl Ecriture {
    pub fn degrees(&self) -> &DegreeSequence {
        self.rational.denominator()
    }

    pub fn numerator_degree(&self) -> usize {
        self.rational.numerator_degree()
    }
}

/// Known parameter-system degrees used to bound the search.
pub fn default_seed(n: u32) -> Option<DegreeSequence> {
    let v: &[u32] = match n {
        3 => &[4],
        4 => &[2, 3],
        5 => &[4, 8, 12],
        6 => &[2, 4, 6, 10],
        7 => &[4, 8, 12, 12, 20],
        8 => &[2, 3, 4, 5, 6, 7],
        9 => &[4, 8, 10, 12, 12, 14, 16],
        _ => return None,
    };
    Some(DegreeSequence::new(v.to_vec()).expect("valid seed"))
}

fn enumerate(domain: &[u32], slots: usize, bound: u128, out: &mut Vec<Vec<u32>>) {
    fn rec(domain: &[u32], start: usize, slots: usize, prod: u128, bound: u128, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            out.push(cur.clone());
            return;
        }
        for (i, &d) in domain.iter().enumerate().skip(start) {
            let floor = (d as u128).checked_pow(slots as u32).and_then(|p| p.checked_mul(prod));
            if floor.map_or(true, |f| f > bound) {
                break;
            }
            cur.push(d);
            rec(domain, i, slots - 1, prod * d as u128, bound, cur, out);
            cur.pop();
        }
    }
    rec(domain, 0, slots, 1, bound, &mut Vec::new(), out);
}

/// All ways of writing the Poincaré series of `V_n` over `n - 2` denominator
/// factors with minimal product of degrees (equivalently minimal `a(1)`),
/// subject to the divisibility constraints on parameter degrees.
///
/// The seed bounds the product; `None` selects a known seed for `3 ≤ n ≤ 9`.
/// For `n = 7` and `n = 9` candidates are checked by exact division against
/// the seed's rational form, otherwise by the guard window.
pub fn ecriture_minimale_search(n: u32, seed: Option<&DegreeSequence>) -> Result<Vec<Ecriture>, SeriesError> {
    if n < 3 {
        return Err(SeriesError::BadOrder(n));
    }
    let seed = match seed {
        Some(s) => s.clone(),
        None => default_seed(n).ok_or(SeriesError::MissingSeed(n))?,
    };
    let k = n as usize - 2;
    if seed.len() != k {
        return Err(SeriesError::SeedLength { expected: k, found: seed.len() });
    }
    let bound = seed.product();
    let dmin = (1..=seed.min_entry()).find(|&d| invariant_dimension(n, d) > 0u32.into()).unwrap_or(seed.min_entry());
    let max_degree = (bound / (dmin as u128).pow(k as u32 - 1)) as u32;
    let table = poincare_series(n, max_degree);
    let domain = table.positive_degrees();

    let mut tuples = Vec::new();
    enumerate(&domain, k, bound, &mut tuples);
    let candidates: Vec<DegreeSequence> = tuples
        .into_iter()
        .map(|t| DegreeSequence::new(t).expect("positive degrees"))
        .filter(|s| check_sequence(n, s).passed())
        .collect();

    let accepted: Vec<PoincareRational> = if matches!(n, 7 | 9) {
        let reference = reference_rational(n, &seed)?;
        candidates.par_iter().filter_map(|s| to_rational_exact(&reference, s).accepted()).collect()
    } else {
        let depth = candidates.iter().map(|s| s.sum() + s.max_entry()).max().unwrap_or(0);
        let deep = poincare_series(n, depth.max(max_degree));
        candidates
            .par_iter()
            .map(|s| to_rational(&deep, s).map(|r| r.accepted()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect()
    };

    let Some(best) = accepted.iter().map(|p| p.denominator().product()).min() else {
        return Ok(Vec::new());
    };
    let mut out: Vec<Ecriture> = accepted
        .into_iter()
        .filter(|p| p.denominator().product() == best)
        .map(|rational| Ecriture { rational })
        .collect();
    out.sort_by(|a, b| a.degrees().cmp(b.degrees()));
    Ok(out)
}
