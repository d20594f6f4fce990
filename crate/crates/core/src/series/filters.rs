use num_integer::Integer;
use serde::Serialize;

use super::DegreeSequence;

/// How many degrees of a parameter system must be divisible by `divisor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeConstraint {
    pub t: u32,
    pub required: u32,
    pub divisor: u32,
}

/// Minimal number of parameter degrees divisible by `2t` (odd `n`) or `t` (even `n`).
///
/// For odd `n`, `j` is minimal with `gcd(n - 2j, t) = 1` and the count is
/// `floor((n - j)/t)`. For even `n`, `j ≤ n/2` is minimal with `gcd(n/2 - j, t) = 1`.
pub fn min_degree_count(n: u32, t: u32) -> DegreeConstraint {
    assert!(t >= 2, "t must be at least 2");
    let (n, t) = (n as i64, t as i64);
    let (j, divisor) = if n % 2 == 1 {
        let j = (0..=n).find(|j| (n - 2 * j).gcd(&t) == 1).expect("j = (n-1)/2 works");
        (j, 2 * t)
    } else {
        let j = (0..=n / 2).find(|j| (n / 2 - j).gcd(&t) == 1).expect("j = n/2 - 1 works");
        (j, t)
    };
    DegreeConstraint { t: t as u32, required: ((n - j) / t) as u32, divisor: divisor as u32 }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SequenceCheck {
    Pass,
    Fail { constraint: DegreeConstraint, found: u32 },
}

impl SequenceCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SequenceCheck::Pass)
    }
}

/// Tests `seq` against the divisibility constraints for every `t` in `2..=max(seq)`.
/// Reports the first violated `t`.
pub fn check_sequence(n: u32, seq: &DegreeSequence) -> SequenceCheck {
    for t in 2..=seq.max_entry().max(2) {
        let c = min_degree_count(n, t);
        if c.required == 0 {
            continue;
        }
        let found = seq.degrees().iter().filter(|&&d| d % c.divisor == 0).count() as u32;
        if found < c.required {
            return SequenceCheck::Fail { constraint: c, found };
        }
    }
    SequenceCheck::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn nonic_counts() {
        let c = |t| {
            let k = min_degree_count(9, t);
            (k.required, k.divisor)
        };
        assert_eq!(c(2), (4, 4));
        assert_eq!(c(3), (2, 6));
        assert_eq!(c(4), (2, 8));
        assert_eq!(c(5), (1, 10));
        assert_eq!(c(6), (1, 12));
        assert_eq!(c(9), (0, 18));
    }

    #[test]
    fn even_order_counts() {
        // n = 6: j = 0 for t = 2 since gcd(3, 2) = 1
        let k = min_degree_count(6, 2);
        assert_eq!((k.required, k.divisor), (3, 2));
        // t = 3: gcd(3, 3) = 3, so j = 1 and floor(5/3) = 1
        let k = min_degree_count(6, 3);
        assert_eq!((k.required, k.divisor), (1, 3));
    }

    #[test]
    fn table_rows_pass() {
        assert!(check_sequence(9, &seq(&[4, 8, 10, 12, 12, 14, 16])).passed());
        assert!(check_sequence(9, &seq(&[4, 4, 8, 10, 12, 14, 48])).passed());
        assert!(check_sequence(7, &seq(&[4, 8, 12, 12, 20])).passed());
        assert!(check_sequence(6, &seq(&[2, 4, 6, 10])).passed());
    }

    #[test]
    fn violations_report_first_t() {
        // only 12 is divisible by 6
        match check_sequence(9, &seq(&[4, 4, 4, 10, 12, 14, 16])) {
            SequenceCheck::Fail { constraint, found } => {
                assert_eq!((constraint.t, constraint.divisor, constraint.required, found), (3, 6, 2, 1));
            }
            SequenceCheck::Pass => panic!("should fail"),
        }
        match check_sequence(9, &seq(&[4, 8, 12, 12, 12, 14, 16])) {
            SequenceCheck::Fail { constraint, found } => assert_eq!((constraint.t, found), (5, 0)),
            SequenceCheck::Pass => panic!("should fail"),
        }
    }
}
