//! The maximum of the extended partition function over P(n): closed-form
//! maximizers and values keyed on n mod 4, a brute-force oracle over the
//! full enumeration, their cross-verification, and the related exact
//! inequality sweeps (log-concavity, the m = n border case, and the
//! injection inequality p(1)p(n) < p(n+1)).

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::inequality::Verdict;
use crate::partition::{enumerate_partitions, Partition};
use crate::table::{p_extended_prepared, BigCount, PartitionTable};

/// Default cap on brute-force enumeration; |P(50)| = 204226 keeps full
/// scans at interactive speed. Configurable upward by callers that accept
/// the cost.
pub const DEFAULT_ENUM_CAP: u64 = 50;

/// The maximal value of p over P(n) together with every partition
/// attaining it. Produced complete by the brute-force oracle; argmax is
/// sorted largest-first (enumeration order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxResult {
    pub n: u64,
    pub maxp: BigCount,
    pub argmax: Vec<Partition>,
}

impl Serialize for MaxResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MaxResult", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("maxp", &self.maxp.to_string())?;
        let argmax: Vec<String> = self.argmax.iter().map(|p| p.to_string()).collect();
        st.serialize_field("argmax", &argmax)?;
        st.end()
    }
}

/// The maximizing partition by residue of n mod 4, built from parts
/// 4, 5, 6:
///
///   n = 0 (mod 4): (4,...,4)      n = 1: (5,4,...,4)
///   n = 2 (mod 4): (6,4,...,4)    n = 3: (6,5,4,...,4)
///
/// For n in {1,2,3} the maximizer is (n) itself and for n = 0 the empty
/// partition. n = 7 is the unique tie — (7) and (4,3) — and is reported
/// as an error steering callers to the argmax interface.
pub fn canonical_max_partition(n: u64) -> Result<Partition> {
    if n == 7 {
        return Err(Error::TiedMaximum { n });
    }
    if n == 0 {
        return Ok(Partition::empty());
    }
    if n <= 3 {
        return Ok(Partition::new(vec![n as u32]).expect("positive part"));
    }
    let (head, rest): (&[u32], u64) = match n % 4 {
        0 => (&[], n),
        1 => (&[5], n - 5),
        2 => (&[6], n - 6),
        _ => (&[6, 5], n - 11),
    };
    let mut parts = head.to_vec();
    parts.extend(std::iter::repeat(4).take((rest / 4) as usize));
    Ok(Partition::new(parts).expect("positive parts"))
}

/// maxp(n) in closed form: table values up to n = 7, then powers of 5
/// times 1, 7, 11 or 77 by residue.
pub fn maxp_closed_form(n: u64) -> BigCount {
    const SMALL: [u64; 8] = [1, 1, 2, 3, 5, 7, 11, 15];
    if n <= 7 {
        return BigCount::from(SMALL[n as usize]);
    }
    let five = BigCount::from(5u32);
    let (factor, power) = match n % 4 {
        0 => (1u64, n / 4),
        1 => (7, (n - 5) / 4),
        2 => (11, (n - 6) / 4),
        _ => (77, (n - 11) / 4),
    };
    BigCount::from(factor) * five.pow(power as u32)
}

/// Exact maximum and complete argmax set by full enumeration of P(n).
/// Refuses n beyond `cap` rather than returning a truncated search.
pub fn maxp_bruteforce(n: u64, cap: u64, table: &mut PartitionTable) -> Result<MaxResult> {
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    table.ensure(n)?;
    Ok(maxp_bruteforce_prepared(n, table))
}

/// As `maxp_bruteforce` for a table already covering n.
fn maxp_bruteforce_prepared(n: u64, table: &PartitionTable) -> MaxResult {
    let mut best: BigCount = BigUint::one();
    let mut argmax: Vec<Partition> = Vec::new();
    for mu in enumerate_partitions(n) {
        let v = p_extended_prepared(&mu, table);
        match v.cmp(&best) {
            Ordering::Greater => {
                best = v;
                argmax.clear();
                argmax.push(mu);
            }
            Ordering::Equal => argmax.push(mu),
            Ordering::Less => {}
        }
    }
    MaxResult { n, maxp: best, argmax }
}

/// One row of the verification table: everything the brute force found,
/// with the exact p(n) alongside.
#[derive(Clone, Debug, Serialize)]
pub struct MaxTableRow {
    pub n: u64,
    #[serde(serialize_with = "ser_big")]
    pub p_n: BigCount,
    #[serde(serialize_with = "ser_big")]
    pub maxp: BigCount,
    pub argmax: Vec<String>,
}

fn ser_big<S: Serializer>(x: &BigCount, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A disagreement between oracle and closed form.
#[derive(Clone, Debug, Serialize)]
pub struct MaxMismatch {
    pub n: u64,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub n_max: u64,
    pub rows: Vec<MaxTableRow>,
    pub mismatches: Vec<MaxMismatch>,
    pub passed: bool,
}

/// For every 1 <= n <= n_max: the brute-force maximum equals the closed
/// form; the argmax is exactly the canonical maximizer (unique) except for
/// the two-element tie at n = 7.
pub fn verify_theorem2(n_max: u64, cap: u64) -> Result<Theorem2Report> {
    if n_max > cap {
        return Err(Error::EnumerationCap { n: n_max, cap });
    }
    let mut table = PartitionTable::new();
    table.ensure(n_max)?;

    let results: Vec<(MaxTableRow, Vec<MaxMismatch>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let brute = maxp_bruteforce_prepared(n, &table);
            let mut mismatches = Vec::new();
            let closed = maxp_closed_form(n);
            if brute.maxp != closed {
                mismatches.push(MaxMismatch {
                    n,
                    expected: closed.to_string(),
                    found: brute.maxp.to_string(),
                });
            }
            let expected_argmax: Vec<Partition> = if n == 7 {
                vec!["7".parse().unwrap(), "4,3".parse().unwrap()]
            } else {
                vec![canonical_max_partition(n).expect("n != 7")]
            };
            if brute.argmax != expected_argmax {
                mismatches.push(MaxMismatch {
                    n,
                    expected: format!(
                        "argmax {{{}}}",
                        expected_argmax.iter().map(|p| p.parenthesized()).collect::<Vec<_>>().join(", ")
                    ),
                    found: format!(
                        "argmax {{{}}}",
                        brute.argmax.iter().map(|p| p.parenthesized()).collect::<Vec<_>>().join(", ")
                    ),
                });
            }
            let row = MaxTableRow {
                n,
                p_n: table.p_known(n).clone(),
                maxp: brute.maxp,
                argmax: brute.argmax.iter().map(|p| p.to_string()).collect(),
            };
            (row, mismatches)
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut mismatches = Vec::new();
    for (row, mm) in results {
        rows.push(row);
        mismatches.extend(mm);
    }
    let passed = mismatches.is_empty();
    Ok(Theorem2Report { n_max, rows, mismatches, passed })
}

/// Exact verdict for p(n)^2 vs p(n-m) p(n+m). The published range is
/// n > m > 1; m = 1 and m = n are accepted for exploration. m > n is a
/// domain error.
pub fn log_concavity_check(n: u64, m: u64, table: &mut PartitionTable) -> Result<Verdict> {
    if m > n {
        return Err(Error::OffsetTooLarge { n, m });
    }
    table.ensure(n + m)?;
    let lhs = table.p_known(n) * table.p_known(n);
    let rhs = table.p_known(n - m) * table.p_known(n + m);
    Ok(match lhs.cmp(&rhs) {
        Ordering::Greater => Verdict::Greater,
        Ordering::Equal => Verdict::Equal,
        Ordering::Less => Verdict::Less,
    })
}

/// Exact verdict for the injection inequality: compares p(1) p(n) with
/// p(n+1); LESS is the expected strict outcome for every n >= 1.
pub fn injection_check(n: u64, table: &mut PartitionTable) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::NonPositive { n });
    }
    table.ensure(n + 1)?;
    let lhs = table.p_known(1) * table.p_known(n);
    Ok(match lhs.cmp(table.p_known(n + 1)) {
        Ordering::Greater => Verdict::Greater,
        Ordering::Equal => Verdict::Equal,
        Ordering::Less => Verdict::Less,
    })
}

/// A non-GREATER outcome found by a sweep, as (n, m, verdict).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcavityViolation {
    pub n: u64,
    pub m: u64,
    pub outcome: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogConcavityReport {
    pub n_max: u64,
    /// Violations of p(n)^2 > p(n-m) p(n+m) with 1 < m < n and 26 <= n:
    /// must be empty.
    pub interior_violations: Vec<ConcavityViolation>,
    /// All violations with n <= 25 over the full exploratory range
    /// 1 <= m <= n: known to be nonempty.
    pub small_n_violations: Vec<ConcavityViolation>,
    /// Violations of the border case p(n)^2 > p(2n), 4 <= n <= border_max.
    pub border_max: u64,
    pub border_violations: Vec<u64>,
    /// n <= n_max with p(1) p(n) >= p(n+1) (none expected).
    pub injection_violations: Vec<u64>,
    pub passed: bool,
}

/// Runs every exact sweep of the concluding inequalities:
/// interior log-concavity for 26 <= n <= n_max, the full exploratory scan
/// for n <= 25, the m = n border case up to border_max, and the injection
/// inequality up to n_max.
pub fn sweep_log_concavity(n_max: u64, border_max: u64) -> Result<LogConcavityReport> {
    let mut table = PartitionTable::new();
    table.ensure(2 * n_max.max(border_max) + 1)?;
    let table = &table;

    let mut interior_violations: Vec<ConcavityViolation> = (26..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let pn2 = table.p_known(n) * table.p_known(n);
            (2..n)
                .filter_map(|m| {
                    let rhs = table.p_known(n - m) * table.p_known(n + m);
                    match pn2.cmp(&rhs) {
                        Ordering::Greater => None,
                        Ordering::Equal => Some(ConcavityViolation { n, m, outcome: Verdict::Equal }),
                        Ordering::Less => Some(ConcavityViolation { n, m, outcome: Verdict::Less }),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    interior_violations.sort_unstable_by_key(|v| (v.n, v.m));

    let mut small_n_violations = Vec::new();
    for n in 1..=25u64.min(n_max) {
        let pn2 = table.p_known(n) * table.p_known(n);
        for m in 1..=n {
            let rhs = table.p_known(n - m) * table.p_known(n + m);
            match pn2.cmp(&rhs) {
                Ordering::Greater => {}
                Ordering::Equal => small_n_violations.push(ConcavityViolation { n, m, outcome: Verdict::Equal }),
                Ordering::Less => small_n_violations.push(ConcavityViolation { n, m, outcome: Verdict::Less }),
            }
        }
    }

    let border_violations: Vec<u64> = (4..=border_max)
        .filter(|&n| {
            let lhs = table.p_known(n) * table.p_known(n);
            lhs <= *table.p_known(2 * n)
        })
        .collect();

    let injection_violations: Vec<u64> = (1..=n_max)
        .filter(|&n| {
            let lhs = table.p_known(1) * table.p_known(n);
            lhs >= *table.p_known(n + 1)
        })
        .collect();

    let passed = interior_violations.is_empty()
        && !small_n_violations.is_empty()
        && border_violations.is_empty()
        && injection_violations.is_empty();
    Ok(LogConcavityReport {
        n_max,
        interior_violations,
        small_n_violations,
        border_max,
        border_violations,
        injection_violations,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(text: &str) -> Partition {
        text.parse().unwrap()
    }

    fn big(n: u64) -> BigCount {
        BigCount::from(n)
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_max_partition(12).unwrap(), part("4,4,4"));
        assert_eq!(canonical_max_partition(13).unwrap(), part("5,4,4"));
        assert_eq!(canonical_max_partition(19).unwrap(), part("6,5,4,4"));
        assert_eq!(canonical_max_partition(0).unwrap(), Partition::empty());
        for n in 1..=3u64 {
            assert_eq!(canonical_max_partition(n).unwrap().parts(), &[n as u32]);
        }
        assert!(matches!(canonical_max_partition(7), Err(Error::TiedMaximum { n: 7 })));
    }

    #[test]
    fn canonical_weight_and_shape() {
        for n in 4..=200u64 {
            if n == 7 {
                continue;
            }
            let p = canonical_max_partition(n).unwrap();
            assert_eq!(p.weight(), n);
            assert!(p.parts().iter().all(|&x| (4..=6).contains(&x)));
            assert!(p.multiplicity(5) <= 1 && p.multiplicity(6) <= 1);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(maxp_closed_form(16), big(625));
        assert_eq!(maxp_closed_form(14), big(275));
        assert_eq!(maxp_closed_form(19), big(1925));
        assert_eq!(maxp_closed_form(0), big(1));
        let expected_small = [1u64, 1, 2, 3, 5, 7, 11, 15];
        for (n, &v) in expected_small.iter().enumerate() {
            assert_eq!(maxp_closed_form(n as u64), big(v));
        }
    }

    #[test]
    fn closed_form_recurrence() {
        for n in 8..=120u64 {
            assert_eq!(maxp_closed_form(n + 4), big(5u64) * maxp_closed_form(n));
        }
    }

    #[test]
    fn brute_force_examples() {
        let mut t = PartitionTable::new();
        let r = maxp_bruteforce(7, DEFAULT_ENUM_CAP, &mut t).unwrap();
        assert_eq!(r.maxp, big(15));
        assert_eq!(r.argmax, vec![part("7"), part("4,3")]);

        let r = maxp_bruteforce(8, DEFAULT_ENUM_CAP, &mut t).unwrap();
        assert_eq!(r.maxp, big(25));
        assert_eq!(r.argmax, vec![part("4,4")]);

        let r = maxp_bruteforce(0, DEFAULT_ENUM_CAP, &mut t).unwrap();
        assert_eq!(r.maxp, big(1));
        assert_eq!(r.argmax, vec![Partition::empty()]);
    }

    #[test]
    fn brute_force_cap_is_a_refusal() {
        let mut t = PartitionTable::new();
        match maxp_bruteforce(51, 50, &mut t) {
            Err(Error::EnumerationCap { n: 51, cap: 50 }) => {}
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn theorem2_to_20() {
        let r = verify_theorem2(20, DEFAULT_ENUM_CAP).unwrap();
        assert!(r.passed, "mismatches: {:?}", r.mismatches);
        let row14 = &r.rows[13];
        assert_eq!(row14.n, 14);
        assert_eq!(row14.p_n, big(135));
        assert_eq!(row14.maxp, big(275));
        assert_eq!(row14.argmax, vec!["6,4,4".to_string()]);
    }

    #[test]
    fn log_concavity_examples() {
        let mut t = PartitionTable::new();
        // the classic small violation
        assert_eq!(log_concavity_check(3, 1, &mut t).unwrap(), Verdict::Less);
        assert_eq!(log_concavity_check(30, 5, &mut t).unwrap(), Verdict::Greater);
        // border case
        assert_eq!(log_concavity_check(4, 4, &mut t).unwrap(), Verdict::Greater);
        assert_eq!(log_concavity_check(3, 3, &mut t).unwrap(), Verdict::Less);
        assert!(matches!(
            log_concavity_check(3, 4, &mut t),
            Err(Error::OffsetTooLarge { n: 3, m: 4 })
        ));
    }

    #[test]
    fn injection_examples() {
        let mut t = PartitionTable::new();
        assert_eq!(injection_check(1, &mut t).unwrap(), Verdict::Less);
        assert_eq!(injection_check(13, &mut t).unwrap(), Verdict::Less);
        assert!(injection_check(0, &mut t).is_err());
    }

    #[test]
    fn concavity_sweep_small() {
        let r = sweep_log_concavity(60, 30).unwrap();
        assert!(r.passed);
        assert!(r.interior_violations.is_empty());
        assert!(r.small_n_violations.iter().any(|v| (v.n, v.m) == (3, 1)));
        assert!(r.border_violations.is_empty());
        assert!(r.injection_violations.is_empty());
    }
}
