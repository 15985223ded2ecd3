//! Exact verdicts for p(a)p(b) vs p(a+b), the exceptional/equality pair
//! scan, the monotone threshold functions S_a and T_a with their gap
//! condition, the per-base thresholds lambda_a, and the full verification
//! pipeline combining the analytic criterion with exhaustive exact checks.
//!
//! The analytic side: with b = lambda*a (lambda >= 1),
//!
//!   S_a(lambda) = (1 + 1/sqrt(a+lambda a)) / ((1 - 1/sqrt(a))(1 - 1/sqrt(lambda a)))
//!   T_a(lambda) = pi/6 (sqrt(24a-1) + sqrt(24 lambda a - 1) - sqrt(24(a + lambda a) - 1))
//!
//! and gap(a, lambda) = T_a(lambda) - log(2a sqrt 3) - log(S_a(lambda)) > 0
//! implies p(a)p(b) > p(a+b). S_a is decreasing and T_a increasing in
//! lambda, so the gap is increasing: one sign change at lambda_a.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::check::{
    check_positive_extended, escalating_sign, CheckOutcome, MarginEval, Precision,
    StrictInequality,
};
use crate::error::{Error, Result};
use crate::scalar::{DoubleDouble, Real};
use crate::table::{BigCount, PartitionTable};

/// Exact three-way outcome of comparing p(a)p(b) with p(a+b).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Greater,
    Equal,
    Less,
}

impl Verdict {
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Greater => ">",
            Verdict::Equal => "=",
            Verdict::Less => "<",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Greater => "GREATER",
            Verdict::Equal => "EQUAL",
            Verdict::Less => "LESS",
        }
    }
}

/// Verdict with the exactly computed sides. Determined purely by integer
/// comparison, never by floating point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityVerdict {
    pub a: u64,
    pub b: u64,
    /// p(a) * p(b)
    pub lhs: BigCount,
    /// p(a + b)
    pub rhs: BigCount,
    pub outcome: Verdict,
}

impl Serialize for InequalityVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("InequalityVerdict", 5)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("lhs", &self.lhs.to_string())?;
        st.serialize_field("rhs", &self.rhs.to_string())?;
        st.serialize_field("outcome", &self.outcome)?;
        st.end()
    }
}

/// Exact verdict for p(a)p(b) vs p(a+b). Accepts a = 1 or b = 1 (the
/// product then always loses); rejects zero.
pub fn compare_products(a: u64, b: u64, table: &mut PartitionTable) -> Result<InequalityVerdict> {
    if a == 0 || b == 0 {
        return Err(Error::NonPositive { n: 0 });
    }
    table.ensure(a + b)?;
    let lhs = table.p_known(a) * table.p_known(b);
    let rhs = table.p_known(a + b).clone();
    let outcome = match lhs.cmp(&rhs) {
        Ordering::Greater => Verdict::Greater,
        Ordering::Equal => Verdict::Equal,
        Ordering::Less => Verdict::Less,
    };
    Ok(InequalityVerdict { a, b, lhs, rhs, outcome })
}

/// The pairs 1 < a <= b with a+b <= scan_bound where the product inequality
/// fails, and where it holds with equality. Pairs are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalSets {
    pub failures: Vec<(u64, u64)>,
    pub equalities: Vec<(u64, u64)>,
    pub scan_bound: u64,
}

pub fn scan_exceptional(sum_bound: u64, table: &mut PartitionTable) -> Result<ExceptionalSets> {
    assert!(sum_bound >= 4, "scan needs at least one pair");
    table.ensure(sum_bound)?;
    let mut failures = Vec::new();
    let mut equalities = Vec::new();
    for a in 2..=sum_bound / 2 {
        for b in a..=(sum_bound - a) {
            let lhs = table.p_known(a) * table.p_known(b);
            match lhs.cmp(table.p_known(a + b)) {
                Ordering::Less => failures.push((a, b)),
                Ordering::Equal => equalities.push((a, b)),
                Ordering::Greater => {}
            }
        }
    }
    failures.sort_unstable();
    equalities.sort_unstable();
    Ok(ExceptionalSets { failures, equalities, scan_bound: sum_bound })
}

/// S_a(lambda); requires a >= 2 and lambda >= 1 so both denominator
/// factors stay positive.
pub fn s_ratio<R: Real>(a: u64, lambda: f64) -> Result<R> {
    check_domain(a, lambda)?;
    let one = R::one();
    let a_r = R::from_u64(a);
    let la = R::from_f64(lambda) * a_r;
    Ok((one + one / (a_r + la).sqrt()) / ((one - one / a_r.sqrt()) * (one - one / la.sqrt())))
}

/// T_a(lambda).
pub fn t_diff<R: Real>(a: u64, lambda: f64) -> Result<R> {
    check_domain(a, lambda)?;
    let one = R::one();
    let lam = R::from_f64(lambda);
    let t_a = R::from_u64(24 * a - 1).sqrt();
    let t_la = (R::from_u64(24 * a) * lam - one).sqrt();
    let t_ab = (R::from_u64(24 * a) * (one + lam) - one).sqrt();
    Ok(R::pi() / R::from_u64(6) * (t_a + t_la - t_ab))
}

/// gap(a, lambda) = T_a(lambda) - log(2a sqrt 3) - log(S_a(lambda));
/// positive gap implies the product inequality at (a, b = lambda a).
pub fn gap<R: Real>(a: u64, lambda: f64) -> Result<R> {
    let t: R = t_diff(a, lambda)?;
    let s: R = s_ratio(a, lambda)?;
    Ok(t - (R::from_u64(2 * a) * R::from_u64(3).sqrt()).ln() - s.ln())
}

fn check_domain(a: u64, lambda: f64) -> Result<()> {
    if a < 2 {
        return Err(Error::BaseTooSmall { a });
    }
    if !(lambda >= 1.0) {
        return Err(Error::RatioTooSmall { lambda });
    }
    Ok(())
}

const GAP_OPS: f64 = 40.0;

fn gap_margin<R: Real>(a: u64, lambda: f64) -> Result<MarginEval> {
    let t: R = t_diff(a, lambda)?;
    let rhs = (R::from_u64(2 * a) * R::from_u64(3).sqrt()).ln() + s_ratio::<R>(a, lambda)?.ln();
    let scale = if t.abs() > rhs.abs() { t.abs() } else { rhs.abs() };
    Ok(MarginEval::with_ops(t - rhs, scale, GAP_OPS))
}

/// Sign of gap(a, lambda) under the escalation policy; also reports
/// whether extended precision was consulted.
fn gap_sign(a: u64, lambda: f64) -> Result<(Ordering, bool)> {
    let d = gap_margin::<f64>(a, lambda)?;
    let mut escalation_err = None;
    let (ord, escalated) = escalating_sign(d, || match gap_margin::<DoubleDouble>(a, lambda) {
        Ok(m) => m,
        Err(e) => {
            escalation_err = Some(e);
            MarginEval { margin: 0.0, scale: 1.0, rounding_bound: f64::INFINITY }
        }
    });
    match escalation_err {
        Some(e) => Err(e),
        None => Ok((ord, escalated)),
    }
}

/// The root of the gap at fixed a: gap(a, lambda_a) = 0, bracketed by
/// bisection on the strictly increasing gap.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaThreshold {
    pub a: u64,
    pub lambda: f64,
    /// Final bisection bracket (lo, hi) with gap(lo) < 0 < gap(hi).
    pub bracket: (f64, f64),
    pub precision_used: Precision,
}

/// Default bisection tolerance; reproducing the two-decimal table needs
/// only 1e-2.
pub const DEFAULT_BISECTION_TOL: f64 = 1e-9;

pub fn lambda_threshold(a: u64, tol: f64) -> Result<LambdaThreshold> {
    if !(2..=8).contains(&a) {
        return Err(Error::ThresholdRange { a });
    }
    assert!(tol > 0.0, "tolerance must be positive");

    let mut escalated = false;
    let mut sign = |lambda: f64| -> Result<Ordering> {
        let (ord, esc) = gap_sign(a, lambda)?;
        escalated |= esc;
        Ok(ord)
    };

    let mut lo = 1.0f64;
    if sign(lo)? == Ordering::Greater {
        // cannot happen for 2 <= a <= 8; the gap at lambda = 1 is negative
        return Err(Error::BracketNotFound { a, hi: lo });
    }
    let mut hi = 2.0f64;
    while sign(hi)? != Ordering::Greater {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::BracketNotFound { a, hi });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if sign(mid)? == Ordering::Greater {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(LambdaThreshold {
        a,
        lambda: 0.5 * (lo + hi),
        bracket: (lo, hi),
        precision_used: if escalated { Precision::Extended } else { Precision::Double },
    })
}

/// One base's result in the large-a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct GapAtOne {
    pub a: u64,
    pub check: StrictInequality,
}

/// gap(a, 1) > 0 for every 9 <= a <= a_max, decided at extended precision;
/// a nonpositive or marginal entry is a verification failure.
#[derive(Clone, Debug, Serialize)]
pub struct LargeAReport {
    pub a_lo: u64,
    pub a_hi: u64,
    pub outcome: CheckOutcome,
    pub min_margin: GapAtOne,
    pub failures: Vec<GapAtOne>,
}

pub fn verify_large_a(a_max: u64) -> Result<LargeAReport> {
    assert!(a_max >= 9);
    let checks: Vec<GapAtOne> = (9..=a_max)
        .into_par_iter()
        .map(|a| {
            let check = check_positive_extended(gap_margin::<DoubleDouble>(a, 1.0)?);
            Ok(GapAtOne { a, check })
        })
        .collect::<Result<_>>()?;
    let min_margin = checks
        .iter()
        .min_by(|x, y| x.check.margin.total_cmp(&y.check.margin))
        .expect("nonempty sweep")
        .clone();
    let failures: Vec<GapAtOne> =
        checks.into_iter().filter(|c| c.check.outcome != CheckOutcome::Pass).collect();
    let outcome = if failures.iter().any(|f| f.check.outcome == CheckOutcome::Fail) {
        CheckOutcome::Fail
    } else if failures.is_empty() {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Marginal
    };
    Ok(LargeAReport { a_lo: 9, a_hi: a_max, outcome, min_margin, failures })
}

/// Pairs where the inequality fails, from the published classification:
/// all 1 < a <= b with p(a)p(b) < p(a+b).
pub const EXPECTED_FAILURES: [(u64, u64); 6] = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 3), (3, 5)];

/// Pairs with p(a)p(b) = p(a+b): the two small equalities plus {2,7}.
pub const EXPECTED_EQUALITIES: [(u64, u64); 3] = [(2, 6), (2, 7), (3, 4)];

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Config {
    /// Upper bound of the analytic gap(a,1) sweep.
    pub large_a_max: u64,
    /// Bisection tolerance for the lambda thresholds.
    pub tol: f64,
    /// Extra b's checked beyond ceil(lambda_a * a) to absorb threshold
    /// rounding.
    pub safety: u64,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Theorem1Config { large_a_max: 10_000, tol: DEFAULT_BISECTION_TOL, safety: 2 }
    }
}

/// Exhaustively checked region for one base a: every b in [a, b_max].
#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveRegion {
    pub a: u64,
    pub lambda: f64,
    pub b_max: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub config: Theorem1Config,
    pub large_a: LargeAReport,
    pub thresholds: Vec<LambdaThreshold>,
    pub regions: Vec<ExhaustiveRegion>,
    pub failures: Vec<(u64, u64)>,
    pub equalities: Vec<(u64, u64)>,
    pub sets_match_expected: bool,
    /// Verdicts in the exhaustive region with a+b > 8 that are not strictly
    /// greater and are not the equality pair {2,7}.
    pub tail_violations: Vec<InequalityVerdict>,
    /// Exact GREATER spot-checks just above each threshold that came out
    /// otherwise (analytic criterion contradicted; must stay empty).
    pub consistency_violations: Vec<InequalityVerdict>,
    pub outcome: CheckOutcome,
}

/// The full pipeline: analytic sweep for a >= 9, thresholds and exhaustive
/// exact verification for 2 <= a <= 8, set comparison against the expected
/// classification, and the a+b > 8 tail condition.
pub fn verify_theorem1(config: Theorem1Config) -> Result<Theorem1Report> {
    let large_a = verify_large_a(config.large_a_max)?;

    let mut table = PartitionTable::new();
    let mut thresholds = Vec::new();
    let mut regions = Vec::new();
    let mut failures = Vec::new();
    let mut equalities = Vec::new();
    let mut tail_violations = Vec::new();
    let mut consistency_violations = Vec::new();

    for a in 2..=8u64 {
        let thr = lambda_threshold(a, config.tol)?;
        let b_max = (thr.lambda * a as f64).ceil() as u64 + config.safety;
        regions.push(ExhaustiveRegion { a, lambda: thr.lambda, b_max });

        for b in a..=b_max {
            let v = compare_products(a, b, &mut table)?;
            match v.outcome {
                Verdict::Less => failures.push((a, b)),
                Verdict::Equal => equalities.push((a, b)),
                Verdict::Greater => {}
            }
            if a + b > 8 && v.outcome != Verdict::Greater && (a, b) != (2, 7) {
                tail_violations.push(v);
            }
        }

        // the analytic criterion is sufficient: every integer b just above
        // lambda_a * a must be strictly greater under exact arithmetic
        let spot_lo = (thr.lambda * a as f64).floor() as u64 + 1;
        for b in spot_lo..=(5 * a).max(spot_lo) {
            let v = compare_products(a, b, &mut table)?;
            if v.outcome != Verdict::Greater {
                consistency_violations.push(v);
            }
        }
        thresholds.push(thr);
    }

    failures.sort_unstable();
    equalities.sort_unstable();
    let sets_match_expected =
        failures == EXPECTED_FAILURES.to_vec() && equalities == EXPECTED_EQUALITIES.to_vec();

    let outcome = if !sets_match_expected
        || !tail_violations.is_empty()
        || !consistency_violations.is_empty()
        || large_a.outcome == CheckOutcome::Fail
    {
        CheckOutcome::Fail
    } else if large_a.outcome == CheckOutcome::Marginal {
        CheckOutcome::Marginal
    } else {
        CheckOutcome::Pass
    };

    Ok(Theorem1Report {
        config,
        large_a,
        thresholds,
        regions,
        failures,
        equalities,
        sets_match_expected,
        tail_violations,
        consistency_violations,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Extended;

    fn big(n: u64) -> BigCount {
        BigCount::from(n)
    }

    #[test]
    fn verdict_examples() {
        let mut t = PartitionTable::new();
        let v = compare_products(2, 7, &mut t).unwrap();
        assert_eq!((v.outcome, &v.lhs, &v.rhs), (Verdict::Equal, &big(30), &big(30)));
        let v = compare_products(3, 5, &mut t).unwrap();
        assert_eq!((v.outcome, &v.lhs, &v.rhs), (Verdict::Less, &big(21), &big(22)));
        let v = compare_products(4, 5, &mut t).unwrap();
        assert_eq!((v.outcome, &v.lhs, &v.rhs), (Verdict::Greater, &big(35), &big(30)));
        let v = compare_products(3, 4, &mut t).unwrap();
        assert_eq!(v.outcome, Verdict::Equal);
        assert_eq!(compare_products(10, 10, &mut t).unwrap().lhs, big(1764));
    }

    #[test]
    fn a_equal_one_always_loses() {
        let mut t = PartitionTable::new();
        for b in 1..60u64 {
            assert_eq!(compare_products(1, b, &mut t).unwrap().outcome, Verdict::Less);
        }
        assert!(compare_products(0, 3, &mut t).is_err());
    }

    #[test]
    fn verdict_is_symmetric() {
        let mut t = PartitionTable::new();
        for a in 1..=12u64 {
            for b in a..=12 {
                let x = compare_products(a, b, &mut t).unwrap();
                let y = compare_products(b, a, &mut t).unwrap();
                assert_eq!(x.outcome, y.outcome);
                assert_eq!(x.lhs, y.lhs);
            }
        }
    }

    #[test]
    fn scan_smallest_bound() {
        let mut t = PartitionTable::new();
        let s = scan_exceptional(4, &mut t).unwrap();
        assert_eq!(s.failures, vec![(2, 2)]);
        assert!(s.equalities.is_empty());
    }

    #[test]
    fn scan_to_sixty_matches_expected_sets() {
        let mut t = PartitionTable::new();
        let s = scan_exceptional(60, &mut t).unwrap();
        assert_eq!(s.failures, EXPECTED_FAILURES.to_vec());
        assert_eq!(s.equalities, EXPECTED_EQUALITIES.to_vec());
    }

    #[test]
    fn s_and_t_goldens() {
        let s: f64 = s_ratio(4, 1.0).unwrap();
        assert!((s - 5.41421356237309504880).abs() < 1e-14);
        let s: Extended = s_ratio(2, 1.0).unwrap();
        assert!((s.to_f64() - 17.4852813742385702928).abs() < 1e-13);
        let t: f64 = t_diff(2, 1.0).unwrap();
        assert!((t - 2.07581512443926608507).abs() < 1e-14);
        let g: Extended = gap(9, 1.0).unwrap();
        assert!((g.to_f64() - 0.02248963020241032679).abs() < 1e-14);
    }

    #[test]
    fn t_at_one_positive() {
        for a in 2..200u64 {
            assert!(t_diff::<f64>(a, 1.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn s_approaches_its_limit() {
        for a in [2u64, 4, 9] {
            let s: f64 = s_ratio(a, 1e6).unwrap();
            let limit = 1.0 / (1.0 - 1.0 / (a as f64).sqrt());
            assert!((s - limit).abs() / limit < 0.01, "a={a}: {s} vs {limit}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(s_ratio::<f64>(1, 2.0), Err(Error::BaseTooSmall { a: 1 })));
        assert!(matches!(s_ratio::<f64>(4, 0.5), Err(Error::RatioTooSmall { .. })));
        assert!(matches!(t_diff::<f64>(0, 1.0), Err(Error::BaseTooSmall { .. })));
        assert!(matches!(gap::<f64>(4, f64::NAN), Err(Error::RatioTooSmall { .. })));
        assert!(matches!(lambda_threshold(9, 1e-6), Err(Error::ThresholdRange { a: 9 })));
    }

    #[test]
    fn monotone_on_grid_both_precisions() {
        fn grid() -> Vec<f64> {
            (0..=40).map(|i| 200f64.powf(i as f64 / 40.0)).collect()
        }
        for a in 2..=8u64 {
            let g = grid();
            for w in g.windows(2) {
                let (l0, l1) = (w[0], w[1]);
                assert!(s_ratio::<f64>(a, l1).unwrap() < s_ratio::<f64>(a, l0).unwrap());
                assert!(t_diff::<f64>(a, l1).unwrap() > t_diff::<f64>(a, l0).unwrap());
                assert!(s_ratio::<Extended>(a, l1).unwrap() < s_ratio::<Extended>(a, l0).unwrap());
                assert!(t_diff::<Extended>(a, l1).unwrap() > t_diff::<Extended>(a, l0).unwrap());
            }
        }
    }

    #[test]
    fn thresholds_match_frozen_roots() {
        // roots of the gap, frozen from an independent high-precision solve
        let expected = [
            (2, 57.0817373615746319),
            (3, 7.42584971480406694),
            (4, 3.62092157591463818),
            (5, 2.36036449244131011),
            (6, 1.74634810235270509),
            (7, 1.38622688060074081),
            (8, 1.15045357168298886),
        ];
        for (a, want) in expected {
            let thr = lambda_threshold(a, 1e-9).unwrap();
            assert!(
                (thr.lambda - want).abs() < 2e-9,
                "a={a}: got {} want {want}",
                thr.lambda
            );
            assert!(thr.bracket.0 < want && want < thr.bracket.1);
        }
    }

    #[test]
    fn threshold_tolerance_is_respected() {
        let thr = lambda_threshold(4, 1e-3).unwrap();
        assert!(thr.bracket.1 - thr.bracket.0 <= 1e-3);
        assert!((thr.lambda - 3.6209215759).abs() < 1e-3);
    }

    #[test]
    fn large_a_sweep_to_200() {
        let r = verify_large_a(200).unwrap();
        assert_eq!(r.outcome, CheckOutcome::Pass);
        assert_eq!(r.min_margin.a, 9);
        assert!((r.min_margin.check.margin - 0.0224896302).abs() < 1e-9);
        let g100: f64 = gap(100, 1.0).unwrap();
        assert!(g100 > r.min_margin.check.margin);
    }

    #[test]
    fn theorem1_report_serializes_with_decimal_strings() {
        let mut t = PartitionTable::new();
        let v = compare_products(2, 7, &mut t).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["lhs"], "30");
        assert_eq!(json["outcome"], "EQUAL");
    }
}
