//! The explicit estimate of p(n) with its error bound, and the derived
//! exponential sandwich bounds, all evaluated generically over [`Real`]
//! and compared against exact values in log domain so that nothing
//! overflows.
//!
//! With mu(n) = pi/6 * sqrt(24n - 1):
//!
//! - main term: sqrt(12)/(24n-1) * [(1 - 1/mu) e^mu + (1 + 1/mu) e^-mu],
//!   with |p(n) - main| < (pi^2/sqrt(3)) * [sinh(mu)/mu^3 + 1/6 - 1/mu^2];
//! - sandwich: (sqrt(3)/(12n)) (1 -+ 1/sqrt(n)) e^mu brackets p(n) for n >= 2.

use serde::Serialize;

use crate::check::{check_positive_both, CheckOutcome, MarginEval, StrictInequality};
use crate::error::{Error, Result};
use crate::scalar::{DoubleDouble, Real};
use crate::table::{BigCount, PartitionTable};

/// mu(n) = pi/6 * sqrt(24n - 1), n >= 1.
pub fn mu<R: Real>(n: u64) -> Result<R> {
    if n == 0 {
        return Err(Error::NonPositive { n });
    }
    Ok(R::pi() / R::from_u64(6) * R::from_u64(24 * n - 1).sqrt())
}

/// Main term and error cap for p(n).
#[derive(Copy, Clone, Debug)]
pub struct LehmerEstimate<R> {
    pub n: u64,
    pub mu: R,
    pub main_term: R,
    pub error_cap: R,
}

pub fn lehmer_estimate<R: Real>(n: u64) -> Result<LehmerEstimate<R>> {
    let m: R = mu(n)?;
    // e^mu overflows the binary64 exponent range past ~709.
    if m.to_f64() > 709.0 {
        return Err(Error::ExpOverflow { n, mu: m.to_f64() });
    }
    let one = R::one();
    let em = m.exp();
    let main_term = R::from_u64(12).sqrt() / R::from_u64(24 * n - 1)
        * ((one - one / m) * em + (one + one / m) * (-m).exp());
    let error_cap = R::pi() * R::pi() / R::from_u64(3).sqrt()
        * (m.sinh() / (m * m * m) + one / R::from_u64(6) - one / (m * m));
    if !main_term.is_finite() || !error_cap.is_finite() {
        return Err(Error::ExpOverflow { n, mu: m.to_f64() });
    }
    debug_assert!(main_term > R::zero() && error_cap > R::zero());
    Ok(LehmerEstimate { n, mu: m, main_term, error_cap })
}

/// Natural logs of the lower/upper sandwich expressions; n >= 2 (the lower
/// factor 1 - 1/sqrt(n) degenerates to 0 at n = 1).
#[derive(Copy, Clone, Debug)]
pub struct LogBoundPair<R> {
    pub n: u64,
    pub log_lower: R,
    pub log_upper: R,
}

pub fn sandwich_log_bounds<R: Real>(n: u64) -> Result<LogBoundPair<R>> {
    if n < 2 {
        return Err(Error::NonPositive { n });
    }
    let one = R::one();
    let m: R = mu(n)?;
    let common = (R::from_u64(3).sqrt() / R::from_u64(12 * n)).ln() + m;
    let inv_sqrt_n = one / R::from_u64(n).sqrt();
    let pair = LogBoundPair {
        n,
        log_lower: common + (one - inv_sqrt_n).ln(),
        log_upper: common + (one + inv_sqrt_n).ln(),
    };
    debug_assert!(pair.log_lower < pair.log_upper);
    Ok(pair)
}

/// Number of leading bits kept when truncating a big integer for
/// floating-point purposes. The truncation error is below 2^-95 relative.
const LEADING_BITS: u64 = 96;

/// Relative error contract of [`log_bigcount`], deliberately conservative;
/// callers fold `|ln x| * LOG_BIGCOUNT_REL_ERROR` into rounding estimates.
pub const LOG_BIGCOUNT_REL_ERROR: f64 = 3.552713678800501e-15; // 2^-48

/// ln(x) for an exact count x >= 1, from the bit length and the leading
/// 96 bits: ln(x) = ln(top) + shift * ln 2. Relative error is bounded by
/// [`LOG_BIGCOUNT_REL_ERROR`] at either working precision.
pub fn log_bigcount<R: Real>(x: &BigCount) -> Result<R> {
    use num_traits::ToPrimitive;
    if x == &BigCount::from(0u32) {
        return Err(Error::LogOfZero);
    }
    let bits = x.bits();
    if bits <= LEADING_BITS {
        let v = x.to_u128().expect("value fits in 128 bits");
        return Ok(u128_to_real::<R>(v).ln());
    }
    let shift = bits - LEADING_BITS;
    let top = (x >> shift).to_u128().expect("top chunk fits in 128 bits");
    Ok(u128_to_real::<R>(top).ln() + R::from_u64(shift) * R::ln_2())
}

/// Approximates an exact count in R: exact up to 96 leading bits, then a
/// power-of-two scale. Truncation error below 2^-95 relative.
pub fn big_to_real<R: Real>(x: &BigCount) -> R {
    use num_traits::ToPrimitive;
    let bits = x.bits();
    if bits <= LEADING_BITS {
        return u128_to_real::<R>(x.to_u128().expect("fits"));
    }
    let shift = bits - LEADING_BITS;
    let top = (x >> shift).to_u128().expect("fits");
    u128_to_real::<R>(top).ldexp(shift as i32)
}

fn u128_to_real<R: Real>(v: u128) -> R {
    let hi = (v >> 64) as u64;
    let lo = v as u64;
    R::from_u64(hi).ldexp(64) + R::from_u64(lo)
}

/// Worst case of a sweep: the n attaining the smallest margin.
#[derive(Clone, Debug, Serialize)]
pub struct SweepWorst {
    pub n: u64,
    pub check: StrictInequality,
}

/// Sandwich sweep over a range of n: log_lower(n) < ln p(n) < log_upper(n),
/// checked at both working precisions.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub n_lo: u64,
    pub n_hi: u64,
    pub outcome: CheckOutcome,
    pub worst_lower: SweepWorst,
    pub worst_upper: SweepWorst,
    /// Every n whose lower or upper comparison did not pass.
    pub failures: Vec<SweepWorst>,
}

// operation-count estimates for the rounding bounds
const SANDWICH_OPS: f64 = 48.0;
const LEHMER_OPS: f64 = 64.0;

fn sandwich_margins<R: Real>(n: u64, p: &BigCount) -> Result<(MarginEval, MarginEval)> {
    let bounds: LogBoundPair<R> = sandwich_log_bounds(n)?;
    let ln_p: R = log_bigcount(p)?;
    let input_err = ln_p.to_f64().abs() * LOG_BIGCOUNT_REL_ERROR;
    let lower =
        MarginEval::with_ops_and_input_error(ln_p - bounds.log_lower, ln_p, SANDWICH_OPS, input_err);
    let upper =
        MarginEval::with_ops_and_input_error(bounds.log_upper - ln_p, ln_p, SANDWICH_OPS, input_err);
    Ok((lower, upper))
}

pub fn verify_sandwich(n_lo: u64, n_hi: u64, table: &PartitionTable) -> Result<SandwichReport> {
    assert!(n_lo >= 2 && n_hi >= n_lo);
    let mut worst_lower: Option<SweepWorst> = None;
    let mut worst_upper: Option<SweepWorst> = None;
    let mut failures = Vec::new();
    for n in n_lo..=n_hi {
        let p = table.p_known(n);
        let (lo_d, up_d) = sandwich_margins::<f64>(n, p)?;
        let (lo_x, up_x) = sandwich_margins::<DoubleDouble>(n, p)?;
        let lower = check_positive_both(lo_d, lo_x);
        let upper = check_positive_both(up_d, up_x);
        for check in [lower, upper] {
            if !check.passed() {
                failures.push(SweepWorst { n, check });
            }
        }
        if worst_lower.as_ref().map_or(true, |w| lower.margin < w.check.margin) {
            worst_lower = Some(SweepWorst { n, check: lower });
        }
        if worst_upper.as_ref().map_or(true, |w| upper.margin < w.check.margin) {
            worst_upper = Some(SweepWorst { n, check: upper });
        }
    }
    Ok(SandwichReport {
        n_lo,
        n_hi,
        outcome: sweep_outcome(&failures),
        worst_lower: worst_lower.expect("nonempty range"),
        worst_upper: worst_upper.expect("nonempty range"),
        failures,
    })
}

/// Bracket sweep: |p(n) - main_term(n)| < error_cap(n) for 1 <= n <= n_hi,
/// at both working precisions.
#[derive(Clone, Debug, Serialize)]
pub struct LehmerBracketReport {
    pub n_hi: u64,
    pub outcome: CheckOutcome,
    pub worst: SweepWorst,
    pub failures: Vec<SweepWorst>,
}

fn bracket_margin<R: Real>(n: u64, p: &BigCount) -> Result<MarginEval> {
    let est: LehmerEstimate<R> = lehmer_estimate(n)?;
    let p_real: R = big_to_real(p);
    let margin = est.error_cap - (p_real - est.main_term).abs();
    Ok(MarginEval::with_ops(margin, p_real, LEHMER_OPS))
}

pub fn verify_lehmer_bracket(n_hi: u64, table: &PartitionTable) -> Result<LehmerBracketReport> {
    assert!(n_hi >= 1);
    let mut worst: Option<SweepWorst> = None;
    let mut failures = Vec::new();
    for n in 1..=n_hi {
        let p = table.p_known(n);
        let check = check_positive_both(bracket_margin::<f64>(n, p)?, bracket_margin::<DoubleDouble>(n, p)?);
        if !check.passed() {
            failures.push(SweepWorst { n, check });
        }
        // compare slack relative to the cap so small n and large n are comparable
        let better = |w: &SweepWorst| {
            let cap_old = lehmer_estimate::<f64>(w.n).map(|e| e.error_cap).unwrap_or(1.0);
            let cap_new = lehmer_estimate::<f64>(n).map(|e| e.error_cap).unwrap_or(1.0);
            check.margin / cap_new < w.check.margin / cap_old
        };
        if worst.as_ref().map_or(true, better) {
            worst = Some(SweepWorst { n, check });
        }
    }
    Ok(LehmerBracketReport {
        n_hi,
        outcome: sweep_outcome(&failures),
        worst: worst.expect("nonempty range"),
        failures,
    })
}

pub(crate) fn sweep_outcome(failures: &[SweepWorst]) -> CheckOutcome {
    if failures.iter().any(|f| f.check.outcome == CheckOutcome::Fail) {
        CheckOutcome::Fail
    } else if failures.is_empty() {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Marginal
    }
}
