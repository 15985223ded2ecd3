//! Verdicts for strict floating-point inequalities under the two-precision
//! policy: evaluate at double first; if the relative margin is below the
//! escalation threshold, re-evaluate at extended precision; if the margin
//! still does not clear the estimated rounding error, the verdict is
//! MARGINAL rather than pass or fail.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::scalar::Real;

/// Relative margin below which a double-precision result is not trusted
/// and the check escalates to extended precision.
pub const ESCALATION_THRESHOLD: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckOutcome {
    Pass,
    Fail,
    Marginal,
}

/// One evaluation of a margin (`lhs - rhs` of a strict inequality) together
/// with the magnitude of the quantities compared and an estimate of the
/// rounding error accumulated while computing it.
#[derive(Copy, Clone, Debug)]
pub struct MarginEval {
    pub margin: f64,
    pub scale: f64,
    pub rounding_bound: f64,
}

impl MarginEval {
    /// Standard estimate: `ops` elementary operations at unit roundoff `u`
    /// on quantities of magnitude `scale`.
    pub fn with_ops<R: Real>(margin: R, scale: R, ops: f64) -> Self {
        let scale = scale.to_f64().abs().max(1.0);
        MarginEval {
            margin: margin.to_f64(),
            scale,
            rounding_bound: ops * R::UNIT_ROUNDOFF * scale,
        }
    }

    /// As `with_ops`, plus an explicit absolute error term for inputs that
    /// carry their own error bound (e.g. truncated big-integer logarithms).
    pub fn with_ops_and_input_error<R: Real>(margin: R, scale: R, ops: f64, input_error: f64) -> Self {
        let mut e = Self::with_ops(margin, scale, ops);
        e.rounding_bound += input_error;
        e
    }
}

/// Result of checking `margin > 0`.
#[derive(Copy, Clone, Debug)]
pub struct StrictInequality {
    pub outcome: CheckOutcome,
    pub margin: f64,
    pub rounding_bound: f64,
    pub precision: Precision,
}

impl StrictInequality {
    pub fn passed(&self) -> bool {
        self.outcome == CheckOutcome::Pass
    }

    fn decide(eval: MarginEval, precision: Precision) -> Self {
        let outcome = if eval.margin > eval.rounding_bound {
            CheckOutcome::Pass
        } else if eval.margin < -eval.rounding_bound {
            CheckOutcome::Fail
        } else {
            CheckOutcome::Marginal
        };
        StrictInequality {
            outcome,
            margin: eval.margin,
            rounding_bound: eval.rounding_bound,
            precision,
        }
    }
}

/// Margins are reported as decimal strings annotated with the precision
/// that produced them, so JSON output carries no lossy floats.
impl Serialize for StrictInequality {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StrictInequality", 4)?;
        st.serialize_field("outcome", &self.outcome)?;
        st.serialize_field("margin", &format!("{:e}", self.margin))?;
        st.serialize_field("rounding_bound", &format!("{:e}", self.rounding_bound))?;
        st.serialize_field("precision", &self.precision)?;
        st.end()
    }
}

/// Escalating check of `margin > 0`: double decides when its relative
/// margin is comfortable, otherwise extended precision decides, and a
/// margin inside the extended rounding bound is MARGINAL.
pub fn check_positive(
    double: MarginEval,
    extended: impl FnOnce() -> MarginEval,
) -> StrictInequality {
    if double.margin.abs() >= ESCALATION_THRESHOLD * double.scale
        && double.margin.abs() > double.rounding_bound
    {
        return StrictInequality::decide(double, Precision::Double);
    }
    StrictInequality::decide(extended(), Precision::Extended)
}

/// Extended-precision-only check of `margin > 0` (used where the contract
/// demands extended-precision margins outright).
pub fn check_positive_extended(extended: MarginEval) -> StrictInequality {
    StrictInequality::decide(extended, Precision::Extended)
}

/// Both-precision check: passes only when the margin clears the rounding
/// bound at double AND at extended precision; disagreement is MARGINAL.
pub fn check_positive_both(double: MarginEval, extended: MarginEval) -> StrictInequality {
    let d = StrictInequality::decide(double, Precision::Double);
    let x = StrictInequality::decide(extended, Precision::Extended);
    if d.outcome == x.outcome {
        x
    } else {
        StrictInequality { outcome: CheckOutcome::Marginal, ..x }
    }
}

/// Sign of a quantity under escalation, for root bracketing: double's sign
/// is used when its margin is comfortable, else extended's. Returns the
/// sign and whether escalation was needed. A value inside even the
/// extended rounding bound is treated as negative so that bisection
/// brackets stay consistent (the root moves up by at most the bound).
pub fn escalating_sign(
    double: MarginEval,
    extended: impl FnOnce() -> MarginEval,
) -> (std::cmp::Ordering, bool) {
    if double.margin.abs() >= ESCALATION_THRESHOLD * double.scale {
        let ord = if double.margin > 0.0 {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        };
        return (ord, false);
    }
    let x = extended();
    let ord = if x.margin > x.rounding_bound {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    };
    (ord, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comfortable_double_margin_passes_without_escalation() {
        let d = MarginEval { margin: 1e-3, scale: 1.0, rounding_bound: 1e-14 };
        let r = check_positive(d, || panic!("must not escalate"));
        assert_eq!(r.outcome, CheckOutcome::Pass);
        assert_eq!(r.precision, Precision::Double);
    }

    #[test]
    fn thin_double_margin_escalates() {
        let d = MarginEval { margin: 1e-12, scale: 1.0, rounding_bound: 1e-14 };
        let x = MarginEval { margin: 1e-12, scale: 1.0, rounding_bound: 1e-28 };
        let r = check_positive(d, || x);
        assert_eq!(r.outcome, CheckOutcome::Pass);
        assert_eq!(r.precision, Precision::Extended);
    }

    #[test]
    fn margin_inside_extended_bound_is_marginal() {
        let d = MarginEval { margin: 1e-30, scale: 1.0, rounding_bound: 1e-14 };
        let x = MarginEval { margin: 1e-30, scale: 1.0, rounding_bound: 1e-28 };
        let r = check_positive(d, || x);
        assert_eq!(r.outcome, CheckOutcome::Marginal);
    }

    #[test]
    fn negative_margin_fails() {
        let d = MarginEval { margin: -0.5, scale: 1.0, rounding_bound: 1e-14 };
        let r = check_positive(d, || unreachable!());
        assert_eq!(r.outcome, CheckOutcome::Fail);
    }

    #[test]
    fn both_precision_disagreement_is_marginal() {
        let d = MarginEval { margin: 1e-3, scale: 1.0, rounding_bound: 1e-14 };
        let x = MarginEval { margin: -1e-3, scale: 1.0, rounding_bound: 1e-28 };
        assert_eq!(check_positive_both(d, x).outcome, CheckOutcome::Marginal);
        let x2 = MarginEval { margin: 2e-3, scale: 1.0, rounding_bound: 1e-28 };
        assert_eq!(check_positive_both(d, x2).outcome, CheckOutcome::Pass);
    }

    #[test]
    fn marginal_serializes_with_precision_annotation() {
        let x = MarginEval { margin: 1e-30, scale: 1.0, rounding_bound: 1e-28 };
        let r = check_positive_extended(x);
        let json = serde_json::to_value(r).unwrap();
        assert_eq!(json["outcome"], "MARGINAL");
        assert_eq!(json["precision"], "extended");
        assert!(json["margin"].as_str().unwrap().contains("e-30"));
    }
}
