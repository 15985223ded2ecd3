//! Weight-preserving replacement rules on partitions, each strictly
//! increasing the extended partition function, and the greedy rewriter
//! that applies them to a fixed point.
//!
//! Rule priority is the catalog order below; the rewriter is deterministic
//! under it. Termination is immediate from the strict increase of p(mu)
//! on the finite set P(n).

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::partition::Partition;
use crate::table::{p_extended, BigCount, PartitionTable};

/// What a rule does to the multiset of parts.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RuleAction {
    /// Splits one part k >= 8 into floor(k/2), ceil(k/2); the largest such
    /// part is chosen. Increases p because p(floor(k/2)) p(ceil(k/2)) > p(k).
    SplitLarge,
    /// Removes one part equal to 1 and increments the largest remaining
    /// part; needs at least two parts. Increases p by strict monotonicity.
    AbsorbUnit,
    /// Replaces the fixed sub-multiset `from` with `to` (equal weight).
    Exchange { from: &'static [u32], to: &'static [u32] },
}

#[derive(Copy, Clone, Debug)]
pub struct ReplacementRule {
    pub action: RuleAction,
    /// Short label used in rewrite traces, e.g. "7,2 -> 5,4".
    pub label: &'static str,
}

macro_rules! exchange {
    ($label:literal, [$($f:expr),+] => [$($t:expr),+]) => {
        ReplacementRule {
            action: RuleAction::Exchange { from: &[$($f),+], to: &[$($t),+] },
            label: $label,
        }
    };
}

/// The fixed rule catalog, in priority order.
pub const RULE_CATALOG: [ReplacementRule; 18] = [
    ReplacementRule { action: RuleAction::SplitLarge, label: "split k>=8 -> floor(k/2),ceil(k/2)" },
    ReplacementRule { action: RuleAction::AbsorbUnit, label: "absorb 1 into largest part" },
    exchange!("2,2 -> 4", [2, 2] => [4]),
    exchange!("3,3 -> 6", [3, 3] => [6]),
    exchange!("5,5 -> 6,4", [5, 5] => [6, 4]),
    exchange!("6,6 -> 4,4,4", [6, 6] => [4, 4, 4]),
    exchange!("7,7 -> 6,4,4", [7, 7] => [6, 4, 4]),
    exchange!("7,2 -> 5,4", [7, 2] => [5, 4]),
    exchange!("7,3 -> 6,4", [7, 3] => [6, 4]),
    exchange!("7,4 -> 6,5", [7, 4] => [6, 5]),
    exchange!("7,5 -> 4,4,4", [7, 5] => [4, 4, 4]),
    exchange!("7,6 -> 5,4,4", [7, 6] => [5, 4, 4]),
    exchange!("6,2 -> 4,4", [6, 2] => [4, 4]),
    exchange!("6,3 -> 5,4", [6, 3] => [5, 4]),
    exchange!("5,4,2 -> 6,5", [5, 4, 2] => [6, 5]),
    exchange!("5,3 -> 4,4", [5, 3] => [4, 4]),
    exchange!("4,2 -> 6", [4, 2] => [6]),
    exchange!("4,4,3 -> 6,5", [4, 4, 3] => [6, 5]),
];

/// The catalog as a slice.
pub fn rule_catalog() -> &'static [ReplacementRule] {
    &RULE_CATALOG
}

/// Applies `rule` to `mu` if it matches, returning the rewritten partition
/// (canonicalized, same weight); `None` when not applicable.
pub fn apply_rule(mu: &Partition, rule: &ReplacementRule) -> Option<Partition> {
    match rule.action {
        RuleAction::SplitLarge => {
            let &k = mu.parts().iter().find(|&&p| p >= 8)?;
            let mut parts: Vec<u32> = Vec::with_capacity(mu.parts().len() + 1);
            let mut removed = false;
            for &p in mu.parts() {
                if !removed && p == k {
                    removed = true;
                    continue;
                }
                parts.push(p);
            }
            parts.push(k / 2);
            parts.push(k - k / 2);
            Some(Partition::new(parts).expect("parts stay positive"))
        }
        RuleAction::AbsorbUnit => {
            if mu.parts().len() < 2 || mu.multiplicity(1) == 0 {
                return None;
            }
            let mut parts = mu.parts().to_vec();
            parts.pop(); // smallest part, which is a 1
            parts[0] += 1;
            Some(Partition::new(parts).expect("parts stay positive"))
        }
        RuleAction::Exchange { from, to } => {
            if !mu.contains_multiset(from) {
                return None;
            }
            let mut parts = mu.parts().to_vec();
            for &f in from {
                let idx = parts.iter().position(|&p| p == f).expect("containment checked");
                parts.swap_remove(idx);
            }
            parts.extend_from_slice(to);
            Some(Partition::new(parts).expect("parts stay positive"))
        }
    }
}

/// One rewrite step with the exact p values on both sides.
#[derive(Clone, Debug)]
pub struct RewriteStep {
    pub rule: &'static str,
    pub after: Partition,
    pub p_after: BigCount,
}

impl Serialize for RewriteStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RewriteStep", 3)?;
        st.serialize_field("rule", &self.rule)?;
        st.serialize_field("after", &self.after.to_string())?;
        st.serialize_field("p", &self.p_after.to_string())?;
        st.end()
    }
}

/// Full trace of a normalization run: start, every step, and the fixed
/// point none of the rules applies to.
#[derive(Clone, Debug)]
pub struct RewriteTrace {
    pub start: Partition,
    pub p_start: BigCount,
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn fixed_point(&self) -> &Partition {
        self.steps.last().map_or(&self.start, |s| &s.after)
    }

    pub fn p_final(&self) -> &BigCount {
        self.steps.last().map_or(&self.p_start, |s| &s.p_after)
    }

    pub fn already_canonical(&self) -> bool {
        self.steps.is_empty()
    }
}

impl Serialize for RewriteTrace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RewriteTrace", 4)?;
        st.serialize_field("start", &self.start.to_string())?;
        st.serialize_field("p_start", &self.p_start.to_string())?;
        st.serialize_field("steps", &self.steps)?;
        st.serialize_field("fixed_point", &self.fixed_point().to_string())?;
        st.end()
    }
}

/// Greedily applies the first applicable catalog rule until none applies.
/// p(mu) strictly increases at every step, which forces termination.
pub fn normalize(mu: &Partition, table: &mut PartitionTable) -> Result<RewriteTrace> {
    let p_start = p_extended(mu, table)?;
    let mut current = mu.clone();
    let mut current_p = p_start.clone();
    let mut steps = Vec::new();
    'rewrite: loop {
        for rule in rule_catalog() {
            if let Some(next) = apply_rule(&current, rule) {
                debug_assert_eq!(next.weight(), current.weight());
                let p_after = p_extended(&next, table)?;
                assert!(
                    p_after > current_p,
                    "rule {:?} did not increase p on {current}",
                    rule.label
                );
                steps.push(RewriteStep { rule: rule.label, after: next.clone(), p_after: p_after.clone() });
                current = next;
                current_p = p_after;
                continue 'rewrite;
            }
        }
        break;
    }
    Ok(RewriteTrace { start: mu.clone(), p_start, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxpart::canonical_max_partition;
    use proptest::prelude::*;

    fn part(text: &str) -> Partition {
        text.parse().unwrap()
    }

    #[test]
    fn every_exchange_rule_strictly_increases() {
        let mut t = PartitionTable::new();
        for rule in rule_catalog() {
            if let RuleAction::Exchange { from, to } = rule.action {
                let from_p = Partition::new(from.to_vec()).unwrap();
                let to_p = Partition::new(to.to_vec()).unwrap();
                assert_eq!(from_p.weight(), to_p.weight(), "rule {}", rule.label);
                let before = p_extended(&from_p, &mut t).unwrap();
                let after = p_extended(&to_p, &mut t).unwrap();
                assert!(after > before, "rule {} : {before} !< {after}", rule.label);
            }
        }
    }

    #[test]
    fn split_rule_strictly_increases_to_100() {
        let mut t = PartitionTable::new();
        t.ensure(100).unwrap();
        for k in 8..=100u64 {
            let split = t.p_known(k / 2) * t.p_known(k - k / 2);
            assert!(&split > t.p_known(k), "split of {k}");
        }
    }

    #[test]
    fn apply_examples() {
        let rule_72 = &RULE_CATALOG[7];
        assert_eq!(rule_72.label, "7,2 -> 5,4");
        assert_eq!(apply_rule(&part("7,2"), rule_72).unwrap(), part("5,4"));

        let rule_22 = &RULE_CATALOG[2];
        assert_eq!(apply_rule(&part("4,4,4"), rule_22), None);

        let absorb = &RULE_CATALOG[1];
        assert_eq!(apply_rule(&part("3,1"), absorb).unwrap(), part("4"));
        // a bare (1) has nothing to increment
        assert_eq!(apply_rule(&part("1"), absorb), None);
        assert_eq!(apply_rule(&part("1,1"), absorb).unwrap(), part("2"));

        let split = &RULE_CATALOG[0];
        assert_eq!(apply_rule(&part("15"), split).unwrap(), part("8,7"));
        assert_eq!(apply_rule(&part("9,8"), split).unwrap(), part("8,5,4"));
        assert_eq!(apply_rule(&part("7,6"), split), None);
    }

    #[test]
    fn normalize_examples() {
        let mut t = PartitionTable::new();
        let trace = normalize(&part("15"), &mut t).unwrap();
        assert_eq!(trace.fixed_point(), &part("6,5,4"));

        let ones16 = Partition::new(vec![1; 16]).unwrap();
        let trace = normalize(&ones16, &mut t).unwrap();
        assert_eq!(trace.fixed_point(), &part("4,4,4,4"));

        let trace = normalize(&part("7,2,4,4"), &mut t).unwrap();
        assert_eq!(trace.fixed_point(), &part("5,4,4,4"));

        let trace = normalize(&part("4,4,4"), &mut t).unwrap();
        assert!(trace.already_canonical());
    }

    #[test]
    fn trace_p_values_strictly_increase() {
        let mut t = PartitionTable::new();
        let trace = normalize(&Partition::new(vec![1; 23]).unwrap(), &mut t).unwrap();
        let mut prev = trace.p_start.clone();
        assert!(!trace.steps.is_empty());
        for step in &trace.steps {
            assert!(step.p_after > prev);
            prev = step.p_after.clone();
        }
    }

    #[test]
    fn canonical_shapes_are_fixed_points() {
        let mut t = PartitionTable::new();
        for n in 15..=60u64 {
            let canon = canonical_max_partition(n).unwrap();
            let trace = normalize(&canon, &mut t).unwrap();
            assert!(trace.already_canonical(), "n={n}: {canon} moved");
        }
    }

    proptest! {
        #[test]
        fn rules_preserve_weight(parts in proptest::collection::vec(1u32..20, 1..10)) {
            let mu = Partition::new(parts).unwrap();
            for rule in rule_catalog() {
                if let Some(nu) = apply_rule(&mu, rule) {
                    prop_assert_eq!(nu.weight(), mu.weight());
                }
            }
        }

        #[test]
        fn normalize_never_decreases_p(parts in proptest::collection::vec(1u32..18, 1..9)) {
            let mut t = PartitionTable::new();
            let mu = Partition::new(parts).unwrap();
            let trace = normalize(&mu, &mut t).unwrap();
            prop_assert!(trace.p_final() >= &trace.p_start);
            prop_assert_eq!(trace.fixed_point().weight(), mu.weight());
        }
    }
}
