//! Integer partitions: weakly decreasing sequences of positive parts.
//!
//! Partitions are stored canonically (parts sorted in weakly decreasing
//! order) with the weight cached. `enumerate_partitions` yields all
//! partitions of `n` exactly once in reverse lexicographic order on the
//! part sequences, e.g. for n = 4: (4), (3,1), (2,2), (2,1,1), (1,1,1,1).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A partition of a nonnegative integer: parts weakly decreasing, all >= 1.
/// The empty partition has weight 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<u32>,
    weight: u64,
}

impl Partition {
    /// The empty partition (weight 0).
    pub fn empty() -> Self {
        Partition { parts: Vec::new(), weight: 0 }
    }

    /// Builds a partition from parts in any order; they are canonicalized
    /// to weakly decreasing. Rejects zero parts.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&p| p == 0) {
            return Err(Error::ParsePartition {
                position: pos + 1,
                token: "0".to_string(),
                reason: "parts must be positive",
            });
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let weight = parts.iter().map(|&p| u64::from(p)).sum();
        Ok(Partition { parts, weight })
    }

    /// Builds from parts already sorted in weakly decreasing order, all positive.
    pub(crate) fn from_descending(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last().is_none_or(|&p| p >= 1));
        let weight = parts.iter().map(|&p| u64::from(p)).sum();
        Partition { parts, weight }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of parts (the n for which this is a partition).
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of parts equal to `j`.
    pub fn multiplicity(&self, j: u32) -> usize {
        // parts are sorted descending: binary-search the run of j's
        let start = self.parts.partition_point(|&p| p > j);
        let end = self.parts.partition_point(|&p| p >= j);
        end - start
    }

    /// Distinct parts with multiplicities, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Whether `needle` is contained in this partition as a multiset.
    pub fn contains_multiset(&self, needle: &[u32]) -> bool {
        needle.iter().all(|&j| {
            let required = needle.iter().filter(|&&k| k == j).count();
            self.multiplicity(j) >= required
        })
    }

    /// Multiset union (partition concatenation).
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_descending(parts)
    }

    /// Renders as "(6,5,4,4)"; the empty partition as "()".
    pub fn parenthesized(&self) -> String {
        format!("({})", self)
    }
}

/// Formats as comma-separated decreasing parts, e.g. "6,5,4,4".
/// The empty partition formats as the empty string.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p)?;
        }
        Ok(())
    }
}

/// Parses a comma-separated list of positive integers, in any order;
/// the result is canonicalized. Whitespace around tokens is ignored.
/// An empty or all-whitespace string parses to the empty partition.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for (i, raw) in text.split(',').enumerate() {
            let token = raw.trim();
            let err = |reason| Error::ParsePartition {
                position: i + 1,
                token: token.to_string(),
                reason,
            };
            if token.is_empty() {
                return Err(err("empty token"));
            }
            let value: u32 = token.parse().map_err(|_| err("not a positive integer"))?;
            if value == 0 {
                return Err(err("parts must be positive"));
            }
            parts.push(value);
        }
        Partition::new(parts)
    }
}

/// Iterator over all partitions of `n` in reverse lexicographic order.
/// Yields exactly `p(n)` partitions; for n = 0 yields only the empty one.
pub fn enumerate_partitions(n: u64) -> Partitions {
    Partitions { n, state: State::Fresh }
}

pub struct Partitions {
    n: u64,
    state: State,
}

enum State {
    Fresh,
    Active(Vec<u32>),
    Done,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        match &mut self.state {
            State::Fresh => {
                if self.n == 0 {
                    self.state = State::Done;
                    return Some(Partition::empty());
                }
                let first = vec![u32::try_from(self.n).expect("partition weight exceeds u32 parts")];
                self.state = State::Active(first.clone());
                Some(Partition::from_descending(first))
            }
            State::Active(cur) => {
                // Successor in reverse lex order: find the rightmost part > 1,
                // decrement it to d, and refill the freed weight greedily with
                // parts of size d.
                let Some(j) = cur.iter().rposition(|&p| p > 1) else {
                    self.state = State::Done;
                    return None;
                };
                let ones = (cur.len() - 1 - j) as u64;
                let freed = u64::from(cur[j]) + ones;
                let d = cur[j] - 1;
                cur.truncate(j);
                let q = freed / u64::from(d);
                let r = freed % u64::from(d);
                cur.extend(std::iter::repeat(d).take(q as usize));
                if r > 0 {
                    cur.push(r as u32);
                }
                Some(Partition::from_descending(cur.clone()))
            }
            State::Done => None,
        }
    }
}
