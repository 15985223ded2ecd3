//! Exact partition counts p(n) via Euler's pentagonal-number recurrence,
//! memoized in an append-only table, and the multiplicative extension
//! p(mu) = prod over parts of p(part).

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Exact nonnegative count; never rounded.
pub type BigCount = BigUint;

/// Default upper bound on table extension. Requests beyond the limit are
/// reported as errors instead of exhausting memory.
pub const DEFAULT_TABLE_LIMIT: u64 = 100_000;

/// Append-only memo table of partition numbers: `values[n] = p(n)`.
///
/// Extension requires `&mut self`; reads take `&self`, so any number of
/// threads may share a prepared table. Extending never changes existing
/// entries.
#[derive(Clone, Debug)]
pub struct PartitionTable {
    values: Vec<BigCount>,
    limit: u64,
}

impl Default for PartitionTable {
    fn default() -> Self {
        Self::new()
    }
}

impl PartitionTable {
    pub fn new() -> Self {
        Self::with_limit(DEFAULT_TABLE_LIMIT)
    }

    pub fn with_limit(limit: u64) -> Self {
        PartitionTable { values: vec![BigCount::one()], limit }
    }

    /// Largest n for which p(n) is currently stored.
    pub fn max_computed(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// p(n) if already computed.
    pub fn get(&self, n: u64) -> Option<&BigCount> {
        self.values.get(usize::try_from(n).ok()?)
    }

    /// Extends the table so that p(n) is available.
    ///
    /// p(i) = sum_{k>=1} (-1)^{k+1} [ p(i - k(3k-1)/2) + p(i - k(3k+1)/2) ],
    /// with positive and negative contributions accumulated separately since
    /// counts are unsigned.
    pub fn ensure(&mut self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::TableLimit { requested: n, limit: self.limit });
        }
        let n = n as usize;
        while self.values.len() <= n {
            let i = self.values.len();
            let mut plus = BigCount::zero();
            let mut minus = BigCount::zero();
            let mut k = 1usize;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > i {
                    break;
                }
                let acc = if k % 2 == 1 { &mut plus } else { &mut minus };
                *acc += &self.values[i - g1];
                let g2 = k * (3 * k + 1) / 2;
                if g2 <= i {
                    let acc = if k % 2 == 1 { &mut plus } else { &mut minus };
                    *acc += &self.values[i - g2];
                }
                k += 1;
            }
            self.values.push(plus - minus);
        }
        Ok(())
    }

    /// Exact p(n), extending the table as needed. p(0) = 1.
    pub fn p(&mut self, n: u64) -> Result<&BigCount> {
        self.ensure(n)?;
        Ok(&self.values[n as usize])
    }

    /// p(n) from a prepared table; panics if `n` was not ensured.
    /// Intended for read-only parallel sweeps after a single `ensure`.
    pub fn p_known(&self, n: u64) -> &BigCount {
        self.get(n).expect("partition table not prepared to requested n")
    }
}

/// The extended partition function: exact product of p over the parts of
/// `mu`. The empty partition gives 1 (empty product).
pub fn p_extended(mu: &Partition, table: &mut PartitionTable) -> Result<BigCount> {
    if let Some(&largest) = mu.parts().first() {
        table.ensure(u64::from(largest))?;
    }
    Ok(p_extended_prepared(mu, table))
}

/// As `p_extended`, but requires the table to already cover the largest part.
pub fn p_extended_prepared(mu: &Partition, table: &PartitionTable) -> BigCount {
    let mut acc = BigCount::one();
    for (part, mult) in mu.multiplicities() {
        let v = table.p_known(u64::from(part));
        for _ in 0..mult {
            acc *= v;
        }
    }
    acc
}
