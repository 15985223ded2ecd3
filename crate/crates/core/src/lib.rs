//! Exact arithmetic for the partition function `p(n)`, verdicts for the
//! product inequality `p(a)p(b)` vs `p(a+b)`, and classification of the
//! partitions maximizing the multiplicative extension
//! `p(mu) = prod_j p(mu_j)` over all partitions of `n`.
//!
//! Layout:
//! - [`partition`]: the `Partition` type, parsing/formatting, and
//!   enumeration of `P(n)` in reverse lexicographic order.
//! - [`table`]: exact `p(n)` by the pentagonal-number recurrence and the
//!   multiplicative extension, all on arbitrary-precision integers.
//! - [`scalar`]: the [`Real`](scalar::Real) abstraction; every analytic
//!   formula is generic over it and runs at double ([`Double`]) and
//!   extended ([`Extended`]) precision.
//! - [`analytic`]: the explicit estimate of `p(n)` with its error bound and
//!   the exponential sandwich bounds, checked in log domain.
//! - [`inequality`]: exact verdicts, the monotone threshold functions, the
//!   per-base thresholds `lambda_a`, and the full verification pipeline.
//! - [`rewrite`] and [`maxpart`]: the replacement-rule rewriting system,
//!   closed-form maximizers, the brute-force oracle, and the log-concavity
//!   and injection sweeps.

pub mod analytic;
pub mod check;
pub mod error;
pub mod inequality;
pub mod maxpart;
pub mod partition;
pub mod rewrite;
pub mod scalar;
pub mod table;

pub use error::{Error, Result};
pub use partition::{enumerate_partitions, Partition};
pub use table::{p_extended, BigCount, PartitionTable};

/// The double working precision.
pub type Double = f64;

/// The extended working precision (~106-bit mantissa).
pub type Extended = scalar::DoubleDouble;
