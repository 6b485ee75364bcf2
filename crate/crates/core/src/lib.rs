//! Pattern-avoiding permutations with a fixed prefix.
//!
//! The crate counts `τ ∈ S_n` that start with a given prefix `(c_1, …, c_t)` and
//! avoid a set of classical or vincular patterns. Counts come from two independent
//! routes: closed forms in [`formulas`] and the exhaustive enumerator in [`oracle`].
//! [`wilf`] groups length-3 patterns by equal leading-term counts, and
//! [`verify`] runs the formula-versus-oracle sweeps used by the CLI.

pub mod error;
pub mod formulas;
pub mod oracle;
pub mod pattern;
pub mod permutation;
pub mod query;
pub mod sequences;
pub mod verify;
pub mod wilf;

pub use error::{Error, Result};
pub use formulas::{CountOutcome, PrefixAnalysis, Rule};
pub use oracle::{EnumerateOptions, OracleResult};
pub use pattern::Pattern;
pub use permutation::Permutation;
pub use query::PrefixQuery;

/// Exact nonnegative integer used for every count.
pub type Count = num_bigint::BigUint;

/// Counts serialize as decimal strings so no consumer truncates them.
pub(crate) mod count_str {
    use serde::Serializer;

    use crate::Count;

    pub fn serialize<S: Serializer>(c: &Count, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(c)
    }

    pub fn seq<S: Serializer>(v: &[Count], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|c| c.to_string()))
    }
}
