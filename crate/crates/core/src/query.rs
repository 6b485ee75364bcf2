use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::permutation::Permutation;

/// The counting problem `|S_{n,(c_1..c_t)}(σ_1..σ_m)|`.
///
/// The prefix may be empty (the unconstrained count). It must have distinct entries
/// in `[n]` and length `t < n`. Patterns are kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixQuery {
    n: usize,
    prefix: Permutation,
    patterns: Vec<Pattern>,
}

impl PrefixQuery {
    pub fn new(n: usize, prefix: Permutation, patterns: Vec<Pattern>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuery("n must be positive".into()));
        }
        if prefix.len() >= n {
            return Err(Error::InvalidQuery(format!(
                "prefix length {} must be smaller than n = {n}",
                prefix.len()
            )));
        }
        if let Some(&bad) = prefix.entries().iter().find(|&&c| c as usize > n) {
            return Err(Error::InvalidQuery(format!(
                "prefix entry {bad} exceeds n = {n}"
            )));
        }
        if patterns.is_empty() {
            return Err(Error::InvalidQuery("pattern set is empty".into()));
        }
        let patterns: Vec<Pattern> = patterns
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(PrefixQuery {
            n,
            prefix,
            patterns,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prefix(&self) -> &Permutation {
        &self.prefix
    }

    /// Prefix length `t`.
    pub fn t(&self) -> usize {
        self.prefix.len()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// Values of `[n]` not used by the prefix, ascending.
    pub fn free_values(&self) -> Vec<u32> {
        let used = self.prefix.ground_set();
        (1..=self.n as u32).filter(|v| !used.contains(v)).collect()
    }

    /// Same question after complementing the prefix and every pattern.
    pub fn complemented(&self) -> PrefixQuery {
        PrefixQuery {
            n: self.n,
            prefix: self.prefix.complement_within(self.n),
            patterns: self
                .patterns
                .iter()
                .map(Pattern::complement)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        }
    }
}

impl fmt::Display for PrefixQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pats: Vec<String> = self.patterns.iter().map(Pattern::to_string).collect();
        let prefix: Vec<String> = self.prefix.entries().iter().map(u32::to_string).collect();
        write!(
            f,
            "n={} prefix=({}) patterns={{{}}}",
            self.n,
            prefix.join(","),
            pats.join(",")
        )
    }
}

/// All prefixes of `[n]` with length `0..=max_len` (and `< n`), shortest first,
/// lexicographic within each length.
pub fn all_prefixes(n: usize, max_len: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let top = max_len.min(n.saturating_sub(1));
    for t in 0..=top {
        let mut buf = Vec::with_capacity(t);
        arrangements(n as u32, t, &mut buf, &mut out);
    }
    out
}

fn arrangements(n: u32, t: usize, buf: &mut Vec<u32>, out: &mut Vec<Permutation>) {
    if buf.len() == t {
        out.push(Permutation::from_vec_unchecked(buf.clone()));
        return;
    }
    for v in 1..=n {
        if !buf.contains(&v) {
            buf.push(v);
            arrangements(n, t, buf, out);
            buf.pop();
        }
    }
}
