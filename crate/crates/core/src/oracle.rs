//! Exhaustive enumeration of prefix completions.
//!
//! Completions are generated depth first, choosing free values in increasing
//! order, so witnesses come out lexicographically sorted. After each placed value
//! only occurrences ending at that value are checked; any occurrence inside a
//! partial word is still an occurrence in every completion (classical or
//! vincular), so the whole subtree is pruned.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::pattern::{avoids_all, Matcher, Pattern};
use crate::permutation::Permutation;
use crate::query::PrefixQuery;
use crate::Count;

pub const DEFAULT_WITNESS_CAP: usize = 1000;

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Keep up to `cap` avoiding permutations.
    pub collect: bool,
    pub cap: usize,
    /// Worker threads; `0` uses the global rayon pool, `1` runs inline.
    pub jobs: usize,
    /// Check every full completion from scratch instead of pruning.
    pub naive: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            collect: false,
            cap: DEFAULT_WITNESS_CAP,
            jobs: 0,
            naive: false,
        }
    }
}

impl EnumerateOptions {
    pub fn sequential() -> Self {
        EnumerateOptions {
            jobs: 1,
            ..Default::default()
        }
    }

    pub fn with_witnesses(cap: usize) -> Self {
        EnumerateOptions {
            collect: true,
            cap,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    #[serde(with = "crate::count_str")]
    pub count: Count,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Permutation>>,
}

#[derive(Default)]
struct Partial {
    count: u64,
    witnesses: Vec<Vec<u32>>,
}

struct Search<'a> {
    n: usize,
    matchers: &'a [Matcher],
    patterns: &'a [Pattern],
    collect: bool,
    cap: usize,
    naive: bool,
}

impl Search<'_> {
    fn run(&self, word: &mut Vec<u32>, free: &mut Vec<u32>, out: &mut Partial) {
        if word.len() == self.n {
            if self.naive {
                let w = Permutation::from_vec_unchecked(word.clone());
                if !avoids_all(&w, self.patterns) {
                    return;
                }
            }
            out.count += 1;
            if self.collect && out.witnesses.len() < self.cap {
                out.witnesses.push(word.clone());
            }
            return;
        }
        for idx in 0..free.len() {
            let v = free.remove(idx);
            word.push(v);
            if self.naive || !self.matchers.iter().any(|m| m.occurs_ending_at_last(word)) {
                self.run(word, free, out);
            }
            word.pop();
            free.insert(idx, v);
        }
    }
}

/// Count (and optionally list) the permutations of `[n]` that start with the
/// query prefix and avoid every query pattern.
pub fn enumerate_avoiders(q: &PrefixQuery, opts: &EnumerateOptions) -> OracleResult {
    let matchers: Vec<Matcher> = q.patterns().iter().map(Pattern::matcher).collect();
    let search = Search {
        n: q.n(),
        matchers: &matchers,
        patterns: q.patterns(),
        collect: opts.collect,
        cap: opts.cap,
        naive: opts.naive,
    };
    let prefix = q.prefix().entries().to_vec();
    let free = q.free_values();

    if !search.naive && matchers.iter().any(|m| m.occurs_in(&prefix)) {
        return finish(Partial::default(), opts);
    }

    let branch = |i: usize| {
        let mut word = prefix.clone();
        let mut rest = free.clone();
        let v = rest.remove(i);
        word.push(v);
        let mut part = Partial::default();
        if search.naive || !matchers.iter().any(|m| m.occurs_ending_at_last(&word)) {
            search.run(&mut word, &mut rest, &mut part);
        }
        part
    };

    // free is nonempty because t < n
    let parts: Vec<Partial> = match opts.jobs {
        1 => (0..free.len()).map(branch).collect(),
        0 => (0..free.len()).into_par_iter().map(branch).collect(),
        jobs => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| (0..free.len()).into_par_iter().map(branch).collect()),
            Err(_) => (0..free.len()).into_par_iter().map(branch).collect(),
        },
    };

    let mut total = Partial::default();
    for p in parts {
        total.count += p.count;
        total.witnesses.extend(p.witnesses);
    }
    finish(total, opts)
}

fn finish(mut total: Partial, opts: &EnumerateOptions) -> OracleResult {
    total.witnesses.truncate(opts.cap);
    OracleResult {
        count: Count::from(total.count),
        witnesses: opts.collect.then(|| {
            total
                .witnesses
                .into_iter()
                .map(Permutation::from_vec_unchecked)
                .collect()
        }),
    }
}

/// Shorthand for the count alone.
pub fn count_avoiders(q: &PrefixQuery) -> Count {
    enumerate_avoiders(q, &EnumerateOptions::default()).count
}

/// `|S_{n,r}(patterns)|` for `r = 1..=n`.
pub fn leading_term_vector(n: usize, patterns: &[Pattern]) -> Result<Vec<Count>> {
    (1..=n as u32)
        .map(|r| {
            let q = PrefixQuery::new(n, Permutation::new(vec![r])?, patterns.to_vec())?;
            Ok(count_avoiders(&q))
        })
        .collect()
}
