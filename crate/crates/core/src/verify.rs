//! Formula-versus-oracle sweeps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{self, Family, Rule};
use crate::oracle::{enumerate_avoiders, EnumerateOptions};
use crate::pattern::Pattern;
use crate::permutation::Permutation;
use crate::query::{all_prefixes, PrefixQuery};
use crate::sequences::{ballot, bell, binomial, catalan, schroder, simion_schmidt_a};
use crate::wilf::{classify_r_wilf, leading_term, table2, table3};
use crate::Count;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Singles,
    Pairs,
    Schroder,
    Tables,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Singles,
        Suite::Pairs,
        Suite::Schroder,
        Suite::Tables,
        Suite::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Singles => "singles",
            Suite::Pairs => "pairs",
            Suite::Schroder => "schroder",
            Suite::Tables => "tables",
            Suite::Identities => "identities",
        }
    }

    fn family(self) -> Option<Family> {
        match self {
            Suite::Singles => Some(Family::Single),
            Suite::Pairs => Some(Family::Pair),
            Suite::Schroder => Some(Family::Schroder),
            Suite::Tables | Suite::Identities => None,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "expected singles, pairs, schroder, tables or identities".into(),
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest `n` swept against the oracle.
    pub n_max: usize,
    /// Largest prefix length swept.
    pub prefix_max: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 7,
            prefix_max: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Mismatch {
    pub suite: &'static str,
    pub query: String,
    pub expected: String,
    pub actual: String,
    pub rule: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<&'static str>,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
    /// How often each rule fired.
    pub coverage: BTreeMap<&'static str, u64>,
    /// Reachable rules that never fired.
    pub uncovered: Vec<&'static str>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn merge(&mut self, other: VerifyReport) {
        self.suites.extend(other.suites);
        self.checked += other.checked;
        self.mismatches.extend(other.mismatches);
        for (rule, hits) in other.coverage {
            *self.coverage.entry(rule).or_default() += hits;
        }
        self.uncovered.extend(other.uncovered);
    }
}

/// Run the given suites (all of them when `suites` is empty).
pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let chosen: BTreeSet<Suite> = if suites.is_empty() {
        Suite::ALL.into_iter().collect()
    } else {
        suites.iter().copied().collect()
    };
    let mut report = VerifyReport::default();
    for suite in chosen {
        report.merge(run_suite(suite, cfg)?);
    }
    report.mismatches.sort();
    report.uncovered.sort();
    report.uncovered.dedup();
    Ok(report)
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut report = match suite {
        Suite::Singles => sweep(suite, cfg, &single_sets())?,
        Suite::Pairs => sweep(suite, cfg, &pair_sets())?,
        Suite::Schroder => {
            let mut r = sweep(suite, cfg, &[vec![pat("3412"), pat("3421")]])?;
            schroder_extras(cfg, &mut r);
            r
        }
        Suite::Tables => tables(cfg)?,
        Suite::Identities => identities(cfg)?,
    };
    report.suites = vec![suite.name()];
    if let Some(family) = suite.family() {
        // a prefix can only contain a pattern once it is at least as long
        let pattern_len = if family == Family::Schroder { 4 } else { 3 };
        let containable = cfg.prefix_max >= pattern_len && cfg.n_max > pattern_len;
        report.uncovered = Rule::reachable_in(family)
            .into_iter()
            .filter(|&r| r != Rule::PrefixContainsPattern || containable)
            .map(Rule::as_str)
            .filter(|id| !report.coverage.contains_key(id))
            .collect();
    }
    report.mismatches.sort();
    Ok(report)
}

fn pat(s: &str) -> Pattern {
    s.parse().expect("static pattern")
}

fn single_sets() -> Vec<Vec<Pattern>> {
    Pattern::classical_length3()
        .into_iter()
        .map(|p| vec![p])
        .collect()
}

fn pair_sets() -> Vec<Vec<Pattern>> {
    let all = Pattern::classical_length3();
    let mut out = Vec::new();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            out.push(vec![all[i].clone(), all[j].clone()]);
        }
    }
    out
}

struct Check {
    query: String,
    expected: Count,
    actual: Count,
    rule: Option<Rule>,
    rule_id: String,
}

fn record(report: &mut VerifyReport, suite: Suite, checks: Vec<Check>) {
    for c in checks {
        report.checked += 1;
        if let Some(rule) = c.rule {
            *report.coverage.entry(rule.as_str()).or_default() += 1;
        }
        if c.expected != c.actual {
            report.mismatches.push(Mismatch {
                suite: suite.name(),
                query: c.query,
                expected: c.expected.to_string(),
                actual: c.actual.to_string(),
                rule: c.rule_id,
            });
        }
    }
}

/// Closed form against oracle for every `n <= n_max`, every prefix of length
/// `<= prefix_max`, every pattern set.
fn sweep(suite: Suite, cfg: &VerifyConfig, sets: &[Vec<Pattern>]) -> Result<VerifyReport> {
    let mut queries = Vec::new();
    for n in 1..=cfg.n_max {
        for prefix in all_prefixes(n, cfg.prefix_max) {
            for set in sets {
                queries.push(PrefixQuery::new(n, prefix.clone(), set.clone())?);
            }
        }
    }
    let checks: Vec<Check> = queries
        .par_iter()
        .map(|q| {
            let outcome = formulas::count(q)?;
            let actual = enumerate_avoiders(q, &EnumerateOptions::sequential()).count;
            Ok(Check {
                query: q.to_string(),
                expected: outcome.count.clone(),
                actual,
                rule: Some(outcome.rule),
                rule_id: outcome.rule_id(),
            })
        })
        .collect::<Result<_>>()?;
    let mut report = VerifyReport::default();
    record(&mut report, suite, checks);
    Ok(report)
}

fn plain(query: String, expected: Count, actual: Count, rule_id: &str) -> Check {
    Check {
        query,
        expected,
        actual,
        rule: None,
        rule_id: rule_id.to_string(),
    }
}

fn schroder_extras(cfg: &VerifyConfig, report: &mut VerifyReport) {
    let mut checks = Vec::new();
    // leading-term row sums against the Schröder recurrence
    for n in 2..=cfg.n_max.max(12) {
        let sum: Count = (1..=n as u32)
            .map(|r| {
                let prefix = Permutation::new(vec![r]).expect("positive");
                formulas::count_pair_3412_3421(n, &prefix)
                    .expect("valid")
                    .count
            })
            .sum();
        checks.push(plain(
            format!("row sum n={n} {{3412,3421}}"),
            schroder(n - 1),
            sum,
            "schroder-row-sum",
        ));
    }
    record(report, Suite::Schroder, checks);
}

fn tables(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    for n in 2..=cfg.n_max {
        for ((r, p), v) in table2(n)? {
            let q = PrefixQuery::new(n, Permutation::new(vec![r as u32])?, vec![p.clone()])?;
            let actual = enumerate_avoiders(&q, &EnumerateOptions::default()).count;
            checks.push(plain(format!("table2 {q}"), v, actual, "table2"));
        }
    }
    for r in 3..cfg.n_max.max(3) {
        for ((p, n), cell) in table3(r)? {
            let Some(v) = cell else { continue };
            if n > cfg.n_max {
                continue;
            }
            let q = PrefixQuery::new(n, Permutation::new(vec![r as u32])?, vec![p.clone()])?;
            let actual = enumerate_avoiders(&q, &EnumerateOptions::default()).count;
            checks.push(plain(format!("table3 {q}"), v, actual, "table3"));
        }
    }
    // proved vincular pairs share evidence vectors
    let pairs = [["2-13", "2-31"], ["1-23", "1-32"], ["3-21", "3-12"]];
    for r in 1..cfg.n_max {
        for [a, b] in pairs {
            for n in r.max(2)..=cfg.n_max {
                let (pa, pb) = (pat(a), pat(b));
                checks.push(plain(
                    format!("r-wilf n={n} r={r} {a} vs {b}"),
                    leading_term(n, r, &pa)?,
                    leading_term(n, r, &pb)?,
                    "vincular-pair",
                ));
            }
        }
    }
    if cfg.n_max >= 5 {
        let w = classify_r_wilf(1, &Pattern::classical_length3(), cfg.n_max)?;
        checks.push(plain(
            format!("classes r=1 n<={}", cfg.n_max),
            Count::from(2u32),
            Count::from(w.classes.len()),
            "classical-classes",
        ));
        for r in 2..=5.min(cfg.n_max - 1) {
            let w = classify_r_wilf(r, &Pattern::classical_length3(), cfg.n_max)?;
            checks.push(plain(
                format!("classes r={r} n<={}", cfg.n_max),
                Count::from(3u32),
                Count::from(w.classes.len()),
                "classical-classes",
            ));
        }
    }
    let mut report = VerifyReport::default();
    record(&mut report, Suite::Tables, checks);
    Ok(report)
}

fn identities(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    type Row = (fn(usize) -> Count, &'static str, [u64; 11]);
    let table1: [Row; 3] = [
        (
            catalan,
            "catalan",
            [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796],
        ),
        (
            bell,
            "bell",
            [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975],
        ),
        (
            schroder,
            "schroder",
            [1, 2, 6, 22, 90, 394, 1806, 8558, 41586, 206098, 1037718],
        ),
    ];
    for (f, name, golden) in table1 {
        for (n, &g) in golden.iter().enumerate() {
            checks.push(plain(
                format!("{name}({n})"),
                Count::from(g),
                f(n),
                "table1",
            ));
        }
    }
    for n in 2..=30usize {
        for r in 2..=n {
            let sum: Count = (1..r)
                .map(|i| {
                    binomial(i + n - r, i as i64) * simion_schmidt_a(r - 1, i).expect("1 <= i < r")
                })
                .sum();
            checks.push(plain(
                format!("simion-schmidt sum n={n} r={r}"),
                ballot(n, r)?,
                sum,
                "simion-schmidt-sum",
            ));
            let vdm: Count = (1..r)
                .map(|i| binomial(i + n - r, i as i64 - 1) * binomial(2 * r - i - 3, r as i64 - 2))
                .sum();
            checks.push(plain(
                format!("vandermonde n={n} r={r}"),
                binomial(n + r - 2, r as i64 - 2),
                vdm,
                "vandermonde",
            ));
        }
    }
    for n in 4..=25 {
        let ok = catalan(n) < bell(n);
        checks.push(plain(
            format!("C_{n} < B_{n}"),
            Count::from(1u32),
            Count::from(ok as u32),
            "catalan-below-bell",
        ));
    }
    for n in 3..=25 {
        let ok = bell(n) > bell(n - 1) * 2u32;
        checks.push(plain(
            format!("B_{n} > 2 B_{}", n - 1),
            Count::from(1u32),
            Count::from(ok as u32),
            "bell-doubling",
        ));
    }
    for n in 2..=cfg.n_max {
        for r in 1..=n {
            let b = ballot(n, r)?;
            for p in ["123", "132"] {
                let q = PrefixQuery::new(n, Permutation::new(vec![r as u32])?, vec![pat(p)])?;
                let actual = enumerate_avoiders(&q, &EnumerateOptions::default()).count;
                checks.push(plain(format!("ballot {q}"), b.clone(), actual, "ballot"));
            }
        }
    }
    let mut report = VerifyReport::default();
    record(&mut report, Suite::Identities, checks);
    Ok(report)
}
