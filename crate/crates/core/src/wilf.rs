//! r-Wilf classification by leading-term evidence, and the leading-term tables.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::count_single_length3;
use crate::oracle::count_avoiders;
use crate::pattern::Pattern;
use crate::permutation::Permutation;
use crate::query::PrefixQuery;
use crate::sequences::{bell, catalan};
use crate::Count;

pub const EVIDENCE_LABEL: &str = "empirical";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub pattern: Pattern,
    /// `|S_{n,r}(pattern)|` for `n = n_min..=n_max`.
    #[serde(serialize_with = "crate::count_str::seq")]
    pub counts: Vec<Count>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WilfClassification {
    pub r: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Always [`EVIDENCE_LABEL`]: the classes agree on `n_min..=n_max` only.
    pub label: &'static str,
    pub patterns: Vec<Pattern>,
    pub classes: Vec<Vec<Pattern>>,
    pub evidence: Vec<Evidence>,
}

impl WilfClassification {
    /// The class containing `p`, if `p` was classified.
    pub fn class_of(&self, p: &Pattern) -> Option<&[Pattern]> {
        self.classes
            .iter()
            .find(|c| c.contains(p))
            .map(Vec::as_slice)
    }
}

/// `|S_{n,r}(p)|`: closed form for classical length-3 patterns, oracle otherwise.
pub fn leading_term(n: usize, r: usize, p: &Pattern) -> Result<Count> {
    let prefix = Permutation::new(vec![r as u32])?;
    if p.is_classical() && p.len() == 3 {
        return Ok(count_single_length3(n, &prefix, p)?.count);
    }
    Ok(count_avoiders(&PrefixQuery::new(
        n,
        prefix,
        vec![p.clone()],
    )?))
}

/// Group `patterns` by equal evidence vectors over `max(r, 2)..=n_max`.
///
/// Classes are listed in order of their first member in `patterns`, and members
/// keep their input order.
pub fn classify_r_wilf(r: usize, patterns: &[Pattern], n_max: usize) -> Result<WilfClassification> {
    if r == 0 {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            expected: "r >= 1".into(),
        });
    }
    if n_max < r {
        return Err(Error::OutOfRange {
            name: "n_max",
            value: n_max,
            expected: format!("n_max >= r = {r}"),
        });
    }
    if patterns.is_empty() {
        return Err(Error::InvalidQuery("no patterns to classify".into()));
    }
    let mut unique: Vec<Pattern> = Vec::new();
    for p in patterns {
        if !unique.contains(p) {
            unique.push(p.clone());
        }
    }
    // prefix (r) must be shorter than n
    let n_min = r.max(2);
    let n_max = n_max.max(n_min);

    let cells: Vec<(usize, usize)> = (0..unique.len())
        .flat_map(|i| (n_min..=n_max).map(move |n| (i, n)))
        .collect();
    let values: Vec<Count> = cells
        .par_iter()
        .map(|&(i, n)| leading_term(n, r, &unique[i]))
        .collect::<Result<_>>()?;
    let width = n_max - n_min + 1;
    let evidence: Vec<Evidence> = unique
        .iter()
        .zip(values.chunks(width))
        .map(|(p, counts)| Evidence {
            pattern: p.clone(),
            counts: counts.to_vec(),
        })
        .collect();

    let mut classes: Vec<Vec<Pattern>> = Vec::new();
    let mut keys: Vec<&[Count]> = Vec::new();
    for ev in &evidence {
        match keys.iter().position(|k| *k == ev.counts.as_slice()) {
            Some(i) => classes[i].push(ev.pattern.clone()),
            None => {
                keys.push(&ev.counts);
                classes.push(vec![ev.pattern.clone()]);
            }
        }
    }
    Ok(WilfClassification {
        r,
        n_min,
        n_max,
        label: EVIDENCE_LABEL,
        patterns: unique,
        classes,
        evidence,
    })
}

/// Closed-form leading terms `|S_{n,r}(σ)|` for `r ∈ {1, 2, n-1, n}` and every
/// classical `σ ∈ S_3`.
pub fn table2(n: usize) -> Result<BTreeMap<(usize, Pattern), Count>> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n,
            expected: "n >= 2".into(),
        });
    }
    let one = Count::one;
    let c1 = || catalan(n - 1);
    let c2 = || catalan(n - 2);
    let lin = || Count::from(n - 1);
    // columns: 123, 321, 132, 312, 213, 231
    let rows: [(usize, [Count; 6]); 4] = [
        (1, [one(), c1(), one(), c1(), c1(), c1()]),
        (2, [lin(), c1(), lin(), c1(), c2(), c2()]),
        (n - 1, [c1(), lin(), c1(), lin(), c2(), c2()]),
        (n, [c1(), one(), c1(), one(), c1(), c1()]),
    ];
    let columns = ["123", "321", "132", "312", "213", "231"];
    let mut out = BTreeMap::new();
    for (r, values) in rows {
        for (col, v) in columns.iter().zip(values) {
            let p: Pattern = col.parse()?;
            out.insert((r, p), v);
        }
    }
    Ok(out)
}

/// Leading terms `|S_{n,r}(p)|` for the twelve vincular length-3 patterns and
/// `n ∈ {r, r+1, r+2}`. Cells without a known closed form are `None`.
pub fn table3(r: usize) -> Result<BTreeMap<(Pattern, usize), Option<Count>>> {
    if r < 3 {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            expected: "r >= 3".into(),
        });
    }
    let b = bell;
    let pow = Count::one() << (r - 1);
    let rows: [(&str, [Option<Count>; 3]); 12] = [
        ("2-13", [Some(catalan(r - 1)), Some(catalan(r - 1)), None]),
        ("2-31", [Some(catalan(r - 1)), Some(catalan(r - 1)), None]),
        ("13-2", [Some(catalan(r - 1)), Some(catalan(r)), None]),
        ("3-21", [Some(Count::one()), Some(pow.clone()), None]),
        ("3-12", [Some(Count::one()), Some(pow), None]),
        ("31-2", [Some(Count::one()), Some(Count::from(r)), None]),
        (
            "1-23",
            [Some(b(r - 1)), Some(b(r)), Some(b(r + 1) - b(r - 1))],
        ),
        (
            "1-32",
            [Some(b(r - 1)), Some(b(r)), Some(b(r + 1) - b(r - 1))],
        ),
        ("12-3", [Some(b(r - 1)), Some(b(r)), Some(b(r + 1) - b(r))]),
        ("21-3", [Some(b(r - 1)), Some(b(r - 1)), None]),
        ("23-1", [Some(b(r - 1)), Some(b(r) - b(r - 1)), None]),
        ("32-1", [Some(b(r - 2)), None, None]),
    ];
    let mut out = BTreeMap::new();
    for (name, cells) in rows {
        let p: Pattern = name.parse()?;
        for (k, cell) in cells.into_iter().enumerate() {
            out.insert((p.clone(), r + k), cell);
        }
    }
    Ok(out)
}
