use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences;
use crate::Count;

/// A sequence of distinct positive integers over an arbitrary finite ground set.
///
/// The ground set is implicit: it is the set of entries. The empty permutation is
/// allowed and acts as the identity for shuffles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for &e in &entries {
            if e == 0 {
                return Err(Error::NonPositiveEntry);
            }
            if !seen.insert(e) {
                return Err(Error::RepeatedEntry(e));
            }
        }
        Ok(Permutation { entries })
    }

    pub fn empty() -> Self {
        Permutation::default()
    }

    /// The identity `12…n`.
    pub fn identity(n: usize) -> Self {
        Permutation {
            entries: (1..=n as u32).collect(),
        }
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ground_set(&self) -> BTreeSet<u32> {
        self.entries.iter().copied().collect()
    }

    pub fn contains_entry(&self, a: u32) -> bool {
        self.entries.contains(&a)
    }

    /// True when the ground set is exactly `{1, …, len}`.
    pub fn is_standard(&self) -> bool {
        let n = self.len() as u32;
        self.entries.iter().all(|&e| e <= n)
    }

    pub fn min_entry(&self) -> Option<u32> {
        self.entries.iter().copied().min()
    }

    pub fn max_entry(&self) -> Option<u32> {
        self.entries.iter().copied().max()
    }

    /// `τ^c(i) = n + 1 - τ(i)` for `τ ∈ S_n`.
    pub fn complement(&self) -> Result<Permutation> {
        if !self.is_standard() {
            return Err(Error::NotStandard(self.len()));
        }
        Ok(self.complement_within(self.len()))
    }

    /// Entry-wise `n + 1 - e`, for words whose entries lie in `[n]`.
    ///
    /// Used to complement a prefix inside `S_n`, where the prefix itself is not a
    /// permutation of `[t]`.
    pub fn complement_within(&self, n: usize) -> Permutation {
        let top = n as u32 + 1;
        debug_assert!(self.entries.iter().all(|&e| e < top));
        Permutation {
            entries: self.entries.iter().map(|&e| top - e).collect(),
        }
    }

    /// Replace the i-th smallest entry by i.
    pub fn standardize(&self) -> Result<Permutation> {
        if self.is_empty() {
            return Err(Error::Empty);
        }
        let mut sorted = self.entries.clone();
        sorted.sort_unstable();
        let entries = self
            .entries
            .iter()
            .map(|e| sorted.binary_search(e).unwrap() as u32 + 1)
            .collect();
        Ok(Permutation { entries })
    }

    /// Relabel a permutation of `[k]` onto `set`: entry `j` becomes the j-th
    /// smallest element of `set`.
    pub fn matching_permutation(&self, set: &BTreeSet<u32>) -> Result<Permutation> {
        if set.len() != self.len() {
            return Err(Error::SizeMismatch {
                set: set.len(),
                len: self.len(),
            });
        }
        if !self.is_standard() {
            return Err(Error::NotStandard(self.len()));
        }
        if set.contains(&0) {
            return Err(Error::NonPositiveEntry);
        }
        let values: Vec<u32> = set.iter().copied().collect();
        let entries = self
            .entries
            .iter()
            .map(|&j| values[j as usize - 1])
            .collect();
        Ok(Permutation { entries })
    }

    /// The subsequence of entries that belong to `set`.
    pub fn subpermutation(&self, set: &BTreeSet<u32>) -> Result<Permutation> {
        if let Some(&missing) = set.iter().find(|a| !self.entries.contains(a)) {
            return Err(Error::NotSubset(missing));
        }
        Ok(Permutation {
            entries: self
                .entries
                .iter()
                .copied()
                .filter(|e| set.contains(e))
                .collect(),
        })
    }

    fn position(&self, a: u32) -> Result<usize> {
        self.entries
            .iter()
            .position(|&e| e == a)
            .ok_or(Error::MissingEntry(a))
    }

    /// Entries strictly before `a`.
    pub fn ancestors(&self, a: u32) -> Result<BTreeSet<u32>> {
        let i = self.position(a)?;
        Ok(self.entries[..i].iter().copied().collect())
    }

    /// Entries strictly after `a`.
    pub fn descendants(&self, a: u32) -> Result<BTreeSet<u32>> {
        let i = self.position(a)?;
        Ok(self.entries[i + 1..].iter().copied().collect())
    }

    /// All interleavings of `self` and `other` that keep both internal orders.
    ///
    /// Output is ordered so that taking from `self` first sorts earlier.
    pub fn shuffles(&self, other: &Permutation) -> Result<Vec<Permutation>> {
        let mine = self.ground_set();
        if let Some(&shared) = other.entries.iter().find(|e| mine.contains(e)) {
            return Err(Error::OverlappingGroundSets(shared));
        }
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(self.len() + other.len());
        shuffle_into(&self.entries, &other.entries, &mut buf, &mut out);
        Ok(out)
    }
}

fn shuffle_into(a: &[u32], b: &[u32], buf: &mut Vec<u32>, out: &mut Vec<Permutation>) {
    if a.is_empty() && b.is_empty() {
        out.push(Permutation {
            entries: buf.clone(),
        });
        return;
    }
    if let Some((&head, rest)) = a.split_first() {
        buf.push(head);
        shuffle_into(rest, b, buf, out);
        buf.pop();
    }
    if let Some((&head, rest)) = b.split_first() {
        buf.push(head);
        shuffle_into(a, rest, buf, out);
        buf.pop();
    }
}

/// Number of shuffles of two permutations of lengths `k` and `l`.
pub fn count_shuffles(k: usize, l: usize) -> Count {
    sequences::binomial(k + l, k as i64)
}

/// Parse an entry list: comma separated (`"3,1,2"`) or, when every entry is a
/// single digit, a bare digit string (`"312"`). Whitespace is ignored.
pub(crate) fn parse_entries(input: &str) -> Result<Vec<u32>> {
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let parse_err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if cleaned.is_empty() {
        return Ok(Vec::new());
    }
    if cleaned.contains(',') {
        cleaned
            .split(',')
            .map(|tok| {
                if tok.is_empty() {
                    return Err(parse_err("empty entry"));
                }
                tok.parse::<u32>()
                    .map_err(|_| parse_err(&format!("`{tok}` is not a positive integer")))
            })
            .collect()
    } else {
        cleaned
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| parse_err(&format!("unexpected character `{c}`")))
            })
            .collect()
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_entries(s)?)
    }
}

impl fmt::Display for Permutation {
    /// Digit-string form when every entry is at most 9, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.iter().all(|&e| e <= 9) {
            for e in &self.entries {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(entries: Vec<u32>) -> Result<Self> {
        Permutation::new(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(v: &[u32]) -> BTreeSet<u32> {
        v.iter().copied().collect()
    }

    #[test]
    fn parses_both_grammars() {
        assert_eq!(p("3,1,2"), p("312"));
        assert_eq!(p("10,2").entries(), &[10, 2]);
        assert_eq!(p("").len(), 0);
        assert_eq!(p(" 3, 1 ,2 ").entries(), &[3, 1, 2]);
        assert_eq!("3,3".parse::<Permutation>(), Err(Error::RepeatedEntry(3)));
        assert_eq!("301".parse::<Permutation>(), Err(Error::NonPositiveEntry));
        assert!("3,,1".parse::<Permutation>().is_err());
        assert!("3a1".parse::<Permutation>().is_err());
    }

    #[test]
    fn display_round_trips() {
        assert_eq!(p("567832").to_string(), "567832");
        assert_eq!(p("10,2,7").to_string(), "10,2,7");
    }

    #[test]
    fn complement_examples() {
        assert_eq!(p("123").complement().unwrap(), p("321"));
        assert_eq!(p("132").complement().unwrap(), p("312"));
        assert_eq!(p("213").complement().unwrap(), p("231"));
        assert_eq!(p("472").complement(), Err(Error::NotStandard(3)));
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(p("567832").standardize().unwrap(), p("345621"));
        assert_eq!(p("123").standardize().unwrap(), p("123"));
        assert_eq!(p("472").standardize().unwrap(), p("231"));
        assert_eq!(Permutation::empty().standardize(), Err(Error::Empty));
    }

    #[test]
    fn matching_permutation_examples() {
        assert_eq!(
            p("231").matching_permutation(&set(&[2, 4, 7])).unwrap(),
            p("472")
        );
        assert_eq!(
            p("12").matching_permutation(&set(&[5, 9])).unwrap(),
            p("59")
        );
        let m = p("3142").matching_permutation(&set(&[1, 3, 5, 7])).unwrap();
        assert_eq!(m, p("5173"));
        assert_eq!(m.standardize().unwrap(), p("3142"));
        assert_eq!(
            p("12").matching_permutation(&set(&[5])),
            Err(Error::SizeMismatch { set: 1, len: 2 })
        );
    }

    #[test]
    fn subpermutation_examples() {
        assert_eq!(
            p("543621").subpermutation(&set(&[2, 4, 6])).unwrap(),
            p("462")
        );
        assert_eq!(
            p("2785").subpermutation(&p("2785").ground_set()).unwrap(),
            p("2785")
        );
        assert_eq!(p("2785").subpermutation(&set(&[7, 8])).unwrap(), p("78"));
        assert_eq!(
            p("2785").subpermutation(&set(&[3])),
            Err(Error::NotSubset(3))
        );
    }

    #[test]
    fn ancestors_and_descendants() {
        let w = p("2785");
        assert_eq!(w.ancestors(8).unwrap(), set(&[2, 7]));
        assert_eq!(w.descendants(7).unwrap(), set(&[5, 8]));
        assert!(w.ancestors(2).unwrap().is_empty());
        assert_eq!(w.ancestors(4), Err(Error::MissingEntry(4)));
    }

    #[test]
    fn shuffle_examples() {
        let all = p("457").shuffles(&p("631")).unwrap();
        assert!(all.contains(&p("643571")));
        assert!(all.contains(&p("456317")));
        assert_eq!(all.len(), 20);
        assert_eq!(
            Permutation::empty().shuffles(&p("2785")).unwrap(),
            vec![p("2785")]
        );
        assert_eq!(p("12").shuffles(&p("34")).unwrap().len(), 6);
        assert_eq!(
            p("12").shuffles(&p("23")),
            Err(Error::OverlappingGroundSets(2))
        );
    }

    #[test]
    fn count_shuffles_examples() {
        assert_eq!(count_shuffles(3, 3), Count::from(20u32));
        assert_eq!(count_shuffles(0, 5), Count::from(1u32));
        assert_eq!(count_shuffles(1, 1), Count::from(2u32));
    }

    #[test]
    fn shuffle_count_matches_enumeration_exhaustively() {
        // s over {1..k}, t over {k+1..k+l}, every arrangement of both, k, l <= 4.
        for k in 0..=4usize {
            for l in 0..=4usize {
                let a = Permutation::identity(k);
                let b = Permutation::new((k as u32 + 1..=(k + l) as u32).rev().collect()).unwrap();
                let all = a.shuffles(&b).unwrap();
                assert_eq!(Count::from(all.len()), count_shuffles(k, l));
                let distinct: HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
                for w in &all {
                    assert_eq!(w.subpermutation(&a.ground_set()).unwrap(), a);
                    assert_eq!(w.subpermutation(&b.ground_set()).unwrap(), b);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn standardize_inverts_matching(
            perm in (1usize..=5).prop_flat_map(|k| Just((1..=k as u32).collect::<Vec<_>>()).prop_shuffle()),
            pool in proptest::collection::btree_set(1u32..40, 5),
        ) {
            let w = Permutation::new(perm).unwrap();
            let target: BTreeSet<u32> = pool.into_iter().take(w.len()).collect();
            let m = w.matching_permutation(&target).unwrap();
            prop_assert_eq!(m.ground_set(), target);
            prop_assert_eq!(m.standardize().unwrap(), w);
        }

        #[test]
        fn complement_is_an_involution(
            perm in (1usize..=8).prop_flat_map(|k| Just((1..=k as u32).collect::<Vec<_>>()).prop_shuffle()),
        ) {
            let w = Permutation::new(perm).unwrap();
            prop_assert_eq!(w.complement().unwrap().complement().unwrap(), w);
        }
    }
}
