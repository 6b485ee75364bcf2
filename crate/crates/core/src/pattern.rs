//! Classical and vincular patterns and containment testing.
//!
//! A pattern is a permutation of `[k]` together with a split of its positions into
//! consecutive blocks. Positions inside one block must land on adjacent positions of
//! the host word; all-singleton blocks give a classical pattern.
//!
//! Text form: `"132"` (no dash) is classical; `"1-32"` is `1` followed by the
//! adjacent block `32`, i.e. `1\overline{32}`; `"21-3"` is `\overline{21}3`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::permutation::{parse_entries, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    perm: Permutation,
    /// Block lengths, left to right; they sum to `perm.len()`.
    blocks: Vec<usize>,
}

impl Pattern {
    pub fn classical(perm: Permutation) -> Result<Self> {
        let blocks = vec![1; perm.len()];
        Pattern::vincular(perm, blocks)
    }

    pub fn vincular(perm: Permutation, blocks: Vec<usize>) -> Result<Self> {
        if perm.is_empty() {
            return Err(Error::Empty);
        }
        if !perm.is_standard() {
            return Err(Error::NotStandard(perm.len()));
        }
        if blocks.contains(&0) || blocks.iter().sum::<usize>() != perm.len() {
            return Err(Error::InvalidBlocks {
                blocks,
                len: perm.len(),
            });
        }
        Ok(Pattern { perm, blocks })
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_classical(&self) -> bool {
        self.blocks.iter().all(|&b| b == 1)
    }

    /// Complement the underlying permutation; the block structure is unchanged.
    pub fn complement(&self) -> Pattern {
        Pattern {
            perm: self.perm.complement_within(self.len()),
            blocks: self.blocks.clone(),
        }
    }

    /// `adjacent[j]` is true when position `j` must sit right after position `j - 1`.
    fn adjacency(&self) -> Vec<bool> {
        let mut adj = Vec::with_capacity(self.len());
        for &b in &self.blocks {
            adj.push(false);
            adj.extend(std::iter::repeat_n(true, b - 1));
        }
        adj
    }

    pub(crate) fn matcher(&self) -> Matcher {
        Matcher {
            values: self.perm.entries().to_vec(),
            adjacent: self.adjacency(),
        }
    }

    /// The six classical patterns of length three, in lexicographic order.
    pub fn classical_length3() -> Vec<Pattern> {
        ["123", "132", "213", "231", "312", "321"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    /// The twelve vincular patterns of length three with exactly one adjacent pair.
    pub fn vincular_length3() -> Vec<Pattern> {
        [
            "1-23", "1-32", "2-13", "2-31", "3-12", "3-21", "12-3", "13-2", "21-3", "23-1", "31-2",
            "32-1",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.contains('-') {
            let perm = Permutation::new(parse_entries(s)?)?;
            return Pattern::classical(perm);
        }
        let mut entries = Vec::new();
        let mut blocks = Vec::new();
        for part in s.split('-') {
            let block = parse_entries(part)?;
            if block.is_empty() {
                return Err(Error::Parse {
                    input: s.to_string(),
                    reason: "empty block".to_string(),
                });
            }
            blocks.push(block.len());
            entries.extend(block);
        }
        Pattern::vincular(Permutation::new(entries)?, blocks)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.len() > 9;
        let sep = if wide { "," } else { "" };
        let mut rendered = Vec::with_capacity(self.blocks.len());
        let mut rest = self.perm.entries();
        for &b in &self.blocks {
            let (block, tail) = rest.split_at(b);
            rest = tail;
            let parts: Vec<String> = block.iter().map(u32::to_string).collect();
            rendered.push(parts.join(sep));
        }
        if self.is_classical() {
            f.write_str(&rendered.join(sep))
        } else {
            f.write_str(&rendered.join("-"))
        }
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Depth-first occurrence search over index assignments.
#[derive(Clone, Debug)]
pub(crate) struct Matcher {
    values: Vec<u32>,
    adjacent: Vec<bool>,
}

impl Matcher {
    pub(crate) fn len(&self) -> usize {
        self.values.len()
    }

    /// Any occurrence anywhere in `word`.
    pub(crate) fn occurs_in(&self, word: &[u32]) -> bool {
        if self.len() > word.len() {
            return false;
        }
        let mut slots = vec![0usize; self.len()];
        self.extend(word, &mut slots, 0, None)
    }

    /// An occurrence whose last pattern entry is the last entry of `word`.
    ///
    /// Every occurrence in a word has a last position, so checking this after each
    /// appended entry finds all occurrences exactly once.
    pub(crate) fn occurs_ending_at_last(&self, word: &[u32]) -> bool {
        let k = self.len();
        if k > word.len() {
            return false;
        }
        let mut slots = vec![0usize; k];
        self.extend(word, &mut slots, 0, Some(word.len() - 1))
    }

    fn extend(&self, word: &[u32], slots: &mut [usize], j: usize, last: Option<usize>) -> bool {
        let k = self.len();
        if j == k {
            return true;
        }
        let lo = if j == 0 { 0 } else { slots[j - 1] + 1 };
        let hi = match last {
            Some(end) if j == k - 1 => end,
            Some(end) => end - (k - 1 - j),
            None => word.len() - (k - j),
        };
        if lo > hi {
            return false;
        }
        let (lo, hi) = if j > 0 && self.adjacent[j] {
            if last.is_some() && j == k - 1 && lo != hi {
                return false;
            }
            (lo, lo)
        } else if last.is_some() && j == k - 1 {
            (hi, hi)
        } else {
            (lo, hi)
        };
        let pv = self.values[j];
        for i in lo..=hi {
            let wv = word[i];
            if let Some(end) = last {
                let tail = self.values[k - 1];
                if j + 1 < k && (wv < word[end]) != (pv < tail) {
                    continue;
                }
            }
            let compatible = (0..j).all(|a| (word[slots[a]] < wv) == (self.values[a] < pv));
            if compatible {
                slots[j] = i;
                if self.extend(word, slots, j + 1, last) {
                    return true;
                }
            }
        }
        false
    }
}

/// True when `word` contains `pat`, respecting the adjacency blocks of `pat`.
pub fn contains_pattern(word: &Permutation, pat: &Pattern) -> bool {
    pat.matcher().occurs_in(word.entries())
}

/// True when `word` contains none of `patterns`.
pub fn avoids_all(word: &Permutation, patterns: &[Pattern]) -> bool {
    patterns.iter().all(|p| !contains_pattern(word, p))
}

/// Complement of a pattern; blocks are kept.
pub fn complement_pattern(pat: &Pattern) -> Pattern {
    pat.complement()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    /// Independent containment check: every increasing position tuple.
    fn naive_contains(word: &[u32], pat: &Pattern) -> bool {
        let k = pat.len();
        let adj = pat.adjacency();
        let vals = pat.perm().entries();
        let n = word.len();
        if k > n {
            return false;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let adjacency_ok = (1..k).all(|j| !adj[j] || idx[j] == idx[j - 1] + 1);
            let order_ok = (0..k)
                .all(|a| (0..k).all(|b| (word[idx[a]] < word[idx[b]]) == (vals[a] < vals[b])));
            if adjacency_ok && order_ok {
                return true;
            }
            // next combination
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return false;
            }
            let i = i - 1;
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    fn all_perms(n: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (1..=n as u32).collect();
        loop {
            out.push(cur.clone());
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }

    #[test]
    fn parse_and_display() {
        let p = pat("1-32");
        assert_eq!(p.blocks(), &[1, 2]);
        assert!(!p.is_classical());
        assert_eq!(p.to_string(), "1-32");
        assert_eq!(pat("21-3").blocks(), &[2, 1]);
        assert!(pat("132").is_classical());
        assert_eq!(pat("1-3-2"), pat("132"));
        assert_eq!(pat("3,1,2").to_string(), "312");
        assert!("1--2".parse::<Pattern>().is_err());
        assert_eq!("24".parse::<Pattern>(), Err(Error::NotStandard(2)));
    }

    #[test]
    fn containment_examples() {
        assert!(contains_pattern(&w("12453"), &pat("132")));
        assert!(!contains_pattern(&w("12453"), &pat("321")));
        assert!(contains_pattern(&w("13542"), &pat("1-32")));
        assert!(!contains_pattern(&w("13542"), &pat("21-3")));
        assert!(contains_pattern(&w("13542"), &pat("23-1")));
        assert!(contains_pattern(&w("7"), &pat("1")));
        assert!(!contains_pattern(&Permutation::empty(), &pat("1")));
        assert!(!contains_pattern(&w("21"), &pat("123")));
    }

    #[test]
    fn avoids_all_examples() {
        assert!(!avoids_all(&w("12453"), &[pat("132"), pat("321")]));
        assert!(avoids_all(&w("321"), &[pat("123")]));
        assert!(avoids_all(&w("3142"), &[pat("3412"), pat("3421")]));
    }

    #[test]
    fn complement_pattern_examples() {
        assert_eq!(complement_pattern(&pat("2-13")), pat("2-31"));
        assert_eq!(complement_pattern(&pat("1-23")), pat("3-21"));
        assert_eq!(complement_pattern(&pat("231")), pat("213"));
    }

    #[test]
    fn matcher_agrees_with_naive_scan() {
        let mut patterns = Pattern::classical_length3();
        patterns.extend(Pattern::vincular_length3());
        patterns.extend(["3412", "3421", "12-34", "2-41-3", "1"].map(pat));
        for n in 0..=6 {
            for word in all_perms(n) {
                for p in &patterns {
                    assert_eq!(
                        p.matcher().occurs_in(&word),
                        naive_contains(&word, p),
                        "{word:?} {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn ending_at_last_finds_exactly_new_occurrences() {
        let mut patterns = Pattern::classical_length3();
        patterns.extend(Pattern::vincular_length3());
        for n in 1..=6 {
            for word in all_perms(n) {
                for p in &patterns {
                    let m = p.matcher();
                    let before = m.occurs_in(&word[..n - 1]);
                    let now = m.occurs_in(&word);
                    if !before {
                        assert_eq!(m.occurs_ending_at_last(&word), now, "{word:?} {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn containment_commutes_with_complement() {
        let mut patterns = Pattern::classical_length3();
        patterns.extend(Pattern::vincular_length3());
        for n in 1..=6 {
            for word in all_perms(n) {
                let word = Permutation::new(word).unwrap();
                let comp = word.complement().unwrap();
                for p in &patterns {
                    assert_eq!(
                        contains_pattern(&word, p),
                        contains_pattern(&comp, &p.complement())
                    );
                }
            }
        }
    }

    #[test]
    fn standardization_preserves_classical_containment() {
        // Words over subsets of [8] with length <= 6: relabel every S_k word onto
        // several subsets.
        let subsets: Vec<Vec<u32>> = vec![
            vec![2, 3, 5, 6, 7, 8],
            vec![1, 4, 5, 6, 7, 8],
            vec![1, 2, 3, 4, 5, 8],
            vec![2, 4, 6, 7, 8, 1],
        ];
        for k in 1..=6 {
            for perm in all_perms(k) {
                let base = Permutation::new(perm).unwrap();
                for s in &subsets {
                    let target = s.iter().copied().take(k).collect();
                    let word = base.matching_permutation(&target).unwrap();
                    let std = word.standardize().unwrap();
                    for p in Pattern::classical_length3() {
                        assert_eq!(contains_pattern(&word, &p), contains_pattern(&std, &p));
                    }
                }
            }
        }
    }

    #[test]
    fn claesson_reduction_for_dashed_two_patterns() {
        for n in 1..=7 {
            for word in all_perms(n) {
                let word = Permutation::new(word).unwrap();
                assert_eq!(
                    contains_pattern(&word, &pat("2-13")),
                    contains_pattern(&word, &pat("213"))
                );
                assert_eq!(
                    contains_pattern(&word, &pat("2-31")),
                    contains_pattern(&word, &pat("231"))
                );
            }
        }
    }
}
