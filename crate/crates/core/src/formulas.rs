//! Closed-form counts for prefix-constrained avoidance.
//!
//! Covers single classical patterns of length three, all fifteen pairs of them,
//! and the pair `{3412, 3421}`. Every result carries the [`Rule`] naming the case
//! that produced it. Patterns `213`, `312`, `321` (and the six non-base pairs) are
//! answered by complementing prefix and patterns and using the base case.
//!
//! Conventions for inputs outside the theorems' hypotheses:
//! * empty prefix: the unconstrained totals (Catalan, the pair totals, Schröder);
//! * `n < 3`: the exhaustive oracle;
//! * a prefix that already contains a pattern: zero.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::oracle::count_avoiders;
use crate::pattern::{avoids_all, Pattern};
use crate::permutation::Permutation;
use crate::query::PrefixQuery;
use crate::sequences::{ballot, binomial, catalan, schroder};
use crate::Count;

macro_rules! rules {
    ($($variant:ident => $id:literal, $family:ident;)*) => {
        /// The theorem branch that produced a count.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Rule {
            $($variant,)*
        }

        impl Rule {
            pub const ALL: &'static [Rule] = &[$(Rule::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Rule::$variant => $id,)*
                }
            }

            pub fn family(self) -> Family {
                match self {
                    $(Rule::$variant => Family::$family,)*
                }
            }
        }
    };
}

/// Which counting operation a rule belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Shared by every operation.
    Common,
    Single,
    Pair,
    Schroder,
}

rules! {
    SmallNOracle => "small-n-oracle", Common;
    PrefixContainsPattern => "prefix-contains-pattern", Common;

    CatalanTotal => "catalan-total", Single;
    Single231Zero => "231-zero-condition", Single;
    Single231Product => "231-block-product", Single;
    Single123Zero => "123-zero-condition", Single;
    Single123Ballot => "123-ballot-reduction", Single;
    Single132Zero => "132-zero-condition", Single;
    Single132Ballot => "132-ballot-reduction", Single;

    PairTotalPowerOfTwo => "pair-total-power-of-two", Pair;
    PairTotalBinomial => "pair-total-binomial", Pair;
    PairTotal123321 => "pair-123-321-total", Pair;
    Pair132312Consecutive => "pair-132-312-consecutive", Pair;
    Pair132312Zero => "pair-132-312-not-consecutive", Pair;
    Pair213231Shuffle => "pair-213-231-shuffle", Pair;
    Pair213231Zero => "pair-213-231-not-shuffle", Pair;
    Pair123132Power => "pair-123-132-power", Pair;
    Pair123132HeadMismatch => "pair-123-132-head-mismatch", Pair;
    Pair123132TailMismatch => "pair-123-132-tail-mismatch", Pair;
    Pair123213Zero => "pair-123-213-zero", Pair;
    Pair123213Power => "pair-123-213-power", Pair;
    Pair132213ZeroStraddle => "pair-132-213-zero-straddle", Pair;
    Pair132213ZeroPair => "pair-132-213-zero-pair", Pair;
    Pair132213Power => "pair-132-213-power", Pair;
    Pair132231Zero => "pair-132-231-zero", Pair;
    Pair132231Power => "pair-132-231-power", Pair;
    Pair123312Case1 => "pair-123-312-case-1", Pair;
    Pair123312Case2 => "pair-123-312-case-2", Pair;
    Pair123312Case3 => "pair-123-312-case-3", Pair;
    Pair123312Case4 => "pair-123-312-case-4", Pair;
    Pair123312Case5 => "pair-123-312-case-5", Pair;
    Pair123312Case6 => "pair-123-312-case-6", Pair;
    Pair123231TopDecreasing => "pair-123-231-top-decreasing", Pair;
    Pair123231Case1 => "pair-123-231-case-1", Pair;
    Pair123231Case2 => "pair-123-231-case-2", Pair;
    Pair123231Case3 => "pair-123-231-case-3", Pair;
    Pair123231Case3Straddle => "pair-123-231-case-3-straddle", Pair;
    Pair123321ErdosSzekeres => "pair-123-321-erdos-szekeres", Pair;
    Pair123321SmallOracle => "pair-123-321-small-oracle", Pair;

    SchroderTotal => "schroder-total", Schroder;
    Schroder3412ZeroU => "3412-3421-zero-u", Schroder;
    Schroder3412ZeroV => "3412-3421-zero-v", Schroder;
    Schroder3412Product => "3412-3421-block-product", Schroder;
}

impl Rule {
    /// Rules a sweep of the given family can reach.
    pub fn reachable_in(family: Family) -> Vec<Rule> {
        Rule::ALL
            .iter()
            .copied()
            .filter(|r| r.family() == family || r.family() == Family::Common)
            .collect()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOutcome {
    pub count: Count,
    pub rule: Rule,
    /// The count was obtained on the complemented prefix and patterns.
    pub via_complement: bool,
}

impl CountOutcome {
    fn new(count: Count, rule: Rule) -> Self {
        CountOutcome {
            count,
            rule,
            via_complement: false,
        }
    }

    /// `rule`, prefixed with `complement/` when the complement route was taken.
    pub fn rule_id(&self) -> String {
        if self.via_complement {
            format!("complement/{}", self.rule)
        } else {
            self.rule.to_string()
        }
    }
}

impl Serialize for CountOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("CountOutcome", 2)?;
        s.serialize_field("count", &self.count.to_string())?;
        s.serialize_field("rule", &self.rule_id())?;
        s.end()
    }
}

/// Order statistics, gaps and the `U`/`V`/`j` data of a prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixAnalysis {
    pub n: usize,
    /// `0 = c_(0) < c_(1) < … < c_(t) < c_(t+1) = n + 1`.
    pub order_stats: Vec<u32>,
    /// `gaps[k-1] = c_(k) - c_(k-1) - 1` for `k = 1..=t+1`; they sum to `n - t`.
    pub gaps: Vec<usize>,
    pub min: Option<u32>,
    pub max: Option<u32>,
    /// Prefix entries heading a 231 inside the prefix.
    pub u: BTreeSet<u32>,
    /// Prefix entries followed later in the prefix by a larger entry.
    pub v: BTreeSet<u32>,
    /// Least `k` (1-based) with `c_(k) - c_(k-1) > 1`.
    pub j: Option<usize>,
}

pub fn analyze_prefix(n: usize, prefix: &Permutation) -> Result<PrefixAnalysis> {
    if prefix.len() >= n || prefix.entries().iter().any(|&c| c as usize > n) {
        return Err(Error::InvalidQuery(format!(
            "prefix {prefix} is not valid for n = {n}"
        )));
    }
    let c = prefix.entries();
    let t = c.len();
    let mut order_stats = Vec::with_capacity(t + 2);
    order_stats.push(0);
    let mut sorted = c.to_vec();
    sorted.sort_unstable();
    order_stats.extend(sorted);
    order_stats.push(n as u32 + 1);
    let gaps: Vec<usize> = order_stats
        .windows(2)
        .map(|w| (w[1] - w[0] - 1) as usize)
        .collect();
    let j = gaps.iter().position(|&g| g > 0).map(|k| k + 1);

    let mut u = BTreeSet::new();
    let mut v = BTreeSet::new();
    for i in 0..t {
        for jj in i + 1..t {
            if c[i] < c[jj] {
                v.insert(c[i]);
                if c[jj + 1..].iter().any(|&ck| ck < c[i]) {
                    u.insert(c[i]);
                }
            }
        }
    }
    Ok(PrefixAnalysis {
        n,
        order_stats,
        gaps,
        min: prefix.min_entry(),
        max: prefix.max_entry(),
        u,
        v,
        j,
    })
}

/// Read-only view of a nonempty prefix inside `[n]`.
struct Ctx<'a> {
    n: usize,
    c: &'a [u32],
    free: Vec<u32>,
}

impl<'a> Ctx<'a> {
    fn new(q: &'a PrefixQuery) -> Self {
        Ctx {
            n: q.n(),
            c: q.prefix().entries(),
            free: q.free_values(),
        }
    }

    fn t(&self) -> usize {
        self.c.len()
    }

    fn min(&self) -> u32 {
        *self.c.iter().min().unwrap()
    }

    fn max(&self) -> u32 {
        *self.c.iter().max().unwrap()
    }

    fn any_free(&self, pred: impl Fn(u32) -> bool) -> bool {
        self.free.iter().any(|&a| pred(a))
    }

    /// Some `i < j` with `pred(c_i, c_j)`.
    fn any_pair(&self, pred: impl Fn(u32, u32) -> bool) -> bool {
        let c = self.c;
        (0..c.len()).any(|i| (i + 1..c.len()).any(|j| pred(c[i], c[j])))
    }

    fn is_consecutive(&self) -> bool {
        (self.max() - self.min()) as usize + 1 == self.t()
    }

    /// `2^{max(0, min c - 2)}`.
    fn min_power(&self) -> Count {
        pow2(self.min().saturating_sub(2) as usize)
    }
}

fn pow2(k: usize) -> Count {
    Count::one() << k
}

fn zero() -> Count {
    Count::zero()
}

fn parse_pat(s: &str) -> Pattern {
    s.parse().expect("static pattern")
}

fn require_classical3(p: &Pattern) -> Result<()> {
    if p.is_classical() && p.len() == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{p} is not a classical pattern of length 3"
        )))
    }
}

/// Shared front matter: totals for the empty prefix, the oracle for `n < 3`,
/// zero when the prefix already contains a pattern. Otherwise `base` decides.
fn dispatch(
    q: &PrefixQuery,
    total: impl Fn(usize) -> (Count, Rule),
    base: impl Fn(&PrefixQuery) -> Result<CountOutcome>,
) -> Result<CountOutcome> {
    if q.t() == 0 {
        let (count, rule) = total(q.n());
        return Ok(CountOutcome::new(count, rule));
    }
    if q.n() < 3 {
        return Ok(CountOutcome::new(count_avoiders(q), Rule::SmallNOracle));
    }
    if !avoids_all(q.prefix(), q.patterns()) {
        return Ok(CountOutcome::new(zero(), Rule::PrefixContainsPattern));
    }
    base(q)
}

fn complemented(outcome: Result<CountOutcome>) -> Result<CountOutcome> {
    outcome.map(|o| CountOutcome {
        via_complement: true,
        ..o
    })
}

// ---------------------------------------------------------------------------
// single patterns

/// `|S_{n,(c_1..c_t)}(p)|` for a classical `p ∈ S_3`.
pub fn count_single_length3(n: usize, prefix: &Permutation, p: &Pattern) -> Result<CountOutcome> {
    require_classical3(p)?;
    let q = PrefixQuery::new(n, prefix.clone(), vec![p.clone()])?;
    dispatch(&q, |n| (catalan(n), Rule::CatalanTotal), single_base)
}

fn single_base(q: &PrefixQuery) -> Result<CountOutcome> {
    let p = q.patterns()[0].to_string();
    let ctx = Ctx::new(q);
    let (count, rule) = match p.as_str() {
        "231" => single_231(&ctx),
        "123" => single_123(&ctx)?,
        "132" => single_132(&ctx)?,
        _ => return complemented(single_base(&q.complemented())),
    };
    Ok(CountOutcome::new(count, rule))
}

fn single_231(ctx: &Ctx) -> (Count, Rule) {
    if ctx.any_pair(|ci, cj| ci < cj && ctx.any_free(|a| a < ci)) {
        return (zero(), Rule::Single231Zero);
    }
    let mut stats = vec![0u32];
    let mut sorted = ctx.c.to_vec();
    sorted.sort_unstable();
    stats.extend(sorted);
    stats.push(ctx.n as u32 + 1);
    let product = stats
        .windows(2)
        .map(|w| catalan((w[1] - w[0] - 1) as usize))
        .product();
    (product, Rule::Single231Product)
}

fn single_123(ctx: &Ctx) -> Result<(Count, Rule)> {
    if ctx.any_pair(|ci, cj| ci < cj && ctx.any_free(|a| a > cj)) {
        return Ok((zero(), Rule::Single123Zero));
    }
    Ok((
        ballot(ctx.n - ctx.t() + 1, ctx.min() as usize)?,
        Rule::Single123Ballot,
    ))
}

fn single_132(ctx: &Ctx) -> Result<(Count, Rule)> {
    if ctx.any_pair(|ci, cj| ci < cj && ctx.any_free(|a| ci < a && a < cj)) {
        return Ok((zero(), Rule::Single132Zero));
    }
    Ok((
        ballot(ctx.n - ctx.t() + 1, ctx.min() as usize)?,
        Rule::Single132Ballot,
    ))
}

// ---------------------------------------------------------------------------
// pairs of length-3 patterns

const BASE_PAIRS: [(&str, &str); 9] = [
    ("132", "312"),
    ("213", "231"),
    ("123", "132"),
    ("123", "213"),
    ("132", "213"),
    ("132", "231"),
    ("123", "312"),
    ("123", "231"),
    ("123", "321"),
];

fn pair_key(a: &Pattern, b: &Pattern) -> (String, String) {
    let (x, y) = (a.to_string(), b.to_string());
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

fn pair_total(a: &Pattern, b: &Pattern, n: usize) -> (Count, Rule) {
    let key = pair_key(a, b);
    match (key.0.as_str(), key.1.as_str()) {
        ("123", "321") => {
            let v = match n {
                1 | 2 => n,
                3 | 4 => 4,
                _ => 0,
            };
            (Count::from(v), Rule::PairTotal123321)
        }
        ("123", "312") | ("132", "321") | ("123", "231") | ("213", "321") => {
            (binomial(n, 2) + 1u32, Rule::PairTotalBinomial)
        }
        _ => (pow2(n - 1), Rule::PairTotalPowerOfTwo),
    }
}

/// `|S_{n,(c_1..c_t)}(a, b)|` for distinct classical `a, b ∈ S_3`.
pub fn count_pair_length3(
    n: usize,
    prefix: &Permutation,
    a: &Pattern,
    b: &Pattern,
) -> Result<CountOutcome> {
    require_classical3(a)?;
    require_classical3(b)?;
    if a == b {
        return Err(Error::Unsupported(format!(
            "pair needs two distinct patterns, got {a} twice"
        )));
    }
    let q = PrefixQuery::new(n, prefix.clone(), vec![a.clone(), b.clone()])?;
    dispatch(&q, |n| pair_total(a, b, n), pair_base)
}

fn pair_base(q: &PrefixQuery) -> Result<CountOutcome> {
    let pats = q.patterns();
    let key = pair_key(&pats[0], &pats[1]);
    let is_base = BASE_PAIRS.iter().any(|&(x, y)| key.0 == x && key.1 == y);
    if !is_base {
        return complemented(pair_base(&q.complemented()));
    }
    let ctx = Ctx::new(q);
    let (count, rule) = match (key.0.as_str(), key.1.as_str()) {
        ("132", "312") => pair_132_312(&ctx),
        ("213", "231") => pair_213_231(&ctx),
        ("123", "132") => pair_123_132(&ctx),
        ("123", "213") => pair_123_213(&ctx),
        ("132", "213") => pair_132_213(&ctx),
        ("132", "231") => pair_132_231(&ctx),
        ("123", "312") => pair_123_312(&ctx),
        ("123", "231") => pair_123_231(&ctx),
        ("123", "321") => {
            if ctx.n >= 5 {
                (zero(), Rule::Pair123321ErdosSzekeres)
            } else {
                (count_avoiders(q), Rule::Pair123321SmallOracle)
            }
        }
        _ => unreachable!("base pair table is exhaustive"),
    };
    Ok(CountOutcome::new(count, rule))
}

fn pair_132_312(ctx: &Ctx) -> (Count, Rule) {
    if ctx.is_consecutive() {
        let x = ctx.min() as i64;
        (
            binomial(ctx.n - ctx.t(), x - 1),
            Rule::Pair132312Consecutive,
        )
    } else {
        (zero(), Rule::Pair132312Zero)
    }
}

/// Prefix is a shuffle of `(1, 2, …, t-s)` and `(n, n-1, …, n-s+1)` for some `s`.
fn is_low_high_shuffle(c: &[u32], n: usize) -> bool {
    let t = c.len();
    (0..=t).any(|s| {
        let low_top = (t - s) as u32;
        let high_bottom = (n - s + 1) as u32;
        let low: Vec<u32> = c.iter().copied().filter(|&v| v <= low_top).collect();
        let high: Vec<u32> = c.iter().copied().filter(|&v| v >= high_bottom).collect();
        low.len() == t - s
            && high.len() == s
            && low.iter().copied().eq(1..=low_top)
            && high.iter().copied().eq((high_bottom..=n as u32).rev())
    })
}

fn pair_213_231(ctx: &Ctx) -> (Count, Rule) {
    if is_low_high_shuffle(ctx.c, ctx.n) {
        (pow2(ctx.n - ctx.t() - 1), Rule::Pair213231Shuffle)
    } else {
        (zero(), Rule::Pair213231Zero)
    }
}

fn pair_123_132(ctx: &Ctx) -> (Count, Rule) {
    let n = ctx.n as u32;
    let alpha = *ctx.free.last().expect("t < n");
    let head_len = (n - alpha) as usize;
    let head: BTreeSet<u32> = ctx.c[..head_len].iter().copied().collect();
    if !head.iter().copied().eq(alpha + 1..=n) {
        return (zero(), Rule::Pair123132HeadMismatch);
    }
    // The remaining entries must read α-1, α-2, …, n-t.
    let tail = &ctx.c[head_len..];
    if !tail
        .iter()
        .copied()
        .eq((1..=tail.len() as u32).map(|i| alpha - i))
    {
        return (zero(), Rule::Pair123132TailMismatch);
    }
    debug_assert!(tail.last().is_none_or(|&v| v as usize == ctx.n - ctx.t()));
    (pow2(ctx.n - ctx.t() - 1), Rule::Pair123132Power)
}

fn pair_123_213(ctx: &Ctx) -> (Count, Rule) {
    if ctx.any_pair(|ci, cj| ctx.any_free(|a| ci < a && cj < a)) {
        (zero(), Rule::Pair123213Zero)
    } else {
        (ctx.min_power(), Rule::Pair123213Power)
    }
}

fn pair_132_213(ctx: &Ctx) -> (Count, Rule) {
    let x = ctx.min();
    let straddle = ctx
        .c
        .iter()
        .any(|&ci| ctx.any_free(|a| x < a && a < ci) && ctx.any_free(|b| b > ci));
    if straddle {
        return (zero(), Rule::Pair132213ZeroStraddle);
    }
    if ctx.any_pair(|ci, cj| ctx.any_free(|a| (ci < a && a < cj) || (cj < ci && ci < a))) {
        return (zero(), Rule::Pair132213ZeroPair);
    }
    (ctx.min_power(), Rule::Pair132213Power)
}

fn pair_132_231(ctx: &Ctx) -> (Count, Rule) {
    if ctx.any_pair(|ci, cj| ctx.any_free(|a| (ci < a && a < cj) || (a < ci && ci < cj))) {
        (zero(), Rule::Pair132231Zero)
    } else {
        (ctx.min_power(), Rule::Pair132231Power)
    }
}

fn pair_123_312(ctx: &Ctx) -> (Count, Rule) {
    let x = ctx.min();
    let increasing_then_larger = ctx.any_pair(|ci, cj| ci < cj && ctx.any_free(|a| a > cj));
    if ctx.is_consecutive() {
        if increasing_then_larger {
            (zero(), Rule::Pair123312Case1)
        } else if x as usize == ctx.n - ctx.t() + 1 {
            (Count::one(), Rule::Pair123312Case2)
        } else {
            (Count::from(x), Rule::Pair123312Case3)
        }
    } else if increasing_then_larger {
        (zero(), Rule::Pair123312Case4)
    } else if ctx.any_pair(|ci, cj| ctx.any_free(|a| cj < a && a < ci)) {
        (zero(), Rule::Pair123312Case5)
    } else {
        (Count::one(), Rule::Pair123312Case6)
    }
}

fn pair_123_231(ctx: &Ctx) -> (Count, Rule) {
    let n = ctx.n as u32;
    let t = ctx.t() as u32;
    if ctx.c.iter().copied().eq((n - t + 1..=n).rev()) {
        return (
            binomial(ctx.n - ctx.t(), 2) + 1u32,
            Rule::Pair123231TopDecreasing,
        );
    }
    if ctx.min() == n - t + 1 {
        // prefix is a reordering of the top t values
        return (zero(), Rule::Pair123231Case1);
    }
    if ctx.any_pair(|ci, cj| ci < cj && ctx.any_free(|a| a > cj || a < ci)) {
        return (zero(), Rule::Pair123231Case2);
    }
    // The only candidate is c, then (x-1, …, 1), then the free values above x in
    // decreasing order. It holds a 231 iff free values above x straddle some c_i.
    let x = ctx.min();
    let straddled = ctx
        .c
        .iter()
        .any(|&ci| ctx.any_free(|b| x < b && b < ci) && ctx.any_free(|a| a > ci));
    if straddled {
        (zero(), Rule::Pair123231Case3Straddle)
    } else {
        (Count::one(), Rule::Pair123231Case3)
    }
}

// ---------------------------------------------------------------------------
// {3412, 3421}

/// `|S_{n,(c_1..c_t)}(3412, 3421)|`.
pub fn count_pair_3412_3421(n: usize, prefix: &Permutation) -> Result<CountOutcome> {
    let q = PrefixQuery::new(
        n,
        prefix.clone(),
        vec![parse_pat("3412"), parse_pat("3421")],
    )?;
    dispatch(
        &q,
        |n| (schroder(n - 1), Rule::SchroderTotal),
        schroder_base,
    )
}

fn schroder_base(q: &PrefixQuery) -> Result<CountOutcome> {
    let analysis = analyze_prefix(q.n(), q.prefix())?;
    let used = q.prefix().ground_set();
    let free_below = |bound: u32| (1..bound).filter(|v| !used.contains(v)).count();
    if let Some(&max_u) = analysis.u.iter().next_back() {
        if free_below(max_u) >= 1 {
            return Ok(CountOutcome::new(zero(), Rule::Schroder3412ZeroU));
        }
    }
    if let Some(&max_v) = analysis.v.iter().next_back() {
        if free_below(max_v) >= 2 {
            return Ok(CountOutcome::new(zero(), Rule::Schroder3412ZeroV));
        }
    }
    let j = analysis.j.expect("some gap is positive because t < n");
    let first = schroder(analysis.gaps[j - 1] - 1);
    let rest: Count = analysis.gaps[j..].iter().map(|&g| schroder(g)).product();
    Ok(CountOutcome::new(first * rest, Rule::Schroder3412Product))
}

// ---------------------------------------------------------------------------

/// Pick the closed form matching the query's pattern set.
pub fn count(q: &PrefixQuery) -> Result<CountOutcome> {
    let pats = q.patterns();
    let all_len3 = pats.iter().all(|p| p.is_classical() && p.len() == 3);
    match pats {
        [p] if all_len3 => count_single_length3(q.n(), q.prefix(), p),
        [a, b] if all_len3 => count_pair_length3(q.n(), q.prefix(), a, b),
        [a, b] if *a == parse_pat("3412") && *b == parse_pat("3421") => {
            count_pair_3412_3421(q.n(), q.prefix())
        }
        _ => {
            let names: Vec<String> = pats.iter().map(Pattern::to_string).collect();
            Err(Error::Unsupported(format!(
                "no closed form for {{{}}}; supported: one or two classical length-3 patterns, or {{3412,3421}}",
                names.join(",")
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    fn single(n: usize, prefix: &str, sigma: &str) -> CountOutcome {
        count_single_length3(n, &p(prefix), &pat(sigma)).unwrap()
    }

    fn pair(n: usize, prefix: &str, a: &str, b: &str) -> CountOutcome {
        count_pair_length3(n, &p(prefix), &pat(a), &pat(b)).unwrap()
    }

    #[test]
    fn analysis_examples() {
        let a = analyze_prefix(6, &p("312")).unwrap();
        assert_eq!(a.order_stats, vec![0, 1, 2, 3, 7]);
        assert_eq!(a.gaps, vec![0, 0, 0, 3]);
        assert!(a.u.is_empty());
        assert_eq!(a.v, BTreeSet::from([1]));
        assert_eq!(a.j, Some(4));

        let a = analyze_prefix(7, &p("24")).unwrap();
        assert_eq!(a.gaps, vec![1, 1, 3]);
        assert_eq!(a.j, Some(1));
        assert_eq!(a.v, BTreeSet::from([2]));
        assert!(a.u.is_empty());

        let a = analyze_prefix(5, &p("")).unwrap();
        assert_eq!(a.gaps, vec![5]);
        assert_eq!(a.j, Some(1));
        assert_eq!((a.min, a.max), (None, None));

        let a = analyze_prefix(8, &p("3462")).unwrap();
        assert_eq!(a.u, BTreeSet::from([3, 4]));
        assert_eq!(a.v, BTreeSet::from([3, 4]));
        assert_eq!(a.gaps.iter().sum::<usize>(), 4);

        assert!(analyze_prefix(3, &p("123")).is_err());
    }

    #[test]
    fn single_examples() {
        let o = single(6, "312", "231");
        assert_eq!((o.count, o.rule), (c(5), Rule::Single231Product));
        let o = single(6, "21", "123");
        assert_eq!((o.count, o.rule), (c(1), Rule::Single123Ballot));
        let o = single(5, "13", "123");
        assert_eq!((o.count, o.rule), (c(0), Rule::Single123Zero));
        let o = single(6, "3", "132");
        assert_eq!(
            (o.count, o.rule),
            (ballot(6, 3).unwrap(), Rule::Single132Ballot)
        );
        let o = single(6, "14", "132");
        assert_eq!((o.count, o.rule), (c(0), Rule::Single132Zero));
        let o = single(6, "23", "231");
        assert_eq!((o.count, o.rule), (c(0), Rule::Single231Zero));
    }

    #[test]
    fn single_complement_route() {
        let o = single(6, "465", "213");
        assert!(o.via_complement);
        assert_eq!(o.rule, Rule::Single231Product);
        assert_eq!(o.rule_id(), "complement/231-block-product");
        assert_eq!(single(6, "465", "213").count, single(6, "312", "231").count);
    }

    #[test]
    fn totals_and_conventions() {
        assert_eq!(single(7, "", "132").count, catalan(7));
        assert_eq!(single(7, "", "132").rule, Rule::CatalanTotal);
        assert_eq!(single(2, "1", "123").rule, Rule::SmallNOracle);
        let o = single(6, "132", "132");
        assert_eq!((o.count, o.rule), (c(0), Rule::PrefixContainsPattern));
        assert!(count_single_length3(6, &p("123"), &pat("1234")).is_err());
        assert!(count_single_length3(6, &p("123"), &pat("1-23")).is_err());
        assert!(count_single_length3(3, &p("123"), &pat("123")).is_err());
    }

    #[test]
    fn pair_examples() {
        assert_eq!(pair(7, "45", "132", "312").count, c(10));
        assert_eq!(pair(6, "65", "123", "213").count, c(8));
        let o = pair(6, "65", "123", "231");
        assert_eq!((o.count, o.rule), (c(7), Rule::Pair123231TopDecreasing));
        let o = pair(4, "31", "123", "231");
        assert_eq!((o.count, o.rule), (c(0), Rule::Pair123231Case3Straddle));
        let o = pair(6, "43", "123", "312");
        assert_eq!((o.count, o.rule), (c(3), Rule::Pair123312Case3));
        for prefix in ["1", "21", "54", "253"] {
            let o = pair(5, prefix, "123", "321");
            assert_eq!(o.count, c(0));
        }
        assert_eq!(pair(4, "", "123", "321").count, c(4));
        assert_eq!(pair(8, "", "132", "213").count, c(128));
        assert_eq!(pair(8, "", "321", "132").count, c(29));
        let o = pair(6, "1", "312", "321");
        assert_eq!((o.count, o.rule), (c(16), Rule::Pair123132Power));
        assert!(o.via_complement);
        let o = pair(6, "4", "123", "132");
        assert_eq!((o.count, o.rule), (c(0), Rule::Pair123132TailMismatch));
        assert!(count_pair_length3(6, &p("3"), &pat("123"), &pat("123")).is_err());
    }

    #[test]
    fn schroder_examples() {
        let s = |n, prefix: &str| count_pair_3412_3421(n, &p(prefix)).unwrap();
        assert_eq!(s(6, "4").count, c(36));
        assert_eq!(s(6, "1").count, c(90));
        assert_eq!(s(7, "24").count, c(44));
        assert_eq!(s(7, "").count, schroder(6));
        let o = s(5, "342");
        assert_eq!((o.count, o.rule), (c(0), Rule::Schroder3412ZeroU));
        let o = s(6, "45");
        assert_eq!((o.count, o.rule), (c(0), Rule::Schroder3412ZeroV));
        let o = s(6, "3412");
        assert_eq!((o.count, o.rule), (c(0), Rule::PrefixContainsPattern));
    }

    #[test]
    fn dispatcher() {
        let q = |list: &[&str]| {
            PrefixQuery::new(6, p("312"), list.iter().map(|s| pat(s)).collect()).unwrap()
        };
        assert_eq!(count(&q(&["231"])).unwrap().rule, Rule::Single231Product);
        assert_eq!(count(&q(&["3421", "3412"])).unwrap().count, c(6));
        assert!(count(&q(&["1-23"])).is_err());
        assert!(count(&q(&["123", "132", "213"])).is_err());
    }

    #[test]
    fn rule_ids_are_unique() {
        let ids: BTreeSet<&str> = Rule::ALL.iter().map(|r| r.as_str()).collect();
        assert_eq!(ids.len(), Rule::ALL.len());
    }

    #[test]
    fn row_sums() {
        for n in 2..=12 {
            for sigma in Pattern::classical_length3() {
                let total: Count = (1..=n)
                    .map(|r| {
                        count_single_length3(n, &Permutation::new(vec![r as u32]).unwrap(), &sigma)
                            .unwrap()
                            .count
                    })
                    .sum();
                assert_eq!(total, catalan(n), "n={n} {sigma}");
            }
            let total: Count = (1..=n)
                .map(|r| {
                    count_pair_3412_3421(n, &Permutation::new(vec![r as u32]).unwrap())
                        .unwrap()
                        .count
                })
                .sum();
            assert_eq!(total, schroder(n - 1), "n={n}");
        }
    }

    #[test]
    fn leading_term_is_ballot_up_to_15() {
        for n in 2..=15 {
            for r in 1..=n {
                let prefix = Permutation::new(vec![r as u32]).unwrap();
                let b = ballot(n, r).unwrap();
                assert_eq!(
                    count_single_length3(n, &prefix, &pat("123")).unwrap().count,
                    b
                );
                assert_eq!(
                    count_single_length3(n, &prefix, &pat("132")).unwrap().count,
                    b
                );
            }
        }
    }

    #[test]
    fn prefix_reduction_for_123() {
        for n in 3..=12 {
            for prefix in crate::query::all_prefixes(n, 4) {
                if prefix.is_empty() {
                    continue;
                }
                let o = count_single_length3(n, &prefix, &pat("123")).unwrap();
                if o.rule != Rule::Single123Ballot {
                    continue;
                }
                let reduced = Permutation::new(vec![prefix.min_entry().unwrap()]).unwrap();
                let r = count_single_length3(n - prefix.len() + 1, &reduced, &pat("123")).unwrap();
                assert_eq!(o.count, r.count, "n={n} prefix={prefix}");
            }
        }
    }
}
