//! Exact combinatorial sequences.
//!
//! Catalan, Bell and large Schröder numbers are kept in growable memo tables
//! behind a mutex; callers always get an owned value.

use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Count;

static CATALAN: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());
static BELL: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());
static SCHRODER: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());

fn memoized(table: &Mutex<Vec<BigUint>>, n: usize, next: impl Fn(&[BigUint]) -> BigUint) -> Count {
    let mut t = table.lock().unwrap_or_else(|e| e.into_inner());
    while t.len() <= n {
        let v = next(&t);
        t.push(v);
    }
    t[n].clone()
}

/// `binom(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: usize, k: i64) -> Count {
    if k < 0 || k as u64 > n as u64 {
        return Count::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = Count::one();
    // acc = binom(n - k + i, i) after step i; each division is exact.
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

pub fn catalan(n: usize) -> Count {
    memoized(&CATALAN, n, |prev| match prev.len() {
        0 => Count::one(),
        m => {
            // C_m = C_{m-1} * 2(2m - 1) / (m + 1)
            let c = &prev[m - 1] * (2 * (2 * m - 1));
            c / (m + 1)
        }
    })
}

/// Bell numbers from `B_n = sum_k binom(n-1, k) B_k`.
pub fn bell(n: usize) -> Count {
    memoized(&BELL, n, |prev| match prev.len() {
        0 => Count::one(),
        m => prev
            .iter()
            .enumerate()
            .map(|(k, b)| binomial(m - 1, k as i64) * b)
            .sum(),
    })
}

/// Large Schröder numbers from `S_{m+1} = S_m + sum_{r=0}^{m} S_r S_{m-r}`.
pub fn schroder(n: usize) -> Count {
    memoized(&SCHRODER, n, |prev| match prev.len() {
        0 => Count::one(),
        len => {
            let m = len - 1;
            let conv: Count = (0..=m).map(|r| &prev[r] * &prev[m - r]).sum();
            &prev[m] + conv
        }
    })
}

/// Ballot number `b_{n,r} = (n - r + 1) / (n + r - 1) * binom(n + r - 1, n)`.
pub fn ballot(n: usize, r: usize) -> Result<Count> {
    if r == 0 || r > n {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            expected: format!("1 <= r <= n = {n}"),
        });
    }
    let numerator = binomial(n + r - 1, n as i64) * (n - r + 1);
    let denominator = Count::from(n + r - 1);
    let (q, rem) = (&numerator / &denominator, &numerator % &denominator);
    assert!(
        rem.is_zero(),
        "ballot numerator not divisible for n={n}, r={r}"
    );
    Ok(q)
}

/// Number of 123-avoiders in `S_n` whose first ascent is at position `i`
/// (`a_n(n) = 1` for the decreasing permutation).
pub fn simion_schmidt_a(n: usize, i: usize) -> Result<Count> {
    if i == 0 || i > n {
        return Err(Error::OutOfRange {
            name: "i",
            value: i,
            expected: format!("1 <= i <= n = {n}"),
        });
    }
    let m = 2 * n - i - 1;
    Ok(binomial(m, n as i64 - 1) - binomial(m, n as i64))
}

/// The named sequences the CLI can print.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sequence {
    Catalan,
    Bell,
    Schroder,
}

impl Sequence {
    pub fn term(self, n: usize) -> Count {
        match self {
            Sequence::Catalan => catalan(n),
            Sequence::Bell => bell(n),
            Sequence::Schroder => schroder(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sequence::Catalan => "catalan",
            Sequence::Bell => "bell",
            Sequence::Schroder => "schroder",
        }
    }
}

impl std::str::FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "catalan" => Ok(Sequence::Catalan),
            "bell" => Ok(Sequence::Bell),
            "schroder" | "schröder" => Ok(Sequence::Schroder),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected catalan, bell or schroder".to_string(),
            }),
        }
    }
}
