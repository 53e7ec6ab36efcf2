//! Exact binomials and lexicographic k-subsets of `[n] = {1, ..., n}`.
//!
//! Subsets are always kept sorted. The canonical order is lexicographic on
//! the sorted element lists, so `{1,2} < {1,3} < {2,3}`; placement and
//! delivery routines iterate in this order.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `n! / (k! (n-k)!)`, zero when `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> Result<u128> {
    if k < 0 || k as u64 > n {
        return Ok(0);
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::BinomialOverflow { n, k: k as i64 })?
            / (i as u128 + 1);
    }
    Ok(acc)
}

/// `binom` for the usize indices used throughout the crate.
pub(crate) fn choose(n: usize, k: usize) -> Result<u128> {
    binom(n as u64, k as i64)
}

/// `binom` as an exact rational.
pub(crate) fn choose_q(n: usize, k: usize) -> Result<Rational> {
    choose(n, k).map(Rational::from_u128)
}

/// A k-subset of `[ground_size]`, stored as a strictly increasing list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSubset {
    ground_size: usize,
    elements: Vec<usize>,
}

impl KSubset {
    pub fn new(ground_size: usize, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset(format!("repeated element in {elements:?}")));
        }
        if let Some(&bad) = elements.iter().find(|&&e| e == 0 || e > ground_size) {
            return Err(Error::InvalidSubset(format!(
                "element {bad} outside [1..{ground_size}]"
            )));
        }
        Ok(KSubset { ground_size, elements })
    }

    pub fn empty(ground_size: usize) -> Self {
        KSubset { ground_size, elements: Vec::new() }
    }

    /// `{1, ..., k}` inside `[ground_size]`.
    pub fn prefix(ground_size: usize, k: usize) -> Self {
        KSubset { ground_size, elements: (1..=k.min(ground_size)).collect() }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn min(&self) -> Option<usize> {
        self.elements.first().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().copied()
    }

    /// The set with `x` removed (unchanged if absent).
    pub fn without(&self, x: usize) -> Self {
        KSubset {
            ground_size: self.ground_size,
            elements: self.elements.iter().copied().filter(|&e| e != x).collect(),
        }
    }

    /// The set with `x` added.
    pub fn with(&self, x: usize) -> Self {
        let mut elements = self.elements.clone();
        if let Err(pos) = elements.binary_search(&x) {
            elements.insert(pos, x);
        }
        KSubset { ground_size: self.ground_size, elements }
    }

    pub fn is_superset_of(&self, items: &[usize]) -> bool {
        items.iter().all(|&x| self.contains(x))
    }

    pub fn is_disjoint_from(&self, items: &[usize]) -> bool {
        items.iter().all(|&x| !self.contains(x))
    }
}

impl fmt::Display for KSubset {
    /// Compact labels: `123` when every element is a digit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elements.is_empty() {
            return write!(f, "{{}}");
        }
        if self.elements.iter().all(|&e| e < 10) {
            for e in &self.elements {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Lexicographic iterator over the k-subsets of `[n]`.
pub struct KSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (1..=k).collect());
        KSubsets { n, current }
    }
}

impl Iterator for KSubsets {
    type Item = KSubset;

    fn next(&mut self) -> Option<KSubset> {
        let cur = self.current.take()?;
        let out = KSubset { ground_size: self.n, elements: cur.clone() };
        let k = cur.len();
        let mut next = cur;
        // rightmost position that can still be incremented
        let pos = (0..k).rev().find(|&i| next[i] < self.n - (k - 1 - i));
        if let Some(i) = pos {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All k-subsets of `[n]` in lexicographic order; empty when `k > n`.
pub fn enumerate_ksubsets(n: usize, k: usize) -> Vec<KSubset> {
    KSubsets::new(n, k).collect()
}

/// Position of `s` in `enumerate_ksubsets(s.ground_size(), s.len())`.
pub fn rank_ksubset(s: &KSubset) -> Result<u128> {
    let n = s.ground_size;
    let k = s.len();
    let mut rank = 0u128;
    let mut prev = 0usize;
    for (i, &a) in s.elements.iter().enumerate() {
        // subsets sharing the first i elements but with a smaller (i+1)-th one
        for v in prev + 1..a {
            rank += choose(n - v, k - i - 1)?;
        }
        prev = a;
    }
    Ok(rank)
}

/// Inverse of [`rank_ksubset`].
pub fn unrank_ksubset(n: usize, k: usize, rank: u128) -> Result<KSubset> {
    let count = choose(n, k)?;
    if rank >= count {
        return Err(Error::RankOutOfRange { n, k, rank, count });
    }
    let mut elements = Vec::with_capacity(k);
    let mut remaining = rank;
    let mut v = 1usize;
    for i in 0..k {
        loop {
            let block = choose(n - v, k - i - 1)?;
            if remaining < block {
                break;
            }
            remaining -= block;
            v += 1;
        }
        elements.push(v);
        v += 1;
    }
    Ok(KSubset { ground_size: n, elements })
}
