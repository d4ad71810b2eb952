//! Partitions, Young diagrams, hooks and q-cores.
//!
//! Cores are computed on the first-column hook lengths (the beta-set, read as
//! beads on a q-runner abacus): sliding every bead as far up its runner as it
//! goes is the fixpoint of repeated q-hook removal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts into weakly decreasing order and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First part, or 0 for the empty partition.
    pub fn first(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let mut out = Vec::with_capacity(self.first());
        for j in 1..=self.first() {
            out.push(self.0.iter().take_while(|&&x| x >= j).count());
        }
        Partition(out)
    }

    pub fn is_self_conjugate(&self) -> bool {
        *self == self.conjugate()
    }

    /// Hook length of every cell, row by row.
    pub fn hook_lengths(&self) -> HookMultiset {
        let conj = self.conjugate();
        let mut lengths = Vec::with_capacity(self.size());
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                lengths.push(row - j + conj.0[j] - i - 1);
            }
        }
        lengths.sort_unstable();
        HookMultiset { lengths }
    }

    /// `|H^q(λ)|`: the number of cells whose hook length is divisible by `q`.
    pub fn count_hooks_divisible(&self, q: usize) -> usize {
        assert!(q >= 1);
        let conj = self.conjugate();
        let mut count = 0;
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                if (row - j + conj.0[j] - i - 1).is_multiple_of(q) {
                    count += 1;
                }
            }
        }
        count
    }

    /// First-column hook lengths `λ_i + ℓ − i`, strictly decreasing.
    pub fn beta_set(&self) -> Vec<usize> {
        let len = self.0.len();
        self.0.iter().enumerate().map(|(i, &x)| x + len - 1 - i).collect()
    }

    /// Inverse of [`Partition::beta_set`] for any finite set of bead positions.
    pub fn from_beta_set(mut beads: Vec<usize>) -> Partition {
        beads.sort_unstable_by(|a, b| b.cmp(a));
        let len = beads.len();
        let parts = beads.iter().enumerate().map(|(i, &b)| b + i + 1 - len).collect();
        Partition::from_unsorted(parts)
    }

    /// The q-core `C_q(λ)`. The 1-core of every partition is empty.
    pub fn core(&self, q: usize) -> Partition {
        assert!(q >= 1);
        let mut on_runner = vec![0usize; q];
        for b in self.beta_set() {
            on_runner[b % q] += 1;
        }
        let beads = on_runner
            .iter()
            .enumerate()
            .flat_map(|(r, &count)| (0..count).map(move |k| r + k * q))
            .collect();
        Partition::from_beta_set(beads)
    }

    pub fn is_core(&self, q: usize) -> bool {
        self.count_hooks_divisible(q) == 0
    }

    /// `γ⋆(x, y) = (γ_1 + x, γ_2, …, γ_ℓ, 1^y)`. For `γ = ∅` this is `(x, 1^y)`,
    /// or `(1^y)` when `x = 0`.
    pub fn star(&self, x: usize, y: usize) -> Partition {
        let mut parts = self.0.clone();
        match parts.first_mut() {
            Some(first) => *first += x,
            None if x > 0 => parts.push(x),
            None => {}
        }
        parts.extend(std::iter::repeat_n(1, y));
        Partition(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Hook lengths of a diagram as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookMultiset {
    lengths: Vec<usize>,
}

impl HookMultiset {
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.lengths.last().copied()
    }
}

/// Base-p digits `a_0, …, a_k` of `n`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicDigits {
    pub base: u64,
    pub digits: Vec<u64>,
}

impl PAdicDigits {
    pub fn new(mut n: u64, p: u64) -> Self {
        assert!(p >= 2);
        let mut digits = Vec::new();
        while n > 0 {
            digits.push(n % p);
            n /= p;
        }
        PAdicDigits { base: p, digits }
    }

    /// Index of the leading digit; `None` for n = 0.
    pub fn top(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.base + d)
    }

    /// `⌊(a_k+1)/2⌋ · ∏_{i=1}^{k−1} (a_i+1)`; 0 when n < p.
    pub fn omega_bound(&self) -> u64 {
        match self.top() {
            None | Some(0) => 0,
            Some(k) => {
                let lead = self.digits[k].div_ceil(2);
                lead * self.digits[1..k].iter().map(|a| a + 1).product::<u64>()
            }
        }
    }
}

pub fn p_adic_digits(n: u64, p: u64) -> PAdicDigits {
    PAdicDigits::new(n, p)
}

/// All partitions of `n` in descending lexicographic order, generated lazily.
pub fn partitions(n: usize) -> Partitions {
    Partitions { current: Some(if n == 0 { Vec::new() } else { vec![n] }) }
}

pub struct Partitions {
    current: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let ones = next.iter().rev().take_while(|&&x| x == 1).count();
        next.truncate(next.len() - ones);
        if let Some(last) = next.last_mut() {
            *last -= 1;
            let cap = *last;
            let mut rest = ones + 1;
            while rest > 0 {
                let take = rest.min(cap);
                next.push(take);
                rest -= take;
            }
            self.current = Some(next);
        }
        Some(Partition(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(p("3,1").conjugate(), p("2,1,1"));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p("2,2").conjugate(), p("2,2"));
    }

    #[test]
    fn hooks() {
        let mut want = [4, 3, 1, 2, 1];
        want.sort();
        assert_eq!(p("3,2").hook_lengths().lengths(), &want[..]);
        assert_eq!(p("1").hook_lengths().lengths(), &[1]);
        assert_eq!(p("2,1").hook_lengths().lengths(), &[1, 1, 3]);
    }

    #[test]
    fn divisible_hooks() {
        assert_eq!(p("7").count_hooks_divisible(5), 1);
        assert_eq!(p("2,2").count_hooks_divisible(4), 0);
        assert_eq!(p("4,3,1").count_hooks_divisible(1), 8);
    }

    #[test]
    fn cores() {
        assert_eq!(p("6").core(5), p("1"));
        assert_eq!(p("3,1").core(4), Partition::empty());
        assert_eq!(p("7").core(5), p("2"));
        assert_eq!(p("4,3,1").core(1), Partition::empty());
        for n in 0..30 {
            for e in 1..8 {
                assert_eq!(Partition::row(n).core(e), Partition::row(n % e));
            }
        }
    }

    #[test]
    fn stars() {
        assert_eq!(p("1").star(10, 0), p("11"));
        assert_eq!(p("1").star(5, 5), p("6,1,1,1,1,1"));
        assert_eq!(p("2").star(0, 5), p("2,1,1,1,1,1"));
        assert_eq!(Partition::empty().star(0, 3), p("1,1,1"));
        assert_eq!(Partition::empty().star(2, 1), p("2,1"));
        assert_eq!(Partition::empty().star(0, 0), Partition::empty());
    }

    #[test]
    fn digits() {
        assert_eq!(p_adic_digits(7, 5).digits, vec![2, 1]);
        assert_eq!(p_adic_digits(12, 5).digits, vec![2, 2]);
        assert!(p_adic_digits(0, 7).digits.is_empty());
        assert_eq!(p_adic_digits(12, 5).omega_bound(), 1);
        assert_eq!(p_adic_digits(3 + 2 * 5 + 3 * 25, 5).omega_bound(), 2 * 3);
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=12).map(|n| partitions(n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        assert_eq!(partitions(30).count(), 5604);
        let all: Vec<_> = partitions(4).map(|x| x.to_string()).collect();
        assert_eq!(all, vec!["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
    }

    #[test]
    fn text_format() {
        assert_eq!(p("6,3,1").to_string(), "6,3,1");
        assert_eq!(p(""), Partition::empty());
        assert!("1,3".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
    }
}
