//! Symbols labelling unipotent characters of classical groups, with e-hooks,
//! e-cohooks and the cores obtained by removing them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An unordered pair of strictly increasing rows of non-negative integers.
///
/// Values built with [`Symbol::new`] are reduced (the rows do not both start
/// with 0) and canonically ordered: the longer row first, and for rows of equal
/// length the lexicographically larger one first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    top: Vec<u64>,
    bottom: Vec<u64>,
}

/// One step of hook or cohook removal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    /// 0 for the first row, 1 for the second.
    pub from_row: usize,
    pub to_row: usize,
    pub y: u64,
    pub x: u64,
}

fn strictly_increasing(row: &[u64]) -> bool {
    row.windows(2).all(|w| w[0] < w[1])
}

impl Symbol {
    /// Validates the rows and returns the reduced, canonically ordered symbol.
    pub fn new(top: Vec<u64>, bottom: Vec<u64>) -> Result<Self> {
        Ok(Self::raw(top, bottom)?.normalize())
    }

    /// Validates the rows and keeps them exactly as given.
    pub fn raw(top: Vec<u64>, bottom: Vec<u64>) -> Result<Self> {
        for row in [&top, &bottom] {
            if !strictly_increasing(row) {
                return Err(Error::InvalidSymbol(format!("row {row:?} is not strictly increasing")));
            }
        }
        Ok(Symbol { top, bottom })
    }

    /// Rows as unsorted sets; duplicates within a row are rejected.
    pub fn from_sets(mut top: Vec<u64>, mut bottom: Vec<u64>) -> Result<Self> {
        top.sort_unstable();
        bottom.sort_unstable();
        Self::new(top, bottom)
    }

    pub fn top(&self) -> &[u64] {
        &self.top
    }

    pub fn bottom(&self) -> &[u64] {
        &self.bottom
    }

    /// Shifts both rows down while both start with 0, then orders the rows.
    pub fn normalize(&self) -> Symbol {
        let (mut top, mut bottom) = (self.top.clone(), self.bottom.clone());
        while top.first() == Some(&0) && bottom.first() == Some(&0) {
            top = top[1..].iter().map(|v| v - 1).collect();
            bottom = bottom[1..].iter().map(|v| v - 1).collect();
        }
        let swap = match top.len().cmp(&bottom.len()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => top < bottom,
        };
        if swap {
            std::mem::swap(&mut top, &mut bottom);
        }
        Symbol { top, bottom }
    }

    /// `Σ entries − ⌊(a+b−1)²/4⌋`.
    pub fn rank(&self) -> i64 {
        let sum: u64 = self.top.iter().chain(&self.bottom).sum();
        let s = (self.top.len() + self.bottom.len()) as i64 - 1;
        sum as i64 - s * s / 4
    }

    pub fn defect(&self) -> u64 {
        self.top.len().abs_diff(self.bottom.len()) as u64
    }

    pub fn rank_defect(&self) -> (i64, u64) {
        (self.rank(), self.defect())
    }

    /// Signed length difference `a − b` of the stored rows.
    pub fn signed_defect(&self) -> i64 {
        self.top.len() as i64 - self.bottom.len() as i64
    }

    fn row(&self, i: usize) -> &[u64] {
        if i == 0 {
            &self.top
        } else {
            &self.bottom
        }
    }

    /// Available e-hooks: `y → y−e` within a row, in row order then by `y`.
    pub fn hooks(&self, e: u64) -> Vec<Move> {
        self.moves(e, false)
    }

    /// Available e-cohooks: `y` leaves its row and `y−e` joins the other one.
    pub fn cohooks(&self, e: u64) -> Vec<Move> {
        self.moves(e, true)
    }

    fn moves(&self, e: u64, co: bool) -> Vec<Move> {
        assert!(e >= 1);
        let mut out = Vec::new();
        for from_row in 0..2 {
            let to_row = if co { 1 - from_row } else { from_row };
            for &y in self.row(from_row) {
                if y >= e && self.row(to_row).binary_search(&(y - e)).is_err() {
                    out.push(Move { from_row, to_row, y, x: y - e });
                }
            }
        }
        out
    }

    /// Applies a move and normalizes the result.
    pub fn apply(&self, mv: Move) -> Symbol {
        let mut rows = [self.top.clone(), self.bottom.clone()];
        let pos = rows[mv.from_row].binary_search(&mv.y).expect("move source present");
        rows[mv.from_row].remove(pos);
        let slot = rows[mv.to_row].binary_search(&mv.x).expect_err("move target free");
        rows[mv.to_row].insert(slot, mv.x);
        let [top, bottom] = rows;
        Symbol { top, bottom }.normalize()
    }

    pub fn e_core(&self, e: u64) -> Symbol {
        let mut s = self.normalize();
        while let Some(&mv) = s.hooks(e).first() {
            s = s.apply(mv);
        }
        s
    }

    pub fn e_cocore(&self, e: u64) -> Symbol {
        let mut s = self.normalize();
        while let Some(&mv) = s.cohooks(e).first() {
            s = s.apply(mv);
        }
        s
    }
}

fn write_row(f: &mut fmt::Formatter<'_>, row: &[u64]) -> fmt::Result {
    if row.is_empty() {
        return f.write_str("∅");
    }
    for (i, v) in row.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_row(f, &self.top)?;
        f.write_str("|")?;
        write_row(f, &self.bottom)
    }
}

fn parse_row(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() || s == "∅" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::InvalidSymbol(format!("bad entry `{t}`"))))
        .collect()
}

impl FromStr for Symbol {
    type Err = Error;

    /// Parses `"0,1,3|2"` and normalizes.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| Error::InvalidSymbol(format!("missing `|` in `{s}`")))?;
        Symbol::new(parse_row(a)?, parse_row(b)?)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Symbol {
        s.parse().unwrap()
    }

    #[test]
    fn normalization() {
        let s = Symbol::raw(vec![0, 1, 3], vec![0, 2]).unwrap();
        assert_eq!(s.normalize(), Symbol::raw(vec![0, 2], vec![1]).unwrap());
        assert_eq!(sym("5|"), Symbol::raw(vec![5], vec![]).unwrap());
        assert_eq!(sym("∅|3"), sym("3|∅"));
        assert_eq!(sym("1|4"), sym("4|1"));
        assert!(Symbol::new(vec![2, 2], vec![]).is_err());
        assert!("3,1|".parse::<Symbol>().is_err());
    }

    #[test]
    fn rank_and_defect() {
        assert_eq!(sym("5|").rank_defect(), (5, 1));
        assert_eq!(sym("0,1,2,3|1,2,3,4").rank_defect(), (4, 0));
        assert_eq!(sym("0,7|").rank_defect(), (7, 2));
        assert_eq!(sym("|").rank_defect(), (0, 0));
    }

    #[test]
    fn cores() {
        assert_eq!(sym("5|").e_core(2), sym("1|"));
        assert_eq!(sym("5|").e_cocore(2), sym("1|"));
        for n in 0..12 {
            for e in 1..6 {
                let trivial = Symbol::new(vec![n], vec![]).unwrap();
                assert_eq!(trivial.e_core(e), Symbol::new(vec![n % e], vec![]).unwrap());
            }
        }
        assert_eq!(sym("5|0").e_cocore(2), sym("1|0"));
    }

    #[test]
    fn display_round_trip() {
        let s = sym("0,1,3|2");
        assert_eq!(s.to_string(), "0,1,3|2");
        assert_eq!(sym("4|").to_string(), "4|∅");
        assert_eq!(sym(&s.to_string()), s);
    }
}
