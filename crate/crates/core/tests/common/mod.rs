//! Oracles shared by the property and acceptance suites. They edit diagrams
//! and symbols directly and never call the core-removal routines under test.

use blockdeg::symbol::Symbol;
use blockdeg::Partition;
use rand::rngs::StdRng;
use rand::Rng;

fn hook(parts: &[usize], conj: &[usize], i: usize, j: usize) -> usize {
    parts[i] - j + conj[j] - i - 1
}

/// Removes one rim hook of length exactly `q`, chosen at random, by editing
/// the diagram row by row. Returns `None` if there is none.
pub fn remove_random_rim_hook(lam: &Partition, q: usize, rng: &mut StdRng) -> Option<Partition> {
    let parts = lam.parts();
    let conj = lam.conjugate();
    let conj = conj.parts();
    let cells: Vec<(usize, usize)> = (0..parts.len())
        .flat_map(|i| (0..parts[i]).map(move |j| (i, j)))
        .filter(|&(i, j)| hook(parts, conj, i, j) == q)
        .collect();
    if cells.is_empty() {
        return None;
    }
    let (i, j) = cells[rng.random_range(0..cells.len())];
    let leg = conj[j] - i - 1;
    let mut next = parts.to_vec();
    for r in i..i + leg {
        next[r] = parts[r + 1] - 1;
    }
    next[i + leg] = j;
    Some(Partition::from_unsorted(next.into_iter().filter(|&x| x > 0).collect()))
}

pub fn check_move_laws(s: &Symbol, e: u64) -> usize {
    let s = s.normalize();
    let mut count = 0;
    for mv in s.hooks(e) {
        let t = s.apply(mv);
        assert_eq!(t.rank(), s.rank() - e as i64, "{s} hook {mv:?}");
        assert_eq!(t.defect(), s.defect(), "{s} hook {mv:?}");
        count += 1;
    }
    for mv in s.cohooks(e) {
        let t = s.apply(mv);
        assert_eq!(t.rank(), s.rank() - e as i64, "{s} cohook {mv:?}");
        let shift = if mv.from_row == 0 { -2 } else { 2 };
        assert_eq!(t.defect() as i64, (s.signed_defect() + shift).abs(), "{s} cohook {mv:?}");
        count += 1;
    }
    count
}

pub fn random_fixpoint(s: &Symbol, e: u64, co: bool, rng: &mut StdRng) -> Symbol {
    let mut cur = s.normalize();
    loop {
        let moves = if co { cur.cohooks(e) } else { cur.hooks(e) };
        if moves.is_empty() {
            return cur;
        }
        cur = cur.apply(moves[rng.random_range(0..moves.len())]);
    }
}
