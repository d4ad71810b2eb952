//! p-blocks of symmetric and alternating groups, their p'-characters, and the
//! star-shaped families used to bound extendable p'-degrees from below.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::require_prime;
use crate::degrees::{degree, is_p_prime_macdonald, CharacterDegree};
use crate::error::{Error, Result};
use crate::partition::{partitions, PAdicDigits, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    /// Symmetric group; blocks labelled by a p-core.
    Sn,
    /// Alternating group; conjugate p-cores label the same block.
    An,
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sn" | "sym" => Ok(Group::Sn),
            "an" | "alt" => Ok(Group::An),
            other => Err(Error::Precondition(format!("unknown group `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockLabel {
    pub p: u64,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub core: Partition,
    pub group: Group,
}

impl BlockLabel {
    /// Label for a core; for `An` the core is replaced by the smaller of itself
    /// and its conjugate.
    pub fn new(core: Partition, p: u64, group: Group) -> Self {
        let core = match group {
            Group::Sn => core,
            Group::An => {
                let conj = core.conjugate();
                core.min(conj)
            }
        };
        BlockLabel { p, core, group }
    }
}

/// Block containing `χ^λ` (or `ψ^λ` for `An`; callers keep `λ ≠ λ′` there).
pub fn block_of(lambda: &Partition, p: u64, group: Group) -> BlockLabel {
    BlockLabel::new(lambda.core(p as usize), p, group)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub n: usize,
    pub p: u64,
    pub label: BlockLabel,
    #[serde(serialize_with = "crate::report::ser_display_seq")]
    pub pprime_partitions: Vec<Partition>,
    #[serde(serialize_with = "crate::report::ser_display_seq")]
    pub extendable_partitions: Vec<Partition>,
    pub degrees: Vec<CharacterDegree>,
    pub ext_degrees: Vec<CharacterDegree>,
}

fn check_block_core(n: usize, p: u64, gamma: &Partition) -> Result<()> {
    require_prime(p)?;
    if !gamma.is_core(p as usize) {
        return Err(Error::NotACore { core: gamma.to_string(), p });
    }
    let m = gamma.size();
    if m > n || !(n - m).is_multiple_of(p as usize) {
        return Err(Error::WrongResidue { core: gamma.to_string(), n, p });
    }
    Ok(())
}

struct CensusFold {
    pprime: Vec<Partition>,
    extendable: Vec<Partition>,
    degrees: BTreeSet<CharacterDegree>,
    ext_degrees: BTreeSet<CharacterDegree>,
}

impl CensusFold {
    fn new() -> Self {
        CensusFold {
            pprime: Vec::new(),
            extendable: Vec::new(),
            degrees: BTreeSet::new(),
            ext_degrees: BTreeSet::new(),
        }
    }

    fn push(&mut self, lambda: Partition) {
        let deg = degree(&lambda);
        if !lambda.is_self_conjugate() {
            self.ext_degrees.insert(deg.clone());
            self.extendable.push(lambda.clone());
        }
        self.degrees.insert(deg);
        self.pprime.push(lambda);
    }

    fn finish(self, n: usize, p: u64, label: BlockLabel) -> CensusRecord {
        CensusRecord {
            n,
            p,
            label,
            pprime_partitions: self.pprime,
            extendable_partitions: self.extendable,
            degrees: self.degrees.into_iter().collect(),
            ext_degrees: self.ext_degrees.into_iter().collect(),
        }
    }
}

/// Scans every partition of `n` and keeps the p'-degree ones in the block
/// labelled by `gamma`.
pub fn census(n: usize, p: u64, gamma: &Partition, group: Group) -> Result<CensusRecord> {
    check_block_core(n, p, gamma)?;
    let label = BlockLabel::new(gamma.clone(), p, group);
    let mut fold = CensusFold::new();
    for lambda in partitions(n) {
        if block_of(&lambda, p, group) == label && is_p_prime_macdonald(&lambda, p) {
            fold.push(lambda);
        }
    }
    Ok(fold.finish(n, p, label))
}

/// Census of every block of `S_n` or `A_n` that contains a p'-character, in one
/// pass over the partitions of `n`.
pub fn census_by_block(n: usize, p: u64, group: Group) -> Result<BTreeMap<BlockLabel, CensusRecord>> {
    require_prime(p)?;
    let mut folds: BTreeMap<BlockLabel, CensusFold> = BTreeMap::new();
    for lambda in partitions(n) {
        if is_p_prime_macdonald(&lambda, p) {
            folds.entry(block_of(&lambda, p, group)).or_insert_with(CensusFold::new).push(lambda);
        }
    }
    Ok(folds
        .into_iter()
        .map(|(label, fold)| (label.clone(), fold.finish(n, p, label)))
        .collect())
}

/// Core of the principal block: the full p-core of `(n)`.
pub fn principal_core(n: usize, p: u64) -> Partition {
    Partition::row(n).core(p as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaReport {
    pub n: usize,
    pub p: u64,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub gamma: Partition,
    #[serde(serialize_with = "crate::report::ser_display_seq")]
    pub h: Vec<Partition>,
    #[serde(serialize_with = "crate::report::ser_display_seq")]
    pub omega: Vec<Partition>,
    pub omega_degrees: Vec<CharacterDegree>,
    pub bound: u64,
}

/// `H(n;γ)` and `Ω(n;γ)`: the p'-degree star shapes `γ⋆(a, n−|γ|−a)` with
/// p-core `γ`, and those among them with `λ_1 > λ′_1`.
pub fn omega_sets(n: usize, p: u64, gamma: &Partition) -> Result<OmegaReport> {
    check_block_core(n, p, gamma)?;
    let m = gamma.size();
    let mut h: Vec<Partition> = Vec::new();
    for a in 0..=n - m {
        let lambda = gamma.star(a, n - m - a);
        if h.contains(&lambda) {
            continue;
        }
        if lambda.core(p as usize) == *gamma && is_p_prime_macdonald(&lambda, p) {
            h.push(lambda);
        }
    }
    let omega: Vec<Partition> = h
        .iter()
        .filter(|l| l.first() > l.conjugate().first())
        .cloned()
        .collect();
    let omega_degrees = omega.iter().map(degree).collect();
    Ok(OmegaReport {
        n,
        p,
        gamma: gamma.clone(),
        h,
        omega,
        omega_degrees,
        bound: PAdicDigits::new(n as u64, p).omega_bound(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub holds: bool,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub lambda: Partition,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub mu: Partition,
    pub lambda_degree: CharacterDegree,
    pub mu_degree: CharacterDegree,
}

/// Range of `a` for which the star-shape degree inequality is claimed:
/// `⌊(w+1)/2⌋ + 1 ≤ a ≤ w`.
pub fn admissible_a(w: usize) -> std::ops::RangeInclusive<usize> {
    w.div_ceil(2) + 1..=w
}

/// Compares `χ^λ(1) < χ^μ(1)` for `λ = γ⋆(ap, (w−a)p)` and
/// `μ = γ⋆((a−1)p, (w−a+1)p)`.
pub fn verify_lemma_alt1(p: u64, gamma: &Partition, w: usize, a: usize) -> Result<DegreeComparison> {
    require_prime(p)?;
    if gamma.size() as u64 >= p {
        return Err(Error::Precondition(format!("|{gamma}| must be below p = {p}")));
    }
    if !admissible_a(w).contains(&a) {
        return Err(Error::Precondition(format!("a = {a} is outside the admissible range for w = {w}")));
    }
    let p = p as usize;
    let lambda = gamma.star(a * p, (w - a) * p);
    let mu = gamma.star((a - 1) * p, (w - a + 1) * p);
    let lambda_degree = degree(&lambda);
    let mu_degree = degree(&mu);
    Ok(DegreeComparison { holds: lambda_degree < mu_degree, lambda, mu, lambda_degree, mu_degree })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaBoundVerdict {
    pub holds: bool,
    pub omega_size: usize,
    pub distinct_degrees: usize,
    pub bound: u64,
}

/// `|cd(Ω(n;γ))| = |Ω(n;γ)| ≥ ⌊(a_k+1)/2⌋ ∏_{i=1}^{k−1}(a_i+1)` for `γ ⊢ a_0`.
pub fn verify_omega_bound(n: usize, p: u64, gamma: &Partition) -> Result<OmegaBoundVerdict> {
    require_prime(p)?;
    let a0 = (n as u64 % p) as usize;
    if gamma.size() != a0 {
        return Err(Error::Precondition(format!("|{gamma}| must equal the last {p}-adic digit {a0} of {n}")));
    }
    let report = omega_sets(n, p, gamma)?;
    let distinct: BTreeSet<_> = report.omega_degrees.iter().collect();
    let omega_size = report.omega.len();
    Ok(OmegaBoundVerdict {
        holds: distinct.len() == omega_size && omega_size as u64 >= report.bound,
        omega_size,
        distinct_degrees: distinct.len(),
        bound: report.bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtBoundVerdict {
    pub holds: bool,
    pub ext_degrees: usize,
    pub bound: u64,
    pub omega_extendable: bool,
}

/// Lower bound on `|cd^{ext}_{p'}(B(n;γ))|` for `γ ⊢ a_0`, checked against the
/// full census of the alternating block; also checks `Ω ⊆` extendable.
pub fn verify_ext_bound(n: usize, p: u64, gamma: &Partition) -> Result<ExtBoundVerdict> {
    let omega = omega_sets(n, p, gamma)?;
    let record = census(n, p, gamma, Group::An)?;
    let omega_extendable = omega.omega.iter().all(|l| record.extendable_partitions.contains(l));
    let ext = record.ext_degrees.len();
    Ok(ExtBoundVerdict {
        holds: omega_extendable && ext as u64 >= omega.bound,
        ext_degrees: ext,
        bound: omega.bound,
        omega_extendable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub lambda: Partition,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub mu: Partition,
    pub lambda_degree: CharacterDegree,
    pub mu_degree: CharacterDegree,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropAltVerdict {
    pub holds: bool,
    pub census: CensusRecord,
    pub witnesses: Option<Witnesses>,
}

/// At least three extendable p'-degrees in the principal block of `A_n`. When
/// `a_0 ≥ 2` and at most two higher digits are non-zero, also checks the hook
/// witnesses `(a_0, 1^{n−a_0})` and `(a_0, 2, 1^{n−a_0−2})`.
pub fn verify_prop_alt(n: usize, p: u64) -> Result<PropAltVerdict> {
    require_prime(p)?;
    if n < 7 || p < 5 {
        return Err(Error::Precondition(format!("need n >= 7 and p >= 5, got n = {n}, p = {p}")));
    }
    let record = census(n, p, &principal_core(n, p), Group::An)?;
    let digits = PAdicDigits::new(n as u64, p);
    let a0 = digits.digits[0] as usize;
    let higher = digits.digits[1..].iter().filter(|&&d| d != 0).count();
    // n < p: the witness (a0, 1^0) would be the trivial partition
    let witnesses = (a0 >= 2 && (1..=2).contains(&higher)).then(|| {
        let lambda = Partition::row(a0).star(0, n - a0);
        let mu = Partition::new(vec![a0, 2]).expect("a0 >= 2").star(0, n - a0 - 2);
        let lambda_degree = degree(&lambda);
        let mu_degree = degree(&mu);
        let ext = |l: &Partition, d: &CharacterDegree| {
            is_p_prime_macdonald(l, p) && !l.is_self_conjugate() && record.ext_degrees.contains(d)
        };
        let ok = ext(&lambda, &lambda_degree)
            && ext(&mu, &mu_degree)
            && *lambda_degree.value() > 1u32.into()
            && lambda_degree < mu_degree;
        Witnesses { lambda, mu, lambda_degree, mu_degree, ok }
    });
    let holds = record.ext_degrees.len() >= 3 && witnesses.as_ref().is_none_or(|w| w.ok);
    Ok(PropAltVerdict { holds, census: record, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn degs(v: &[CharacterDegree]) -> Vec<u64> {
        v.iter().map(|d| d.to_string().parse().unwrap()).collect()
    }

    #[test]
    fn block_labels() {
        assert_eq!(block_of(&p("7"), 5, Group::Sn).core, p("2"));
        assert_eq!(block_of(&p("4"), 7, Group::Sn).core, p("4"));
        assert_eq!(block_of(&p("2,1,1,1,1,1"), 5, Group::An).core, p("1,1"));
    }

    #[test]
    fn census_seven_five() {
        let rec = census(7, 5, &p("2"), Group::An).unwrap();
        let ext = degs(&rec.ext_degrees);
        for d in [1, 6, 14] {
            assert!(ext.contains(&d), "{ext:?}");
        }
        assert!(ext.len() >= 3);
    }

    #[test]
    fn census_rejects_bad_cores() {
        assert!(matches!(census(7, 5, &p("3,1,1"), Group::Sn), Err(Error::NotACore { .. })));
        assert!(matches!(census(7, 5, &p("1"), Group::Sn), Err(Error::WrongResidue { .. })));
        assert!(matches!(census(7, 4, &p("3"), Group::Sn), Err(Error::NotPrime(4))));
    }

    #[test]
    fn large_core_block_has_no_pprime_characters() {
        // hook lengths {7,4,4,2,2,1,1,1}
        let gamma = p("4,2,1,1");
        assert!(gamma.is_core(5));
        let rec = census(13, 5, &gamma, Group::Sn).unwrap();
        assert!(rec.pprime_partitions.is_empty());
    }

    #[test]
    fn omega_examples() {
        let r = omega_sets(7, 5, &p("2")).unwrap();
        assert_eq!(r.h, vec![p("2,1,1,1,1,1"), p("7")]);
        assert_eq!(r.omega, vec![p("7")]);
        assert_eq!(r.bound, 1);

        let r = omega_sets(12, 5, &p("2")).unwrap();
        let mut omega = r.omega.clone();
        omega.sort();
        assert_eq!(omega, vec![p("7,1,1,1,1,1"), p("12")]);
        let mut d = degs(&r.omega_degrees);
        d.sort();
        assert_eq!(d, vec![1, 462]);
        assert_eq!(r.bound, 1);

        let r = omega_sets(3, 5, &p("2,1")).unwrap();
        assert_eq!(r.h, vec![p("2,1")]);
    }

    #[test]
    fn lemma_alt1_examples() {
        let c = verify_lemma_alt1(5, &p("1"), 2, 2).unwrap();
        assert!(c.holds);
        assert_eq!(c.lambda, p("11"));
        assert_eq!(c.mu, p("6,1,1,1,1,1"));
        assert_eq!(c.mu_degree.to_string(), "252");
        assert!(verify_lemma_alt1(5, &p("2"), 2, 2).unwrap().holds);
        assert!(verify_lemma_alt1(7, &Partition::empty(), 3, 3).unwrap().holds);
        assert!(verify_lemma_alt1(5, &p("2"), 2, 1).is_err());
        assert!(verify_lemma_alt1(5, &p("3,2"), 2, 2).is_err());
    }

    #[test]
    fn omega_bound_examples() {
        let v = verify_omega_bound(7, 5, &p("2")).unwrap();
        assert!(v.holds);
        assert_eq!((v.omega_size, v.bound), (1, 1));
        assert!(verify_omega_bound(12, 5, &p("1,1")).unwrap().holds);
        let v = verify_omega_bound(12, 5, &p("2")).unwrap();
        assert_eq!((v.omega_size, v.distinct_degrees, v.bound), (2, 2, 1));
        assert!(verify_omega_bound(12, 5, &p("1")).is_err());
    }

    #[test]
    fn prop_alt_examples() {
        let v = verify_prop_alt(7, 5).unwrap();
        assert!(v.holds);
        let w = v.witnesses.unwrap();
        assert_eq!((w.lambda_degree.to_string(), w.mu_degree.to_string()), ("6".into(), "14".into()));
        assert!(verify_prop_alt(25, 5).unwrap().holds);
        let v = verify_prop_alt(11, 11).unwrap();
        assert!(v.holds && v.witnesses.is_none());
        assert!(verify_prop_alt(6, 5).is_err());
    }
}
