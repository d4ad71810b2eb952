//! Verification of table rows: label validity, block membership through
//! e-cores and e-cocores, and p'-degrees; plus the D_4 inequality, the small
//! exceptional degrees and the q-analogue of the hook formula for type A.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{p_valuation_of_value, prime_power, strip_prime, valuation_bigint};
use crate::cyclo::{p_divides_phi, OrderData};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::report::{ser_display, CellOutcome, Violation};
use crate::tables::{
    row_applicable, trivial_label, GroupContext, Label, LieType, Slot, TableRow, Tables,
};

fn rat(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowVerdict {
    pub row: String,
    pub slot: Slot,
    pub label: Option<Label>,
    #[serde(serialize_with = "ser_opt_display")]
    pub degree: Option<BigRational>,
    /// Absolute value with every factor of the characteristic removed.
    #[serde(serialize_with = "ser_opt_display")]
    pub q_prime_part: Option<BigRational>,
    pub failures: Vec<String>,
}

fn ser_opt_display<S: serde::Serializer>(
    v: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_display(v, s),
        None => s.serialize_none(),
    }
}

impl RowVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `v_p` of a cyclotomic product from the criterion alone: `Φ_d` contributes
/// `v_p(q^d − 1)` per copy, `Φ_{d p^i}` (i ≥ 1) exactly 1, everything else 0.
fn symbolic_valuation(f: &crate::cyclo::CycloFactorization, ord: &OrderData) -> Result<i64> {
    let mut v = p_valuation_of_value(&f.scalar, ord.p)?;
    let vd = valuation_bigint(&(BigInt::from(ord.q).pow(ord.d as u32) - 1), ord.p)? as i64;
    for (m, e) in f.p_factors(ord) {
        v += e * if m == ord.d { vd } else { 1 };
    }
    Ok(v)
}

fn check_label(label: &Label, ctx: &GroupContext, failures: &mut Vec<String>) {
    let trivial = trivial_label(ctx);
    if *label == trivial.label {
        failures.push(format!("label {label} is the trivial character"));
    }
    match label {
        Label::Partition(lam) => {
            if !ctx.ty.is_linear() {
                failures.push(format!("partition label {label} for type {}", ctx.ty));
                return;
            }
            if lam.size() as u64 != ctx.n {
                failures.push(format!("label {label} has size {} not {}", lam.size(), ctx.n));
            }
            let core = lam.core(ctx.e as usize);
            let expected = Partition::row(ctx.n as usize).core(ctx.e as usize);
            if core != expected {
                failures.push(format!("block: {}-core ({core}) differs from ({expected})", ctx.e));
            }
        }
        Label::Symbol(s) => {
            if ctx.ty.is_linear() {
                failures.push(format!("symbol label {label} for type {}", ctx.ty));
                return;
            }
            let (rank, defect) = s.rank_defect();
            if rank != ctx.n as i64 {
                failures.push(format!("label {label} has rank {rank} not {}", ctx.n));
            }
            if !ctx.ty.defect_ok(defect) {
                failures.push(format!("label {label} has defect {defect}, wrong class for {}", ctx.ty));
            }
            let Label::Symbol(t) = &trivial.label else { unreachable!() };
            let (mine, theirs, what) = if ctx.side > 0 {
                (s.e_core(ctx.e), t.e_core(ctx.e), "core")
            } else {
                (s.e_cocore(ctx.e), t.e_cocore(ctx.e), "cocore")
            };
            if mine != theirs {
                failures.push(format!("block: {}-{what} ({mine}) differs from ({theirs})", ctx.e));
            }
        }
    }
}

/// Checks one row under `ctx`: the bound label (size or rank and defect
/// class, non-triviality, principal block) and the degree (exact value,
/// `p`-valuation zero, agreement with the cyclotomic criterion).
pub fn verify_row(row: &TableRow, ctx: &GroupContext) -> RowVerdict {
    let b = ctx.bindings();
    let mut failures = Vec::new();
    let label = match row.label.as_ref().map(|t| t.bind(&b)).transpose() {
        Ok(l) => l,
        Err(e) => {
            failures.push(format!("label: {e}"));
            None
        }
    };
    if let Some(l) = &label {
        check_label(l, ctx, &mut failures);
    }
    let q = rat(ctx.q);
    let degree = match row.degree.evaluate(&b, &q) {
        Ok(v) if v.is_zero() => {
            failures.push("degree: evaluates to 0".into());
            None
        }
        Ok(v) => Some(v),
        Err(e) => {
            failures.push(format!("degree: {e}"));
            None
        }
    };
    if let Some(v) = &degree {
        let val = p_valuation_of_value(v, ctx.p).expect("non-zero");
        if val != 0 {
            failures.push(format!("degree: v_{}({v}) = {val}", ctx.p));
        }
        let ord = OrderData::new(ctx.q, ctx.p).expect("context is valid");
        match row.degree.factorize(&b) {
            Ok(f) => {
                if f.evaluate(&q) != *v {
                    failures.push(format!("cyclotomic: factorization {f} does not evaluate to {v}"));
                }
                match symbolic_valuation(&f, &ord) {
                    Ok(s) if s == val => {}
                    Ok(s) => failures.push(format!("cyclotomic: criterion gives v_p = {s}, value gives {val}")),
                    Err(e) => failures.push(format!("cyclotomic: {e}")),
                }
            }
            Err(e) => failures.push(format!("cyclotomic: {e}")),
        }
    }
    let q_prime_part = degree.as_ref().map(|v| strip_prime(v, ctx.ell));
    RowVerdict { row: row.id.clone(), slot: row.slot, label, degree, q_prime_part, failures }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub chi1: String,
    pub chi2: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageVerdict {
    pub context: GroupContext,
    pub rows: Vec<RowVerdict>,
    /// Disagreements between removal and the closed-form trivial core/cocore.
    pub trivial_core_failures: Vec<String>,
    pub covered_chi1: bool,
    pub covered_chi2: bool,
    /// Pairs with equal q'-parts.
    pub collisions: Vec<Comparison>,
    /// Pairs whose q'-parts differ by a factor of exactly 2.
    pub half_factor_ambiguous: Vec<Comparison>,
}

impl CoverageVerdict {
    pub fn passed(&self) -> bool {
        self.covered_chi1
            && self.covered_chi2
            && self.trivial_core_failures.is_empty()
            && self.collisions.is_empty()
            && self.rows.iter().all(RowVerdict::passed)
    }

    pub fn into_outcome(self) -> CellOutcome {
        let cell = self.context.cell_name();
        let mut out = CellOutcome::checked();
        for (slot, covered) in [(Slot::Chi1, self.covered_chi1), (Slot::Chi2, self.covered_chi2)] {
            if !covered {
                out.violations.push(Violation::new(&cell, "coverage", format!("no applicable {slot} row")));
            }
        }
        for f in &self.trivial_core_failures {
            out.violations.push(Violation::new(&cell, "trivial-core", f));
        }
        for r in &self.rows {
            for f in &r.failures {
                out.violations.push(Violation::new(&cell, "row", format!("{}: {f}", r.row)));
            }
        }
        for c in &self.collisions {
            out.violations.push(Violation::new(&cell, "collision", format!("{} vs {}: {}", c.chi1, c.chi2, c.detail)));
        }
        for c in &self.half_factor_ambiguous {
            out.ambiguous
                .push(Violation::new(&cell, "half-factor-ambiguous", format!("{} vs {}: {}", c.chi1, c.chi2, c.detail)));
        }
        out
    }
}

/// Removal-based e-core and e-cocore of the trivial label against the closed
/// forms.
pub fn check_trivial_cores(ctx: &GroupContext) -> Vec<String> {
    let t = trivial_label(ctx);
    let mut out = Vec::new();
    match &t.label {
        Label::Partition(lam) => {
            let core = Label::Partition(lam.core(ctx.e as usize));
            if core != t.core {
                out.push(format!("{}-core of {} is {core}, expected {}", ctx.e, t.label, t.core));
            }
        }
        Label::Symbol(s) => {
            let core = Label::Symbol(s.e_core(ctx.e));
            let cocore = Label::Symbol(s.e_cocore(ctx.e));
            if core != t.core {
                out.push(format!("{}-core of {} is {core}, expected {}", ctx.e, t.label, t.core));
            }
            if cocore != t.cocore {
                out.push(format!("{}-cocore of {} is {cocore}, expected {}", ctx.e, t.label, t.cocore));
            }
        }
    }
    out
}

/// Applicable rows for both slots, each verified, with pairwise comparison of
/// the q'-parts of the passing rows.
pub fn coverage_and_distinctness(tables: &Tables, ctx: &GroupContext) -> Result<CoverageVerdict> {
    let mut rows = Vec::new();
    let mut covered = [false, false];
    for (i, slot) in [Slot::Chi1, Slot::Chi2].into_iter().enumerate() {
        for row in tables.candidates(ctx, slot) {
            if row_applicable(row, ctx)? {
                covered[i] = true;
                rows.push(verify_row(row, ctx));
            }
        }
    }
    let mut collisions = Vec::new();
    let mut ambiguous = Vec::new();
    let passing = |slot| rows.iter().filter(move |r: &&RowVerdict| r.slot == slot && r.passed());
    for a in passing(Slot::Chi1) {
        for b in passing(Slot::Chi2) {
            let (x, y) = (a.q_prime_part.as_ref().unwrap(), b.q_prime_part.as_ref().unwrap());
            let two = rat(2);
            let cmp = |detail: String| Comparison { chi1: a.row.clone(), chi2: b.row.clone(), detail };
            if x == y {
                collisions.push(cmp(format!("both q'-parts are {x}")));
            } else if *x == y * &two || *y == x * &two {
                ambiguous.push(cmp(format!("q'-parts {x} and {y}")));
            }
        }
    }
    Ok(CoverageVerdict {
        context: *ctx,
        rows,
        trivial_core_failures: check_trivial_cores(ctx),
        covered_chi1: covered[0],
        covered_chi2: covered[1],
        collisions,
        half_factor_ambiguous: ambiguous,
    })
}

/// `|q^{n(λ)} ∏_{i=1}^{n} ((εq)^i − 1) / ∏_{cells} ((εq)^h − 1)|`, the degree of
/// the unipotent character of `GL_n^ε(q)` labelled by `λ`.
pub fn unipotent_degree_type_a(lambda: &Partition, eps: i8, q0: u64) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(eps as i64 * q0 as i64));
    let one = BigRational::one();
    let n_lambda: usize = lambda.parts().iter().enumerate().map(|(i, &l)| i * l).sum();
    let mut v = num_traits::pow(rat(q0), n_lambda);
    for i in 1..=lambda.size() {
        v *= num_traits::pow(x.clone(), i) - &one;
    }
    for &h in lambda.hook_lengths().lengths() {
        v /= num_traits::pow(x.clone(), h) - &one;
    }
    v.abs()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckRecord {
    pub context: GroupContext,
    pub row: String,
    pub label: Label,
    #[serde(serialize_with = "ser_display")]
    pub table_q_prime: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub hook_q_prime: BigRational,
}

impl CrossCheckRecord {
    pub fn matches(&self) -> bool {
        self.table_q_prime == self.hook_q_prime
    }
}

/// For every applicable type A/2A row with a valid partition label, compares
/// the q'-part of the table degree with that of the q-hook formula.
pub fn cross_check_type_a(tables: &Tables, ctx: &GroupContext) -> Result<Vec<CrossCheckRecord>> {
    if !ctx.ty.is_linear() {
        return Err(Error::Precondition("type A cross-check needs type A or 2A".into()));
    }
    let b = ctx.bindings();
    let mut out = Vec::new();
    for slot in [Slot::Chi1, Slot::Chi2] {
        for row in tables.candidates(ctx, slot) {
            if !row_applicable(row, ctx)? {
                continue;
            }
            let Some(Ok(Label::Partition(lam))) = row.label.as_ref().map(|t| t.bind(&b)) else {
                continue;
            };
            if lam.size() as u64 != ctx.n {
                continue;
            }
            let Ok(v) = row.degree.evaluate(&b, &rat(ctx.q)) else { continue };
            if v.is_zero() {
                continue;
            }
            out.push(CrossCheckRecord {
                context: *ctx,
                row: row.id.clone(),
                table_q_prime: strip_prime(&v, ctx.ell),
                hook_q_prime: strip_prime(&unipotent_degree_type_a(&lam, ctx.eps, ctx.q), ctx.ell),
                label: Label::Partition(lam),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D4Verdict {
    pub q: u64,
    pub p: u64,
    pub e: u64,
    #[serde(serialize_with = "ser_display")]
    pub chi1: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub chi2: BigInt,
    pub chi1_p_prime: bool,
    pub chi2_p_prime: bool,
    pub inequality: bool,
}

impl D4Verdict {
    pub fn holds(&self) -> bool {
        self.chi1_p_prime && self.chi2_p_prime && self.inequality
    }
}

/// `χ_1 = q^12` (Steinberg) against `χ_2 = q(q²+1)²` for `e ∈ {1,3}` and
/// `½q³(q+1)³(q³+1)` for `e = 2`. `None` when `p ∤ |D_4(q)|`.
pub fn verify_d4(q: u64, p: u64) -> Result<Option<D4Verdict>> {
    let ctx = GroupContext::new(LieType::D, 4, q, p)?;
    if !ctx.p_divides_order() {
        return Ok(None);
    }
    let qi = BigInt::from(q);
    let chi1 = qi.pow(12);
    let chi2 = match ctx.e {
        1 | 3 => &qi * (qi.pow(2) + 1u32).pow(2),
        2 => qi.pow(3) * (&qi + 1u32).pow(3) * (qi.pow(3) + 1u32) / 2u32,
        e => return Err(Error::Precondition(format!("e = {e} for D_4 with p | |G|"))),
    };
    let p_prime = |v: &BigInt| valuation_bigint(v, p).map(|v| v == 0);
    Ok(Some(D4Verdict {
        q,
        p,
        e: ctx.e,
        chi1_p_prime: p_prime(&chi1)?,
        chi2_p_prime: p_prime(&chi2)?,
        inequality: chi1 > BigInt::from(2u32) * &chi2,
        chi1,
        chi2,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExceptionFamily {
    #[serde(rename = "PSL2")]
    Psl2,
    #[serde(rename = "PSL3eps")]
    Psl3Eps,
    SmallA3,
}

impl ExceptionFamily {
    pub const ALL: [ExceptionFamily; 3] = [ExceptionFamily::Psl2, ExceptionFamily::Psl3Eps, ExceptionFamily::SmallA3];

    pub fn name(self) -> &'static str {
        match self {
            ExceptionFamily::Psl2 => "PSL2",
            ExceptionFamily::Psl3Eps => "PSL3eps",
            ExceptionFamily::SmallA3 => "SmallA3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionVerdict {
    pub family: ExceptionFamily,
    pub q: u64,
    pub p: u64,
    /// η for PSL_2, ε otherwise.
    pub sign: i8,
    #[serde(serialize_with = "ser_display")]
    pub degree: BigInt,
    pub failures: Vec<String>,
}

impl ExceptionVerdict {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The degrees of the small exceptional cases for one `(q, p)`, each checked
/// against the tabulated row: PSL_2 with `p | q+η` (degree `q−η`), PSL_3^ε
/// with `p | q+ε` (degree `q³−ε`), and `GL_3^ε` with `p ∤ q+ε` (the unipotent
/// character `(2,1)` of degree `q(q+ε)`). Each degree must be `p'` and larger
/// than 1; the semisimple degrees must also be coprime to `q`, so that they do
/// not divide the Steinberg degree.
pub fn verify_exceptions(tables: &Tables, family: ExceptionFamily, q: u64, p: u64) -> Result<Vec<ExceptionVerdict>> {
    let (ell, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    OrderData::new(q, p)?;
    let (q_i, p_i) = (q as i64, p as i64);
    let mut out = Vec::new();
    for sign in [1i8, -1] {
        let s = sign as i64;
        let (applies, expected, ty, n) = match family {
            ExceptionFamily::Psl2 => ((q_i + s) % p_i == 0, BigInt::from(q_i - s), LieType::A, 2),
            ExceptionFamily::Psl3Eps => {
                ((q_i + s) % p_i == 0, BigInt::from(q_i).pow(3) - s, if sign > 0 { LieType::A } else { LieType::A2 }, 3)
            }
            ExceptionFamily::SmallA3 => {
                let lam: Partition = "2,1".parse().expect("valid");
                let hook = unipotent_degree_type_a(&lam, sign, q);
                assert!(hook.is_integer());
                ((q_i + s) % p_i != 0, hook.to_integer(), if sign > 0 { LieType::A } else { LieType::A2 }, 3)
            }
        };
        if !applies {
            continue;
        }
        let mut failures = Vec::new();
        let mut b = crate::dsl::Bindings::new().with("n", n).with("p", p_i).with("q", q_i);
        if family != ExceptionFamily::Psl2 {
            b = b.with_eps(sign);
        }
        let rows: Vec<&TableRow> = tables
            .family(family.name())
            .filter(|r| r.applies_to(ty) && r.when.holds(&b).unwrap_or(false))
            .collect();
        match rows.as_slice() {
            [row] => match row.degree.evaluate(&b, &rat(q)) {
                Ok(v) if v == BigRational::from_integer(expected.clone()) => {}
                Ok(v) => failures.push(format!("{}: tabulated degree {v}, expected {expected}", row.id)),
                Err(e) => failures.push(format!("{}: {e}", row.id)),
            },
            rows => failures.push(format!("{} tabulated rows apply", rows.len())),
        }
        if expected <= BigInt::one() {
            failures.push(format!("degree {expected} is not larger than 1"));
        }
        if valuation_bigint(&expected, p)? != 0 {
            failures.push(format!("{p} divides {expected}"));
        }
        if family != ExceptionFamily::SmallA3 && valuation_bigint(&expected, ell)? != 0 {
            failures.push(format!("{ell} divides {expected}, so it may divide a power of q"));
        }
        out.push(ExceptionVerdict { family, q, p, sign, degree: expected, failures });
    }
    Ok(out)
}

/// The criterion `p | Φ_m(q) ⇔ m = d·p^i` for one `(m, q, p)`, together with
/// `v_p(Φ_m(q)) ≥ 2 ⇒ m = d`. Returns a description of any disagreement.
pub fn check_cyclotomic_criterion(m: u64, q: u64, p: u64) -> Result<Option<String>> {
    let ord = OrderData::new(q, p)?;
    let value = crate::cyclo::eval_phi(m, &rat(q));
    let v = p_valuation_of_value(&value, p)?;
    let predicted = p_divides_phi(m, &ord);
    if (v > 0) != predicted {
        return Ok(Some(format!("v_{p}(Phi_{m}({q})) = {v} but the criterion predicts {predicted} (d = {})", ord.d)));
    }
    if v >= 2 && m != ord.d {
        return Ok(Some(format!("v_{p}(Phi_{m}({q})) = {v} with m != d = {}", ord.d)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(ty: LieType, n: u64, q: u64, p: u64) -> GroupContext {
        GroupContext::new(ty, n, q, p).unwrap()
    }

    #[test]
    fn q_hook_degrees() {
        let d = |s: &str, eps, q| unipotent_degree_type_a(&s.parse().unwrap(), eps, q);
        assert_eq!(d("1,1", 1, 5), rat(5));
        assert_eq!(d("2,1", 1, 3), rat(12));
        assert_eq!(d("2,1", -1, 3), rat(6));
        assert_eq!(d("4", 1, 7), rat(1));
        assert_eq!(d("1,1,1,1", -1, 2), rat(64));
    }

    #[test]
    fn row_pipeline_type_a() {
        let t = Tables::embedded();
        let c = ctx(LieType::A, 4, 2, 5);
        let v = verify_row(t.row("A.1.3").unwrap(), &c);
        assert!(v.passed(), "{:?}", v.failures);
        assert_eq!(v.degree, Some(rat(7)));
        let cov = coverage_and_distinctness(t, &c).unwrap();
        assert!(cov.passed(), "{cov:?}");
        let parts: Vec<_> = cov.rows.iter().map(|r| r.q_prime_part.clone().unwrap()).collect();
        assert_eq!(parts, vec![rat(7), rat(1)]);
    }

    #[test]
    fn steinberg_row() {
        let t = Tables::embedded();
        let c = ctx(LieType::B, 4, 4, 5);
        let v = verify_row(t.row("BC.2.1").unwrap(), &c);
        assert!(v.passed(), "{:?}", v.failures);
        assert_eq!(v.degree, Some(rat(1)));
    }

    #[test]
    fn zero_denominator_is_a_failed_verdict() {
        // e = 1, side = -1: p = 5 divides q + 1 = 5
        let t = Tables::embedded();
        let c = ctx(LieType::D, 7, 4, 5);
        assert_eq!((c.e, c.side), (1, -1));
        let v = verify_row(t.row("D.2.7").unwrap(), &c);
        assert!(v.failures.iter().any(|f| f.contains("zero factor")), "{:?}", v.failures);
    }

    #[test]
    fn d4_examples() {
        let v = verify_d4(2, 5).unwrap().unwrap();
        assert_eq!((v.e, v.chi1.clone(), v.chi2.clone()), (2, BigInt::from(4096), BigInt::from(972)));
        assert!(v.holds());
        let v = verify_d4(3, 5).unwrap().unwrap();
        assert_eq!(v.chi2, BigInt::from(24192));
        assert!(v.holds());
        let v = verify_d4(2, 7).unwrap().unwrap();
        assert_eq!((v.e, v.chi2.clone()), (3, BigInt::from(50)));
        assert!(v.holds());
    }

    #[test]
    fn exception_examples() {
        let t = Tables::embedded();
        let v = verify_exceptions(t, ExceptionFamily::Psl2, 9, 5).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].sign, v[0].degree.clone()), (1, BigInt::from(8)));
        assert!(v[0].holds(), "{:?}", v[0].failures);
        let v = verify_exceptions(t, ExceptionFamily::Psl2, 11, 5).unwrap();
        assert_eq!((v[0].sign, v[0].degree.clone()), (-1, BigInt::from(12)));
        let v = verify_exceptions(t, ExceptionFamily::Psl3Eps, 4, 5).unwrap();
        assert_eq!((v[0].sign, v[0].degree.clone()), (1, BigInt::from(63)));
        assert!(v[0].holds(), "{:?}", v[0].failures);
        let v = verify_exceptions(t, ExceptionFamily::SmallA3, 2, 7).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(ExceptionVerdict::holds), "{v:?}");
    }

    #[test]
    fn cyclotomic_criterion_examples() {
        assert_eq!(check_cyclotomic_criterion(4, 2, 5).unwrap(), None);
        assert_eq!(check_cyclotomic_criterion(20, 2, 5).unwrap(), None);
        assert_eq!(check_cyclotomic_criterion(6, 2, 5).unwrap(), None);
    }
}
