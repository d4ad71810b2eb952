//! Declarative rows of unipotent characters for the classical types, loaded
//! from an embedded data file, and the group parameters they are bound to.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_power};
use crate::cyclo::OrderData;
use crate::dsl::{Bindings, DegreeExpr, IntExpr};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::symbol::Symbol;

const TABLE_DATA: &str = include_str!("../data/tables.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieType {
    A,
    A2,
    B,
    C,
    D,
    D2,
}

impl LieType {
    pub const ALL: [LieType; 6] = [LieType::A, LieType::A2, LieType::B, LieType::C, LieType::D, LieType::D2];

    pub fn name(self) -> &'static str {
        match self {
            LieType::A => "A",
            LieType::A2 => "2A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
            LieType::D2 => "2D",
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(self, LieType::A | LieType::A2)
    }

    /// Required residue of the symbol defect: B/C odd, D 0 mod 4, 2D 2 mod 4.
    pub fn defect_ok(self, defect: u64) -> bool {
        match self {
            LieType::B | LieType::C => defect % 2 == 1,
            LieType::D => defect.is_multiple_of(4),
            LieType::D2 => defect % 4 == 2,
            LieType::A | LieType::A2 => false,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "A" => LieType::A,
            "2A" => LieType::A2,
            "B" => LieType::B,
            "C" => LieType::C,
            "D" => LieType::D,
            "2D" => LieType::D2,
            other => return Err(Error::UnsupportedType(other.to_string())),
        })
    }
}

impl Serialize for LieType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A group of type `ty` and rank `n` over `F_q`, with the `p`-arithmetic that
/// drives block and degree questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupContext {
    #[serde(rename = "type")]
    pub ty: LieType,
    pub n: u64,
    pub q: u64,
    pub p: u64,
    /// Characteristic of `F_q`.
    pub ell: u64,
    /// +1 or −1 for types A and 2A, +1 otherwise.
    pub eps: i8,
    /// Order of `εq` mod `p` (types A, 2A) or of `q²` mod `p` (other types).
    pub e: u64,
    pub r: u64,
    pub m: u64,
    /// +1 if `p | q^e − 1`, −1 if `p | q^e + 1`; always +1 for types A, 2A.
    pub side: i8,
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let (mut acc, mut b) = (1u64, base % p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc
}

impl GroupContext {
    pub fn new(ty: LieType, n: u64, q: u64, p: u64) -> Result<Self> {
        let (ell, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::Precondition(format!("p = {p} must be at least 5")));
        }
        if n == 0 {
            return Err(Error::Precondition("rank must be positive".into()));
        }
        let ord = OrderData::new(q, p)?;
        let eps = if ty == LieType::A2 { -1 } else { 1 };
        let (e, side) = if ty.is_linear() { (ord.e_a(eps), 1) } else { (ord.e_bcd, ord.side) };
        Ok(GroupContext { ty, n, q, p, ell, eps, e, r: n % e, m: n / e, side })
    }

    pub fn bindings(&self) -> Bindings {
        let b = Bindings::new()
            .with("n", self.n as i64)
            .with("m", self.m as i64)
            .with("e", self.e as i64)
            .with("r", self.r as i64)
            .with("p", self.p as i64)
            .with("q", self.q as i64)
            .with("side", self.side as i64);
        if self.ty.is_linear() {
            b.with_eps(self.eps)
        } else {
            b
        }
    }

    /// Factors `(k, c)` with `|G|_{q'} = ∏ (q^k + c)` for the simple group.
    fn order_factors(&self) -> Vec<(u64, i64)> {
        let n = self.n;
        let sq = |i: u64| (2 * i, -1);
        match self.ty {
            LieType::A | LieType::A2 => {
                let eps = self.eps as i64;
                (2..=n).map(|i| (i, -(eps.pow(i as u32)))).collect()
            }
            LieType::B | LieType::C => (1..=n).map(sq).collect(),
            LieType::D => std::iter::once((n, -1)).chain((1..n).map(sq)).collect(),
            LieType::D2 => std::iter::once((n, 1)).chain((1..n).map(sq)).collect(),
        }
    }

    /// Whether `p` divides the order of the group at all.
    pub fn p_divides_order(&self) -> bool {
        self.order_factors().iter().any(|&(k, c)| {
            let v = pow_mod(self.q, k, self.p) as i64 + c;
            v.rem_euclid(self.p as i64) == 0
        })
    }

    /// `q` is an odd power of 2.
    pub fn q_odd_power_of_two(&self) -> bool {
        matches!(prime_power(self.q), Some((2, a)) if a % 2 == 1)
    }

    /// The rank bounds under which the rows describe the group, excluding
    /// `PSL_2` and `PSL_3^ε` with `p | q+ε`, and groups of `p'`-order.
    pub fn in_scope(&self) -> bool {
        let rank_ok = match self.ty {
            LieType::A | LieType::A2 => {
                self.n >= 4 || (self.n == 3 && (self.q as i64 + self.eps as i64) % self.p as i64 != 0)
            }
            LieType::B | LieType::C => self.n >= 2,
            LieType::D | LieType::D2 => self.n >= 4,
        };
        rank_ok && self.p_divides_order()
    }

    pub fn cell_name(&self) -> String {
        format!("{} n={} q={} p={}", self.ty, self.n, self.q, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AtomOp {
    Eq,
    Ne,
    Lt,
    Ge,
    Divides,
    NotDivides,
    Even,
    Odd,
}

/// One comparison in a row condition, such as `p!|m-1` or `m even`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    text: String,
    lhs: IntExpr,
    op: AtomOp,
    rhs: Option<IntExpr>,
}

impl Atom {
    pub fn parse(text: &str) -> Result<Atom> {
        let t = text.trim();
        let bad = |msg: &str| Error::TableData(format!("atom `{t}`: {msg}"));
        for (suffix, op) in [(" even", AtomOp::Even), (" odd", AtomOp::Odd)] {
            if let Some(lhs) = t.strip_suffix(suffix) {
                return Ok(Atom { text: t.into(), lhs: IntExpr::parse(lhs)?, op, rhs: None });
            }
        }
        let ops = [
            ("!|", AtomOp::NotDivides),
            ("!=", AtomOp::Ne),
            (">=", AtomOp::Ge),
            ("|", AtomOp::Divides),
            ("=", AtomOp::Eq),
            ("<", AtomOp::Lt),
        ];
        for (tok, op) in ops {
            if let Some(i) = t.find(tok) {
                let lhs = IntExpr::parse(&t[..i])?;
                let rhs = IntExpr::parse(&t[i + tok.len()..])?;
                return Ok(Atom { text: t.into(), lhs, op, rhs: Some(rhs) });
            }
        }
        Err(bad("no operator"))
    }

    pub fn holds(&self, b: &Bindings) -> Result<bool> {
        let a = self.lhs.eval(b)?;
        let rhs = || self.rhs.as_ref().expect("binary atom").eval(b);
        Ok(match self.op {
            AtomOp::Eq => a == rhs()?,
            AtomOp::Ne => a != rhs()?,
            AtomOp::Lt => a < rhs()?,
            AtomOp::Ge => a >= rhs()?,
            AtomOp::Divides => a != 0 && rhs()? % a == 0,
            AtomOp::NotDivides => !(a != 0 && rhs()? % a == 0),
            AtomOp::Even => a % 2 == 0,
            AtomOp::Odd => a % 2 != 0,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Disjunction of conjunctions of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition(pub Vec<Vec<Atom>>);

impl Condition {
    pub fn holds(&self, b: &Bindings) -> Result<bool> {
        for clause in &self.0 {
            let mut all = true;
            for atom in clause {
                if !atom.holds(b)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<String> = self
            .0
            .iter()
            .map(|c| c.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        f.write_str(&clauses.join(" or "))
    }
}

/// Entry of a label template: a value, `v^(k)` (k copies of v) or `lo..hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Value(IntExpr),
    Repeat(IntExpr, IntExpr),
    Range(IntExpr, IntExpr),
}

impl Term {
    fn parse(text: &str) -> Result<Term> {
        if let Some((lo, hi)) = text.split_once("..") {
            return Ok(Term::Range(IntExpr::parse(lo)?, IntExpr::parse(hi)?));
        }
        if let Some((v, k)) = text.split_once('^') {
            return Ok(Term::Repeat(IntExpr::parse(v)?, IntExpr::parse(k)?));
        }
        Ok(Term::Value(IntExpr::parse(text)?))
    }

    fn expand(&self, b: &Bindings, out: &mut Vec<i64>) -> Result<()> {
        match self {
            Term::Value(v) => out.push(v.eval(b)?),
            Term::Repeat(v, k) => {
                let (v, k) = (v.eval(b)?, k.eval(b)?);
                if k < 0 {
                    return Err(Error::InvalidPartition(format!("negative repeat count {k}")));
                }
                out.extend(std::iter::repeat_n(v, k as usize));
            }
            Term::Range(lo, hi) => out.extend(lo.eval(b)?..=hi.eval(b)?),
        }
        Ok(())
    }
}

fn expand_terms(terms: &[Term], b: &Bindings) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for t in terms {
        t.expand(b, &mut out)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelTemplate {
    Partition(Vec<Term>),
    Symbol { top: Vec<Term>, bottom: Vec<Term> },
}

/// A bound label: a partition for types A and 2A, a symbol otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Partition(Partition),
    Symbol(Symbol),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Partition(p) => write!(f, "({p})"),
            Label::Symbol(s) => write!(f, "({s})"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl LabelTemplate {
    /// Binds the template. Non-positive parts, negative symbol entries and
    /// repeated symbol entries are errors.
    pub fn bind(&self, b: &Bindings) -> Result<Label> {
        match self {
            LabelTemplate::Partition(terms) => {
                let parts = expand_terms(terms, b)?;
                if let Some(bad) = parts.iter().find(|&&v| v <= 0) {
                    return Err(Error::InvalidPartition(format!("part {bad} in {parts:?}")));
                }
                Ok(Label::Partition(Partition::from_unsorted(
                    parts.into_iter().map(|v| v as usize).collect(),
                )))
            }
            LabelTemplate::Symbol { top, bottom } => {
                let row = |terms: &[Term]| -> Result<Vec<u64>> {
                    let vals = expand_terms(terms, b)?;
                    if let Some(bad) = vals.iter().find(|&&v| v < 0) {
                        return Err(Error::InvalidSymbol(format!("entry {bad} in {vals:?}")));
                    }
                    Ok(vals.into_iter().map(|v| v as u64).collect())
                };
                Ok(Label::Symbol(Symbol::from_sets(row(top)?, row(bottom)?)?))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    #[serde(rename = "chi1")]
    Chi1,
    #[serde(rename = "chi2")]
    Chi2,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Chi1 => "chi1",
            Slot::Chi2 => "chi2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub id: String,
    /// `None` for the main tables; otherwise the special case the row serves.
    pub family: Option<String>,
    pub types: Vec<LieType>,
    pub slot: Slot,
    pub when: Condition,
    pub label: Option<LabelTemplate>,
    pub degree: DegreeExpr,
    pub degree_text: String,
}

impl TableRow {
    pub fn applies_to(&self, ty: LieType) -> bool {
        self.types.contains(&ty)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    id: String,
    family: Option<String>,
    types: Vec<String>,
    slot: u8,
    #[serde(default = "always")]
    when: Vec<Vec<String>>,
    partition: Option<Vec<String>>,
    top: Option<Vec<String>>,
    bottom: Option<Vec<String>>,
    degree: String,
}

fn always() -> Vec<Vec<String>> {
    vec![Vec::new()]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTables {
    version: u32,
    row: Vec<RawRow>,
}

/// All rows, in file order.
#[derive(Clone, Debug)]
pub struct Tables {
    pub version: u32,
    pub rows: Vec<TableRow>,
}

fn compile_row(raw: RawRow) -> Result<TableRow> {
    let ctx = |e: Error| Error::TableData(format!("row {}: {e}", raw.id));
    let terms = |v: &[String]| v.iter().map(|t| Term::parse(t)).collect::<Result<Vec<_>>>();
    let types = raw
        .types
        .iter()
        .map(|t| t.parse())
        .collect::<Result<Vec<LieType>>>()
        .map_err(ctx)?;
    let slot = match raw.slot {
        1 => Slot::Chi1,
        2 => Slot::Chi2,
        s => return Err(ctx(Error::TableData(format!("slot {s}")))),
    };
    let when = Condition(
        raw.when
            .iter()
            .map(|c| c.iter().map(|a| Atom::parse(a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(ctx)?,
    );
    let label = match (&raw.partition, &raw.top, &raw.bottom) {
        (Some(parts), None, None) => Some(LabelTemplate::Partition(terms(parts).map_err(ctx)?)),
        (None, Some(top), Some(bottom)) => Some(LabelTemplate::Symbol {
            top: terms(top).map_err(ctx)?,
            bottom: terms(bottom).map_err(ctx)?,
        }),
        (None, None, None) => None,
        _ => return Err(ctx(Error::TableData("ambiguous label".into()))),
    };
    let degree = DegreeExpr::parse(&raw.degree).map_err(ctx)?;
    Ok(TableRow { id: raw.id, family: raw.family, types, slot, when, label, degree, degree_text: raw.degree })
}

impl Tables {
    pub fn from_toml(text: &str) -> Result<Tables> {
        let raw: RawTables = toml::from_str(text).map_err(|e| Error::TableData(e.to_string()))?;
        let rows = raw.row.into_iter().map(compile_row).collect::<Result<Vec<_>>>()?;
        Ok(Tables { version: raw.version, rows })
    }

    /// The embedded table data.
    pub fn embedded() -> &'static Tables {
        static TABLES: OnceLock<Tables> = OnceLock::new();
        TABLES.get_or_init(|| Tables::from_toml(TABLE_DATA).expect("embedded table data is valid"))
    }

    pub fn row(&self, id: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn family<'a>(&'a self, family: &'a str) -> impl Iterator<Item = &'a TableRow> + 'a {
        self.rows.iter().filter(move |r| r.family.as_deref() == Some(family))
    }

    /// Candidate rows for a slot before conditions are applied: the D_4 rows
    /// for `D_4`, the `Sp_4(2^odd)` replacements for the first slot of B/C at
    /// rank 2, and otherwise the main table of the type.
    pub fn candidates(&self, ctx: &GroupContext, slot: Slot) -> Vec<&TableRow> {
        let family = match ctx.ty {
            LieType::D if ctx.n == 4 => Some("D4special"),
            LieType::B | LieType::C if ctx.n == 2 && ctx.q_odd_power_of_two() && slot == Slot::Chi1 => {
                Some("Sp4evenQ")
            }
            _ => None,
        };
        self.rows
            .iter()
            .filter(|r| r.slot == slot && r.applies_to(ctx.ty) && r.family.as_deref() == family)
            .collect()
    }
}

pub fn row_applicable(row: &TableRow, ctx: &GroupContext) -> Result<bool> {
    Ok(row.applies_to(ctx.ty) && row.when.holds(&ctx.bindings())?)
}

/// Label of the trivial character with the closed forms of its e-core and
/// e-cocore (for types A and 2A both are the e-core of `(n)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialLabel {
    pub label: Label,
    pub core: Label,
    pub cocore: Label,
}

fn sym(top: Vec<u64>, bottom: Vec<u64>) -> Label {
    Label::Symbol(Symbol::new(top, bottom).expect("closed-form symbol is valid"))
}

pub fn trivial_label(ctx: &GroupContext) -> TrivialLabel {
    let (n, e, r) = (ctx.n, ctx.e, ctx.r);
    let divides = r == 0;
    let m_even = ctx.m.is_multiple_of(2);
    match ctx.ty {
        LieType::A | LieType::A2 => {
            let core = Label::Partition(Partition::row(r as usize));
            TrivialLabel { label: Label::Partition(Partition::row(n as usize)), core: core.clone(), cocore: core }
        }
        LieType::B | LieType::C => TrivialLabel {
            label: sym(vec![n], vec![]),
            core: sym(vec![r], vec![]),
            cocore: sym(vec![r], vec![]),
        },
        LieType::D => TrivialLabel {
            label: sym(vec![n], vec![0]),
            core: if divides { sym(vec![], vec![]) } else { sym(vec![r], vec![0]) },
            cocore: match (m_even, divides) {
                (true, false) => sym(vec![r], vec![0]),
                (false, false) => sym(vec![0, r], vec![]),
                (true, true) => sym(vec![], vec![]),
                (false, true) => sym(vec![e], vec![0]),
            },
        },
        LieType::D2 => TrivialLabel {
            label: sym(vec![0, n], vec![]),
            core: if divides { sym(vec![0, e], vec![]) } else { sym(vec![0, r], vec![]) },
            cocore: match (m_even, divides) {
                (true, false) => sym(vec![0, r], vec![]),
                (false, false) => sym(vec![r], vec![0]),
                (true, true) => sym(vec![e], vec![0]),
                (false, true) => sym(vec![], vec![]),
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(ty: LieType, n: u64, q: u64, p: u64) -> GroupContext {
        GroupContext::new(ty, n, q, p).unwrap()
    }

    #[test]
    fn embedded_data_loads() {
        let t = Tables::embedded();
        assert_eq!(t.version, 1);
        assert_eq!(t.rows.iter().filter(|r| r.family.is_none()).count(), 8 + 8 + 10 + 12);
        for row in &t.rows {
            if row.family.is_none() {
                assert!(row.label.is_some(), "{}", row.id);
            }
        }
    }

    #[test]
    fn context_parameters() {
        let c = ctx(LieType::A, 4, 2, 5);
        assert_eq!((c.e, c.r, c.m), (4, 0, 1));
        let c = ctx(LieType::A2, 4, 2, 5);
        assert_eq!(c.e, 4);
        let c = ctx(LieType::D, 5, 2, 5);
        assert_eq!((c.e, c.r, c.m, c.side), (2, 1, 2, -1));
        assert!(GroupContext::new(LieType::B, 3, 5, 5).is_err());
        assert!(GroupContext::new(LieType::B, 3, 6, 7).is_err());
        assert_eq!("E8".parse::<LieType>(), Err(Error::UnsupportedType("E8".into())));
    }

    #[test]
    fn applicability_examples() {
        let t = Tables::embedded();
        let c = ctx(LieType::A, 4, 2, 5);
        assert!(row_applicable(t.row("A.1.3").unwrap(), &c).unwrap());
        assert!(!row_applicable(t.row("A.1.1").unwrap(), &c).unwrap());
        // q = 4, p = 5: q^2 = 16 = 1 mod 5, so e = 1 and 1 | 4
        let c = ctx(LieType::B, 4, 4, 5);
        assert!(row_applicable(t.row("BC.2.1").unwrap(), &c).unwrap());
    }

    #[test]
    fn labels_bind() {
        let t = Tables::embedded();
        let c = ctx(LieType::A, 4, 2, 5);
        let label = t.row("A.1.3").unwrap().label.as_ref().unwrap().bind(&c.bindings()).unwrap();
        assert_eq!(label, Label::Partition("3,1".parse().unwrap()));
        let c = ctx(LieType::D, 5, 2, 5);
        let label = t.row("D.1.1").unwrap().label.as_ref().unwrap().bind(&c.bindings()).unwrap();
        assert_eq!(label, Label::Symbol("4|1".parse().unwrap()));
        let steinberg = t.row("BC.2.1").unwrap().label.as_ref().unwrap().bind(&ctx(LieType::B, 3, 2, 7).bindings());
        assert_eq!(steinberg.unwrap(), Label::Symbol("0,1,2,3|1,2,3".parse().unwrap()));
    }

    #[test]
    fn atoms() {
        let b = Bindings::new().with("m", 1).with("p", 5).with("e", 3).with("r", 2);
        assert!(Atom::parse("p|m-1").unwrap().holds(&b).unwrap());
        assert!(!Atom::parse("p!|m-1").unwrap().holds(&b).unwrap());
        assert!(Atom::parse("e=r+1").unwrap().holds(&b).unwrap());
        assert!(Atom::parse("m odd").unwrap().holds(&b).unwrap());
        assert!(Atom::parse("r>=2").unwrap().holds(&b).unwrap());
        assert!(Atom::parse("m ≈ 2").is_err());
    }

    #[test]
    fn trivial_closed_forms() {
        let c = ctx(LieType::D, 5, 2, 5);
        assert_eq!(trivial_label(&c).cocore, Label::Symbol("1|0".parse().unwrap()));
        let c = ctx(LieType::D2, 5, 2, 5);
        assert_eq!(trivial_label(&c).core, Label::Symbol("0,1|".parse().unwrap()));
        let c = ctx(LieType::B, 5, 2, 5);
        assert_eq!(trivial_label(&c).core, Label::Symbol("1|".parse().unwrap()));
    }
}
