//! A small expression language for generic degrees.
//!
//! ```text
//! expr    := factor { ("*" | "/") factor }
//! factor  := integer
//!          | "q" [ "^" ( "(" intexpr ")" | integer ) ]
//!          | "(" qterm ("-" | "+") ( "1" | "eps" [ "^" ( "(" intexpr ")" | integer ) ] ) ")" [ "^" integer ]
//!          | "prod(" ident "=" intexpr ".." intexpr ";" expr ")"
//!          | "(" expr ")" [ "^" integer ]
//! intexpr := integer arithmetic with + - * and parentheses over bound names
//! ```
//!
//! `eps` is the sign ε of twisted type A; `(q^(k)-eps^(k))` expands at bind
//! time to `q^k − 1` or `q^k + 1`. Range products with `lo > hi` are empty.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::rational_pow;
use crate::cyclo::CycloFactorization;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntExpr {
    Lit(i64),
    Var(String),
    Neg(Box<IntExpr>),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
}

impl IntExpr {
    pub fn eval(&self, b: &Bindings) -> Result<i64> {
        Ok(match self {
            IntExpr::Lit(v) => *v,
            IntExpr::Var(name) => b.get(name)?,
            IntExpr::Neg(x) => -x.eval(b)?,
            IntExpr::Add(x, y) => x.eval(b)? + y.eval(b)?,
            IntExpr::Sub(x, y) => x.eval(b)? - y.eval(b)?,
            IntExpr::Mul(x, y) => x.eval(b)? * y.eval(b)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            IntExpr::Add(..) | IntExpr::Sub(..) => 1,
            IntExpr::Mul(..) => 2,
            _ => 3,
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    pub fn parse(text: &str) -> Result<IntExpr> {
        let mut p = Parser::new(text);
        let e = p.int_expr()?;
        p.finish()?;
        Ok(e)
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntExpr::Lit(v) if *v < 0 => write!(f, "({v})"),
            IntExpr::Lit(v) => write!(f, "{v}"),
            IntExpr::Var(name) => f.write_str(name),
            IntExpr::Neg(x) => {
                f.write_str("-")?;
                x.write_operand(f, 3)
            }
            IntExpr::Add(x, y) => {
                x.write_operand(f, 1)?;
                f.write_str("+")?;
                y.write_operand(f, 2)
            }
            IntExpr::Sub(x, y) => {
                x.write_operand(f, 1)?;
                f.write_str("-")?;
                y.write_operand(f, 2)
            }
            IntExpr::Mul(x, y) => {
                x.write_operand(f, 2)?;
                f.write_str("*")?;
                y.write_operand(f, 3)
            }
        }
    }
}

/// Right-hand side of a `(q^k ± …)` atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomTail {
    One,
    Eps(IntExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Rational(BigRational),
    QPow(IntExpr),
    /// `(q^exp ± tail)^pow`; `sign` is +1 or −1.
    Atom { exp: IntExpr, sign: i8, tail: AtomTail, pow: u32 },
    Prod { var: String, lo: IntExpr, hi: IntExpr, body: Box<DegreeExpr> },
    Group { inner: Box<DegreeExpr>, pow: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulOp {
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeExpr {
    pub head: Factor,
    pub tail: Vec<(MulOp, Factor)>,
}

/// Integer variables and the optional sign ε.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    ints: BTreeMap<String, i64>,
    eps: Option<i8>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.set(name, value);
        self
    }

    pub fn with_eps(mut self, eps: i8) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn set(&mut self, name: &str, value: i64) {
        self.ints.insert(name.to_string(), value);
    }

    /// Integer value of a name; `eps` resolves to the bound sign.
    pub fn get(&self, name: &str) -> Result<i64> {
        match self.ints.get(name) {
            Some(v) => Ok(*v),
            None if name == "eps" => self.eps().map(i64::from),
            None => Err(Error::Unbound(name.to_string())),
        }
    }

    pub fn eps(&self) -> Result<i8> {
        self.eps.ok_or_else(|| Error::Unbound("eps".into()))
    }
}

fn sign_pow(eps: i8, k: i64) -> i8 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        eps
    }
}

impl Factor {
    /// Signed constant added to `q^k` once `eps` is bound.
    fn atom_constant(sign: i8, tail: &AtomTail, b: &Bindings) -> Result<i8> {
        Ok(match tail {
            AtomTail::One => sign,
            AtomTail::Eps(k) => sign * sign_pow(b.eps()?, k.eval(b)?),
        })
    }

    fn evaluate(&self, b: &Bindings, q0: &BigRational) -> Result<BigRational> {
        Ok(match self {
            Factor::Rational(r) => r.clone(),
            Factor::QPow(k) => rational_pow(q0, k.eval(b)?),
            Factor::Atom { exp, sign, tail, pow } => {
                let c = Self::atom_constant(*sign, tail, b)?;
                let v = rational_pow(q0, exp.eval(b)?) + BigRational::from_integer(BigInt::from(c));
                num_traits::pow(v, *pow as usize)
            }
            Factor::Prod { var, lo, hi, body } => {
                let (lo, hi) = (lo.eval(b)?, hi.eval(b)?);
                let mut inner = b.clone();
                let mut acc = BigRational::one();
                for i in lo..=hi {
                    inner.set(var, i);
                    acc *= body.evaluate(&inner, q0)?;
                }
                acc
            }
            Factor::Group { inner, pow } => num_traits::pow(inner.evaluate(b, q0)?, *pow as usize),
        })
    }

    fn factorize(&self, b: &Bindings) -> Result<CycloFactorization> {
        Ok(match self {
            Factor::Rational(r) => {
                if r.is_zero() {
                    return Err(Error::ZeroValue);
                }
                CycloFactorization::scalar(r.clone())
            }
            Factor::QPow(k) => CycloFactorization::q_pow(k.eval(b)?),
            Factor::Atom { exp, sign, tail, pow } => {
                let c = Self::atom_constant(*sign, tail, b)?;
                CycloFactorization::q_binomial(exp.eval(b)?, c)
                    .ok_or(Error::ZeroValue)?
                    .pow(*pow)
            }
            Factor::Prod { var, lo, hi, body } => {
                let (lo, hi) = (lo.eval(b)?, hi.eval(b)?);
                let mut inner = b.clone();
                let mut acc = CycloFactorization::one();
                for i in lo..=hi {
                    inner.set(var, i);
                    acc = acc.mul(&body.factorize(&inner)?);
                }
                acc
            }
            Factor::Group { inner, pow } => inner.factorize(b)?.pow(*pow),
        })
    }
}

impl DegreeExpr {
    pub fn parse(text: &str) -> Result<DegreeExpr> {
        let mut p = Parser::new(text);
        let e = p.expr()?;
        p.finish()?;
        Ok(e)
    }

    fn factors(&self) -> impl Iterator<Item = (MulOp, &Factor)> {
        std::iter::once((MulOp::Mul, &self.head)).chain(self.tail.iter().map(|(op, f)| (*op, f)))
    }

    /// Exact value at `q = q0`. A zero divisor is an error naming the factor.
    pub fn evaluate(&self, b: &Bindings, q0: &BigRational) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for (op, factor) in self.factors() {
            let v = factor.evaluate(b, q0)?;
            match op {
                MulOp::Mul => acc *= v,
                MulOp::Div if v.is_zero() => return Err(Error::ZeroDenominator(factor.to_string())),
                MulOp::Div => acc /= v,
            }
        }
        Ok(acc)
    }

    /// Symbolic product of cyclotomic factors. Zero factors are errors:
    /// [`Error::ZeroDenominator`] in a divisor, [`Error::ZeroValue`] otherwise.
    pub fn factorize(&self, b: &Bindings) -> Result<CycloFactorization> {
        let mut acc = CycloFactorization::one();
        for (op, factor) in self.factors() {
            match (op, factor.factorize(b)) {
                (MulOp::Mul, v) => acc = acc.mul(&v?),
                (MulOp::Div, Err(Error::ZeroValue)) => {
                    return Err(Error::ZeroDenominator(factor.to_string()))
                }
                (MulOp::Div, v) => acc = acc.div(&v?),
            }
        }
        Ok(acc)
    }
}

fn write_pow(f: &mut fmt::Formatter<'_>, pow: u32) -> fmt::Result {
    if pow != 1 {
        write!(f, "^{pow}")?;
    }
    Ok(())
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Factor::Rational(r) => write!(f, "({}/{})", r.numer(), r.denom()),
            Factor::QPow(k) => write!(f, "q^({k})"),
            Factor::Atom { exp, sign, tail, pow } => {
                let s = if *sign < 0 { '-' } else { '+' };
                match tail {
                    AtomTail::One => write!(f, "(q^({exp}){s}1)")?,
                    AtomTail::Eps(k) => write!(f, "(q^({exp}){s}eps^({k}))")?,
                }
                write_pow(f, *pow)
            }
            Factor::Prod { var, lo, hi, body } => write!(f, "prod({var}={lo}..{hi}; {body})"),
            Factor::Group { inner, pow } => {
                write!(f, "({inner})")?;
                write_pow(f, *pow)
            }
        }
    }
}

impl fmt::Display for DegreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (op, factor) in &self.tail {
            let c = if *op == MulOp::Mul { '*' } else { '/' };
            write!(f, "{c}{factor}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        let boundary = self.src.get(end).is_none_or(|c| !(c.is_ascii_alphanumeric() || *c == b'_'));
        if self.src.get(self.pos..end) == Some(kw.as_bytes()) && boundary {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return self.err("expected identifier");
        }
        Ok(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap())
    }

    fn int_expr(&mut self) -> Result<IntExpr> {
        let mut lhs = self.int_term()?;
        loop {
            if self.eat(b'+') {
                lhs = IntExpr::Add(Box::new(lhs), Box::new(self.int_term()?));
            } else if self.peek() == Some(b'-') {
                self.pos += 1;
                lhs = IntExpr::Sub(Box::new(lhs), Box::new(self.int_term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn int_term(&mut self) -> Result<IntExpr> {
        let mut lhs = self.int_atom()?;
        while self.eat(b'*') {
            lhs = IntExpr::Mul(Box::new(lhs), Box::new(self.int_atom()?));
        }
        Ok(lhs)
    }

    fn int_atom(&mut self) -> Result<IntExpr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(IntExpr::Neg(Box::new(self.int_atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.int_expr()?;
                self.expect(b')')?;
                // literal negative numbers print as "(-k)"
                Ok(match e {
                    IntExpr::Neg(inner) if matches!(*inner, IntExpr::Lit(_)) => {
                        let IntExpr::Lit(v) = *inner else { unreachable!() };
                        IntExpr::Lit(-v)
                    }
                    e => e,
                })
            }
            Some(c) if c.is_ascii_digit() => Ok(IntExpr::Lit(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => Ok(IntExpr::Var(self.ident()?)),
            _ => self.err("expected integer expression"),
        }
    }

    /// Exponent after `^`: a parenthesised intexpr or a bare integer.
    fn exponent(&mut self) -> Result<IntExpr> {
        if self.eat(b'(') {
            let e = self.int_expr()?;
            self.expect(b')')?;
            Ok(e)
        } else {
            Ok(IntExpr::Lit(self.integer()?))
        }
    }

    fn power_suffix(&mut self) -> Result<u32> {
        if self.eat(b'^') {
            let k = self.integer()?;
            u32::try_from(k).or_else(|_| self.err("power out of range"))
        } else {
            Ok(1)
        }
    }

    fn q_term(&mut self) -> Result<IntExpr> {
        if !self.eat_keyword("q") {
            return self.err("expected `q`");
        }
        if self.eat(b'^') {
            self.exponent()
        } else {
            Ok(IntExpr::Lit(1))
        }
    }

    fn expr(&mut self) -> Result<DegreeExpr> {
        let head = self.factor()?;
        let mut tail = Vec::new();
        loop {
            if self.eat(b'*') {
                tail.push((MulOp::Mul, self.factor()?));
            } else if self.eat(b'/') {
                tail.push((MulOp::Div, self.factor()?));
            } else {
                return Ok(DegreeExpr { head, tail });
            }
        }
    }

    fn factor(&mut self) -> Result<Factor> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                Ok(Factor::Rational(BigRational::from_integer(self.integer()?.into())))
            }
            Some(b'(') => {
                self.pos += 1;
                let save = self.pos;
                if let Some(atom) = self.try_atom()? {
                    return Ok(atom);
                }
                self.pos = save;
                let inner = self.expr()?;
                self.expect(b')')?;
                let pow = self.power_suffix()?;
                Ok(Factor::Group { inner: Box::new(inner), pow })
            }
            _ if self.eat_keyword("prod") => {
                self.expect(b'(')?;
                let var = self.ident()?;
                self.expect(b'=')?;
                let lo = self.int_expr()?;
                self.expect(b'.')?;
                self.expect(b'.')?;
                let hi = self.int_expr()?;
                self.expect(b';')?;
                let body = self.expr()?;
                self.expect(b')')?;
                Ok(Factor::Prod { var, lo, hi, body: Box::new(body) })
            }
            Some(b'q') => Ok(Factor::QPow(self.q_term()?)),
            _ => self.err("expected factor"),
        }
    }

    /// After an opening parenthesis: `qterm ± (1 | eps…) )`, or `None` if the
    /// input is some other parenthesised expression.
    fn try_atom(&mut self) -> Result<Option<Factor>> {
        if self.peek() != Some(b'q') {
            return Ok(None);
        }
        let Ok(exp) = self.q_term() else {
            return Ok(None);
        };
        let sign = match self.peek() {
            Some(b'-') => -1,
            Some(b'+') => 1,
            _ => return Ok(None),
        };
        self.pos += 1;
        let tail = if self.eat_keyword("eps") {
            AtomTail::Eps(if self.eat(b'^') { self.exponent()? } else { IntExpr::Lit(1) })
        } else {
            match self.peek() {
                Some(b'1') => {
                    self.pos += 1;
                    AtomTail::One
                }
                _ => return Ok(None),
            }
        };
        if !self.eat(b')') {
            return Ok(None);
        }
        let pow = self.power_suffix()?;
        Ok(Some(Factor::Atom { exp, sign, tail, pow }))
    }
}
