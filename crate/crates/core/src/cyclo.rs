//! Cyclotomic polynomials and exact products `ε·(a/b)·q^t·∏ Φ_m^{e_m}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{is_prime, multiplicative_order, prime_power, rational_pow};
use crate::error::{Error, Result};

fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn phi_cache() -> &'static Mutex<HashMap<u64, Vec<i128>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i128>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact division of `num` by the monic polynomial `den` (coefficients in
/// ascending degree). Panics on a non-zero remainder.
fn divide_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut quot = vec![0i128; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "internal consistency: inexact cyclotomic division");
    quot
}

/// Coefficients of `Φ_m`, constant term first, obtained by dividing `q^m − 1`
/// by `Φ_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_coefficients(m: u64) -> Vec<i128> {
    assert!(m >= 1);
    if let Some(c) = phi_cache().lock().unwrap().get(&m) {
        return c.clone();
    }
    let mut poly = vec![0i128; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in divisors(m).into_iter().filter(|&d| d < m) {
        poly = divide_exact(&poly, &cyclotomic_coefficients(d));
    }
    phi_cache().lock().unwrap().insert(m, poly.clone());
    poly
}

pub fn eval_poly(coeffs: &[i128], q0: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, &c| acc * q0 + BigRational::from_integer(BigInt::from(c)))
}

pub fn eval_phi(m: u64, q0: &BigRational) -> BigRational {
    eval_poly(&cyclotomic_coefficients(m), q0)
}

/// Orders of `q` attached to a prime `p ∤ q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderData {
    pub q: u64,
    pub p: u64,
    /// Order of `q` mod `p`.
    pub d: u64,
    /// Order of `q²` mod `p`.
    pub e_bcd: u64,
    /// +1 if `p | q^{e_bcd} − 1`, −1 if `p | q^{e_bcd} + 1`.
    pub side: i8,
}

impl OrderData {
    pub fn new(q: u64, p: u64) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if q.is_multiple_of(p) {
            return Err(Error::Precondition(format!("p = {p} divides q = {q}")));
        }
        let d = multiplicative_order(q as i64 % p as i64, p);
        let e_bcd = multiplicative_order(((q % p) * (q % p) % p) as i64, p);
        let side = if d == e_bcd { 1 } else { -1 };
        Ok(OrderData { q, p, d, e_bcd, side })
    }

    /// Order of `εq` mod `p`.
    pub fn e_a(&self, eps: i8) -> u64 {
        multiplicative_order(eps as i64 * (self.q % self.p) as i64, self.p)
    }
}

/// `p | Φ_m(q)` iff `m = d·p^i` for some `i ≥ 0`.
pub fn p_divides_phi(m: u64, ord: &OrderData) -> bool {
    if !m.is_multiple_of(ord.d) {
        return false;
    }
    let mut k = m / ord.d;
    while k.is_multiple_of(ord.p) {
        k /= ord.p;
    }
    k == 1
}

/// Exact value `scalar · q^{q_power} · ∏ Φ_m^{e_m}`; zero exponents are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloFactorization {
    pub scalar: BigRational,
    pub q_power: i64,
    pub factors: BTreeMap<u64, i64>,
}

impl CycloFactorization {
    pub fn one() -> Self {
        Self::scalar(BigRational::one())
    }

    pub fn scalar(scalar: BigRational) -> Self {
        CycloFactorization { scalar, q_power: 0, factors: BTreeMap::new() }
    }

    pub fn q_pow(k: i64) -> Self {
        CycloFactorization { q_power: k, ..Self::one() }
    }

    pub fn phi(m: u64) -> Self {
        let mut f = Self::one();
        f.factors.insert(m, 1);
        f
    }

    /// `q^s − 1` (sign −1) or `q^s + 1` (sign +1), for `s ≥ 1`.
    pub fn q_pochhammer(s: u64, sign: i8) -> Self {
        assert!(s >= 1);
        let factors = if sign < 0 {
            divisors(s).into_iter().map(|m| (m, 1)).collect()
        } else {
            divisors(2 * s).into_iter().filter(|m| !s.is_multiple_of(*m)).map(|m| (m, 1)).collect()
        };
        CycloFactorization { factors, ..Self::one() }
    }

    /// `q^k + sign` for any integer `k`; `None` when the value is zero (`k = 0`,
    /// sign −1).
    pub fn q_binomial(k: i64, sign: i8) -> Option<Self> {
        match k.cmp(&0) {
            std::cmp::Ordering::Greater => Some(Self::q_pochhammer(k as u64, sign)),
            std::cmp::Ordering::Equal => {
                (sign > 0).then(|| Self::scalar(BigRational::from_integer(2.into())))
            }
            // q^{-k} ± 1 = ±q^{-k} (q^k ± 1)
            std::cmp::Ordering::Less => {
                let mut f = Self::q_pochhammer(k.unsigned_abs(), sign);
                f.q_power = k;
                if sign < 0 {
                    f.scalar = -f.scalar;
                }
                Some(f)
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (&m, &e) in &other.factors {
            let slot = factors.entry(m).or_insert(0);
            *slot += e;
            if *slot == 0 {
                factors.remove(&m);
            }
        }
        CycloFactorization {
            scalar: &self.scalar * &other.scalar,
            q_power: self.q_power + other.q_power,
            factors,
        }
    }

    pub fn inverse(&self) -> Self {
        CycloFactorization {
            scalar: BigRational::one() / &self.scalar,
            q_power: -self.q_power,
            factors: self.factors.iter().map(|(&m, &e)| (m, -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inverse())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn is_polynomial(&self) -> bool {
        self.q_power >= 0 && self.factors.values().all(|&e| e >= 0)
    }

    /// Exact value at `q0 > 1`.
    pub fn evaluate(&self, q0: &BigRational) -> BigRational {
        let mut v = &self.scalar * rational_pow(q0, self.q_power);
        for (&m, &e) in &self.factors {
            v *= rational_pow(&eval_phi(m, q0), e);
        }
        v
    }

    /// Factors `Φ_m` with `m = d·p^i` and non-zero exponent.
    pub fn p_factors(&self, ord: &OrderData) -> Vec<(u64, i64)> {
        self.factors
            .iter()
            .filter(|(&m, _)| p_divides_phi(m, ord))
            .map(|(&m, &e)| (m, e))
            .collect()
    }
}

impl fmt::Display for CycloFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        if self.q_power != 0 {
            write!(f, "*q^{}", self.q_power)?;
        }
        for (m, e) in &self.factors {
            write!(f, "*Phi{m}")?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for CycloFactorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CycloFactorization", 3)?;
        st.serialize_field("scalar", &self.scalar.to_string())?;
        st.serialize_field("q_power", &self.q_power)?;
        let factors: BTreeMap<String, i64> =
            self.factors.iter().map(|(m, e)| (m.to_string(), *e)).collect();
        st.serialize_field("factors", &factors)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn coefficients() {
        assert_eq!(cyclotomic_coefficients(1), vec![-1, 1]);
        assert_eq!(cyclotomic_coefficients(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_coefficients(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_coefficients(7), vec![1; 7]);
    }

    #[test]
    fn pochhammer_factors() {
        let keys = |f: CycloFactorization| f.factors.keys().copied().collect::<Vec<_>>();
        assert_eq!(keys(CycloFactorization::q_pochhammer(6, -1)), vec![1, 2, 3, 6]);
        assert_eq!(keys(CycloFactorization::q_pochhammer(3, 1)), vec![2, 6]);
        assert_eq!(keys(CycloFactorization::q_pochhammer(1, 1)), vec![2]);
    }

    #[test]
    fn evaluation() {
        assert_eq!(CycloFactorization::q_pochhammer(6, -1).evaluate(&r(2)), r(63));
        assert_eq!(eval_phi(20, &r(2)), r(205));
        assert_eq!(CycloFactorization::q_binomial(-2, -1).unwrap().evaluate(&r(3)), BigRational::new((-8).into(), 9.into()));
        assert!(CycloFactorization::q_binomial(0, -1).is_none());
        assert_eq!(CycloFactorization::q_binomial(0, 1).unwrap().evaluate(&r(5)), r(2));
    }

    #[test]
    fn order_data() {
        let ord = OrderData::new(2, 5).unwrap();
        assert_eq!((ord.d, ord.e_bcd, ord.side), (4, 2, -1));
        assert!(p_divides_phi(4, &ord));
        assert!(p_divides_phi(20, &ord));
        assert!(!p_divides_phi(8, &ord));
        let ord = OrderData::new(2, 7).unwrap();
        assert_eq!((ord.d, ord.e_bcd, ord.side), (3, 3, 1));
        assert_eq!(ord.e_a(-1), 6);
        assert!(OrderData::new(6, 5).is_err());
        assert!(OrderData::new(25, 5).is_err());
    }

    #[test]
    fn algebra() {
        let a = CycloFactorization::q_pochhammer(6, -1);
        let b = CycloFactorization::q_pochhammer(3, -1);
        let quot = a.div(&b);
        assert_eq!(quot, CycloFactorization::q_pochhammer(3, 1));
        assert!(quot.mul(&b).div(&a).factors.is_empty());
    }
}
