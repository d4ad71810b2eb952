//! Small integer helpers: primality, prime powers, multiplicative orders and
//! p-adic valuations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Returns `(ℓ, a)` with `q = ℓ^a`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            break;
        }
        d += 1;
    }
    let ell = if d * d <= q { d } else { q };
    let mut rest = q;
    let mut a = 0;
    while rest.is_multiple_of(ell) {
        rest /= ell;
        a += 1;
    }
    (rest == 1).then_some((ell, a))
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| is_prime(p)).collect()
}

pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| is_prime_power(q)).collect()
}

/// Multiplicative order of `a` modulo the prime `p`. `a` must be a unit mod `p`.
pub fn multiplicative_order(a: i64, p: u64) -> u64 {
    let p = p as i64;
    let a = a.rem_euclid(p);
    assert!(a != 0, "{a} is not a unit modulo {p}");
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = (x * a) % p;
        k += 1;
    }
    k
}

/// Exponent of `p` in `n`; `n` must be non-zero.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Legendre's formula: exponent of `p` in `n!`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut pk = p;
    while pk <= n {
        total += n / pk;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    total
}

pub fn valuation_bigint(n: &BigInt, p: u64) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroValue);
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return Ok(v);
        }
        n = quot;
        v += 1;
    }
}

/// `v_p(numerator) − v_p(denominator)` of a non-zero rational.
pub fn p_valuation_of_value(v: &BigRational, p: u64) -> Result<i64> {
    if v.is_zero() {
        return Err(Error::ZeroValue);
    }
    let num = valuation_bigint(v.numer(), p)? as i64;
    let den = valuation_bigint(v.denom(), p)? as i64;
    Ok(num - den)
}

/// Removes every factor of the prime `ell` from a non-zero rational and takes
/// the absolute value. For `q = ℓ^a` this is the q'-part of a degree.
pub fn strip_prime(v: &BigRational, ell: u64) -> BigRational {
    let strip = |n: &BigInt| {
        let ell = BigInt::from(ell);
        let mut n = n.abs();
        while !n.is_zero() && (&n % &ell).is_zero() {
            n /= &ell;
        }
        n
    };
    BigRational::new(strip(v.numer()), strip(v.denom()))
}

pub fn rational_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        BigRational::one() / num_traits::pow(base.clone(), exp.unsigned_abs() as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_powers() {
        assert_eq!(primes_in(1, 20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_powers_in(2, 16), vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 5), 4);
        assert_eq!(multiplicative_order(4, 7), 3);
        assert_eq!(multiplicative_order(-2, 5), 4);
        assert_eq!(multiplicative_order(-4, 5), 1);
    }

    #[test]
    fn valuations() {
        assert_eq!(factorial_valuation(25, 5), 6);
        assert_eq!(factorial_valuation(7, 2), 4);
        let v = BigRational::new(205.into(), 1.into());
        assert_eq!(p_valuation_of_value(&v, 5).unwrap(), 1);
        let v = BigRational::new(7.into(), 2.into());
        assert_eq!(p_valuation_of_value(&v, 5).unwrap(), 0);
        assert_eq!(p_valuation_of_value(&BigRational::one(), 7).unwrap(), 0);
        assert_eq!(p_valuation_of_value(&BigRational::zero(), 7), Err(Error::ZeroValue));
    }

    #[test]
    fn strip() {
        let v = BigRational::new((-96).into(), 5.into());
        assert_eq!(strip_prime(&v, 2), BigRational::new(3.into(), 5.into()));
    }
}
