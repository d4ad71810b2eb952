//! Character degrees of the symmetric group via the hook-length formula, and
//! the p'-degree test by Macdonald's digit criterion.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{factorial_valuation, valuation_u64};
use crate::partition::{PAdicDigits, Partition};

/// Degree `χ^λ(1)` of an irreducible character of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharacterDegree(pub BigUint);

impl CharacterDegree {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for CharacterDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for CharacterDegree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `π(λ)`, the product of all hook lengths; 1 for the empty partition.
pub fn hook_product(lambda: &Partition) -> BigUint {
    lambda
        .hook_lengths()
        .lengths()
        .iter()
        .fold(BigUint::one(), |acc, &h| acc * h as u64)
}

/// `n! / π(λ)`. Panics if the quotient is not integral.
pub fn degree(lambda: &Partition) -> CharacterDegree {
    let (quot, rem) = factorial(lambda.size()).div_rem(&hook_product(lambda));
    assert!(
        rem.is_zero(),
        "internal consistency: hook product of {lambda} does not divide n!"
    );
    CharacterDegree(quot)
}

/// `v_p(χ^λ(1))` from Legendre's formula and the hook valuations; the degree
/// itself is never formed.
pub fn p_valuation_of_degree(lambda: &Partition, p: u64) -> u64 {
    let hooks: u64 = lambda
        .hook_lengths()
        .lengths()
        .iter()
        .map(|&h| valuation_u64(h as u64, p) as u64)
        .sum();
    let top = factorial_valuation(lambda.size() as u64, p);
    assert!(top >= hooks, "internal consistency: negative valuation for {lambda}");
    top - hooks
}

/// Macdonald's criterion: with `n = Σ a_j p^j` and top index `k`, `λ ⊢_{p'} n`
/// iff `|H^{p^k}(λ)| = a_k` and `C_{p^k}(λ) ⊢_{p'} n − a_k p^k`.
pub fn is_p_prime_macdonald(lambda: &Partition, p: u64) -> bool {
    let n = lambda.size() as u64;
    if n < p {
        return true;
    }
    let digits = PAdicDigits::new(n, p);
    let k = digits.top().expect("n >= p has digits");
    let a_k = digits.digits[k] as usize;
    let pk = p.pow(k as u32) as usize;
    if lambda.count_hooks_divisible(pk) != a_k {
        return false;
    }
    is_p_prime_macdonald(&lambda.core(pk), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&p("3,2")).0, 5u32.into());
        assert_eq!(degree(&p("9")).0, 1u32.into());
        assert_eq!(degree(&p("2,2,1,1,1")).0, 14u32.into());
        assert_eq!(degree(&Partition::empty()).0, 1u32.into());
    }

    #[test]
    fn hook_product_examples() {
        assert_eq!(hook_product(&p("2,1")), 3u32.into());
        assert_eq!(hook_product(&Partition::empty()), 1u32.into());
        assert_eq!(hook_product(&p("3,2")), 24u32.into());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation_of_degree(&p("2,2"), 2), 1);
        assert_eq!(p_valuation_of_degree(&p("11"), 3), 0);
        assert_eq!(p_valuation_of_degree(&p("2,2,1,1,1"), 7), 1);
    }

    #[test]
    fn macdonald_examples() {
        assert!(is_p_prime_macdonald(&p("5,2"), 5));
        assert!(!is_p_prime_macdonald(&p("2,2"), 2));
        for n in 1..20 {
            for q in [2, 3, 5, 7] {
                assert!(is_p_prime_macdonald(&Partition::row(n), q));
            }
        }
    }

    #[test]
    fn hook_partition_degrees() {
        for n in 2..15 {
            let lam = Partition::row(n - 1).star(0, 1);
            assert_eq!(degree(&lam).0, BigUint::from(n - 1));
            for lam in partitions(n) {
                assert_eq!(degree(&lam), degree(&lam.conjugate()));
            }
        }
    }
}
