//! Ground rings: the integers and prime fields `Z/p`.
//!
//! Every coefficient in the crate is a [`BigInt`]. Under a prime field the
//! stored value is the canonical residue in `[0, p)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring of a chain complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientSpec {
    Integers,
    PrimeField(u64),
}

impl CoefficientSpec {
    /// Builds `Z/p`, rejecting non-primes.
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(CoefficientSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientSpec::PrimeField(_))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientSpec::Integers => 0,
            CoefficientSpec::PrimeField(p) => *p,
        }
    }

    /// Maps an integer to its canonical representative.
    pub fn normalize(&self, v: BigInt) -> BigInt {
        match self {
            CoefficientSpec::Integers => v,
            CoefficientSpec::PrimeField(p) => v.mod_floor(&BigInt::from(*p)),
        }
    }

    pub fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.normalize(a + b)
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &BigInt) -> BigInt {
        self.normalize(-a)
    }

    /// Multiplicative inverse, if `a` is a unit of the ring.
    pub fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        match self {
            CoefficientSpec::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            CoefficientSpec::PrimeField(p) => {
                let p = BigInt::from(*p);
                let a = a.mod_floor(&p);
                if a.is_zero() {
                    return None;
                }
                let ext = a.extended_gcd(&p);
                Some(ext.x.mod_floor(&p))
            }
        }
    }

    /// Key used to rank pivot candidates: `|x|` over the integers, the
    /// canonical residue over a field.
    pub fn pivot_size(&self, a: &BigInt) -> BigInt {
        match self {
            CoefficientSpec::Integers => a.abs(),
            CoefficientSpec::PrimeField(_) => a.clone(),
        }
    }
}

impl fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientSpec::Integers => write!(f, "Z"),
            CoefficientSpec::PrimeField(p) => write!(f, "Z/{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `|n|` in increasing order, by trial division.
/// Returns an empty list for `n = 0` and `n = ±1`.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Prime factorization `[(p, e)]` of `|n|`, primes ascending.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += if d == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(CoefficientSpec::prime_field(4).is_err());
        assert!(CoefficientSpec::prime_field(1).is_err());
        assert!(CoefficientSpec::prime_field(7).is_ok());
    }

    #[test]
    fn field_arithmetic() {
        let f = CoefficientSpec::PrimeField(3);
        assert_eq!(f.add(&BigInt::from(1), &BigInt::from(2)), BigInt::zero());
        assert_eq!(f.normalize(BigInt::from(-1)), BigInt::from(2));
        for a in 1..3 {
            let a = BigInt::from(a);
            let inv = f.inverse(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), BigInt::one());
        }
        assert!(f.inverse(&BigInt::from(3)).is_none());
        assert_eq!(
            CoefficientSpec::Integers.inverse(&BigInt::from(-1)),
            Some(BigInt::from(-1))
        );
        assert!(CoefficientSpec::Integers.inverse(&BigInt::from(2)).is_none());
    }

    #[test]
    fn factorization() {
        let b = |v: i64| BigInt::from(v);
        assert!(prime_factors(&b(1)).is_empty());
        assert_eq!(prime_factors(&b(2)), vec![b(2)]);
        assert_eq!(prime_factors(&b(12)), vec![b(2), b(3)]);
        assert_eq!(prime_factors(&b(-98)), vec![b(2), b(7)]);
        assert_eq!(factorize(&b(360)), vec![(b(2), 3), (b(3), 2), (b(5), 1)]);
        assert_eq!(factorize(&b(97)), vec![(b(97), 1)]);
    }
}
