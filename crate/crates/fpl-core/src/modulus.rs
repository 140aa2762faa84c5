//! The prime-power modulus `N = p^l` that parameterizes the graph and all
//! expansions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// `(p, l)` with `N = p^l` cached. `p` is checked prime at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    l: u32,
    n: BigInt,
}

impl Modulus {
    pub fn new(p: u64, l: u32) -> Result<Self> {
        if l == 0 {
            return Err(Error::BadModulus("l must be at least 1".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::BadModulus(format!("{p} is not prime")));
        }
        Ok(Modulus { p, l, n: BigInt::from(p).pow(l) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `N = p^l`.
    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// `x mod p` as a small residue in `[0, p)`.
    pub fn residue(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits u64")
    }

    pub fn divides_p(&self, x: &BigInt) -> bool {
        self.residue(x) == 0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.l)
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({}^{} = {})", self.p, self.l, self.n)
    }
}

/// Deterministic Miller-Rabin for u64 (the first twelve primes are a
/// complete witness set below 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let m = Modulus::new(5, 2).unwrap();
        assert_eq!(m.n(), &BigInt::from(25));
        assert!(Modulus::new(6, 1).is_err());
        assert!(Modulus::new(5, 0).is_err());
        assert!(Modulus::new(0, 1).is_err());
        assert!(Modulus::new(1, 1).is_err());
    }

    #[test]
    fn primality() {
        let primes = [2u64, 3, 5, 7, 11, 101, 2147483647, 18446744073709551557];
        for p in primes {
            assert!(is_prime_u64(p), "{p}");
        }
        let composites = [0u64, 1, 4, 9, 91, 561, 25326001, 3215031751, 18446744073709551615];
        for c in composites {
            assert!(!is_prime_u64(c), "{c}");
        }
    }

    #[test]
    fn residue_of_negative() {
        let m = Modulus::new(5, 1).unwrap();
        assert_eq!(m.residue(&BigInt::from(-3)), 2);
        assert_eq!(m.residue(&BigInt::from(-10)), 0);
    }
}
