//! Decimal intervals: the carrier for inputs only known to finite precision
//! (e.g. `1/π` as a 40-digit decimal with an error bound).
//!
//! Every operation is an exact enclosure; queries that the interval cannot
//! decide fail with `InsufficientPrecision` instead of guessing.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A closed interval `[lo, hi]` of rationals with `lo < hi`, standing for
/// an unknown real inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalInterval {
    lo: Rational,
    hi: Rational,
}

impl DecimalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo.is_infinite() || hi.is_infinite() || lo >= hi {
            return Err(Error::InvalidLiteral(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(DecimalInterval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn map_monotone(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let (a, b) = (f(&self.lo), f(&self.hi));
        if a <= b {
            DecimalInterval { lo: a, hi: b }
        } else {
            DecimalInterval { lo: b, hi: a }
        }
    }

    /// `q·x + r` with `q != 0`.
    pub fn mul_add_rational(&self, q: &Rational, r: &Rational) -> Self {
        self.map_monotone(|v| &(q * v) + r)
    }

    pub fn sub_int(&self, n: &BigInt) -> Self {
        let nr = Rational::from_integer(n.clone());
        DecimalInterval { lo: &self.lo - &nr, hi: &self.hi - &nr }
    }

    pub fn neg(&self) -> Self {
        DecimalInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn sign(&self) -> Result<i8> {
        if self.lo.num().is_positive() {
            Ok(1)
        } else if self.hi.is_negative() {
            Ok(-1)
        } else {
            Err(Error::InsufficientPrecision("sign of interval straddling zero".into()))
        }
    }

    pub fn abs(&self) -> Result<Self> {
        match self.sign()? {
            1 => Ok(self.clone()),
            _ => Ok(self.neg()),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        self.sign()?;
        Ok(self.map_monotone(Rational::recip))
    }

    /// Common floor of both endpoints, or an error if the interval straddles
    /// an integer boundary.
    pub fn floor(&self) -> Result<BigInt> {
        let (a, b) = (self.lo.floor(), self.hi.floor());
        if a == b {
            Ok(a)
        } else {
            Err(Error::InsufficientPrecision("floor across an integer boundary".into()))
        }
    }

    /// True if the open interval contains an integer (so integrality of the
    /// unknown value cannot be ruled out).
    pub fn straddles_integer(&self) -> bool {
        self.lo.floor() != self.hi.floor() || self.lo.is_integer() || self.hi.is_integer()
    }

    /// Strict comparison against a rational; equality is never provable.
    pub fn cmp_rational(&self, r: &Rational) -> Result<Ordering> {
        if &self.hi < r {
            Ok(Ordering::Less)
        } else if &self.lo > r {
            Ok(Ordering::Greater)
        } else {
            Err(Error::InsufficientPrecision(format!("comparison against {r}")))
        }
    }

    /// True when no rational with denominator `<= bound` lies inside.
    pub fn excludes_denominators_up_to(&self, bound: u64) -> bool {
        for den in 1..=bound {
            let d = BigInt::from(den);
            let lo_scaled = self.lo.num() * &d;
            let hi_num = (self.hi.num() * &d).div_floor(self.hi.den());
            // a numerator n with lo <= n/den <= hi exists iff floor(hi*den) >= ceil(lo*den)
            let lo_num = lo_scaled.div_floor(self.lo.den());
            let ceil_lo = if lo_scaled == &lo_num * self.lo.den() { lo_num } else { lo_num + 1 };
            if hi_num >= ceil_lo {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for DecimalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: &str, hi: &str) -> DecimalInterval {
        DecimalInterval::new(lo.parse().unwrap(), hi.parse().unwrap()).unwrap()
    }

    #[test]
    fn construction_rejects_degenerate() {
        assert!(DecimalInterval::new("1/2".parse().unwrap(), "1/2".parse().unwrap()).is_err());
        assert!(DecimalInterval::new("2/3".parse().unwrap(), "1/2".parse().unwrap()).is_err());
    }

    #[test]
    fn floor_and_sign() {
        assert_eq!(iv("1/3", "2/3").floor().unwrap(), BigInt::from(0));
        assert!(iv("2/3", "4/3").floor().is_err());
        assert_eq!(iv("1/3", "2/3").sign().unwrap(), 1);
        assert_eq!(iv("-2/3", "-1/3").sign().unwrap(), -1);
        assert!(iv("-1/3", "1/3").sign().is_err());
    }

    #[test]
    fn recip_is_an_enclosure() {
        let r = iv("1/3", "1/2").recip().unwrap();
        assert_eq!(r.lo(), &"2/1".parse().unwrap());
        assert_eq!(r.hi(), &"3/1".parse().unwrap());
        assert!(iv("-1/3", "1/2").recip().is_err());
    }

    #[test]
    fn rational_exclusion_scan() {
        let i = iv("10/71", "10/70");
        assert!(!i.excludes_denominators_up_to(7)); // 1/7 inside
        // strictly between the Farey neighbors 1/4 and 1/3, every rational
        // has denominator at least 7
        let j = iv("26/100", "33/100");
        assert!(j.excludes_denominators_up_to(6));
        assert!(!j.excludes_denominators_up_to(7)); // 2/7 inside
    }
}
