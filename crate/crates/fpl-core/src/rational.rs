//! Exact rationals with an explicit point at infinity, plus the raw
//! (unreduced) fraction algebra used by mediant constructions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `den >= 0`.
///
/// `den == 0` encodes the single value `1/0 = ∞`, so that graph adjacency
/// can treat infinity like any other vertex. All finite values keep
/// `den > 0` and `gcd(|num|, den) == 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Canonical reduced form; signs move into the numerator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            if num.is_zero() {
                return Err(Error::ZeroOverZero);
            }
            return Ok(Self::infinity());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Rational { num, den })
    }

    pub fn infinity() -> Self {
        Rational { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational { num: n.into(), den: BigInt::one() }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// `⌊x⌋` for finite values.
    pub fn floor(&self) -> BigInt {
        assert!(!self.is_infinite(), "floor of infinity");
        self.num.div_floor(&self.den)
    }

    pub fn abs(&self) -> Rational {
        Rational { num: self.num.abs(), den: self.den.clone() }
    }

    /// `1/x` for finite non-zero values.
    pub fn recip(&self) -> Rational {
        assert!(!self.is_infinite() && !self.is_zero(), "recip of 0 or infinity");
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Rational { num, den }
    }

    fn binop(&self, rhs: &Rational, f: impl Fn(&BigInt, &BigInt, &BigInt, &BigInt) -> BigInt) -> Rational {
        assert!(!self.is_infinite() && !rhs.is_infinite(), "arithmetic on infinity");
        let num = f(&self.num, &self.den, &rhs.num, &rhs.den);
        let den = &self.den * &rhs.den;
        Rational::new(num, den).expect("finite operands")
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        self.binop(rhs, |an, ad, bn, bd| an * bd + bn * ad)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self.binop(rhs, |an, ad, bn, bd| an * bd - bn * ad)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        self.binop(rhs, |an, _, bn, _| an * bn)
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        self * &rhs.recip()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

/// Total order with `∞` greater than every finite value. This matches the
/// edge-direction convention where the path from `∞` enters the real line
/// from above.
impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.num * &other.den).cmp(&(&other.num * &self.den)),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// `"num/den"` or a bare integer (denominator 1). `"1/0"` is infinity.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLiteral(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                Rational::new(num, den)
            }
            None => {
                let num = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Rational::from_integer(num))
            }
        }
    }
}

/// An unreduced numerator/denominator pair. Mediant constructions work on
/// raw components; reduction is explicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFrac {
    pub num: BigInt,
    pub den: BigInt,
}

impl RawFrac {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        RawFrac { num: num.into(), den: den.into() }
    }

    pub fn reduced(&self) -> Result<Rational> {
        Rational::new(self.num.clone(), self.den.clone())
    }
}

impl fmt::Display for RawFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Farey sum `R1 ⊕ R2 = (r1+r2)/(s1+s2)` on raw components.
///
/// Adjacency is deliberately not checked here; graph-level callers enforce
/// it where required, and the decomposition of rationals outside the vertex
/// set applies this to non-adjacent flanks.
pub fn farey_sum(r1: &Rational, r2: &Rational) -> RawFrac {
    RawFrac::new(r1.num() + r2.num(), r1.den() + r2.den())
}

/// Farey difference `R2 ⊖ R1 = (r2-r1)/(s2-s1)` on raw components.
pub fn farey_diff(r2: &Rational, r1: &Rational) -> Result<RawFrac> {
    if r2.den() == r1.den() {
        return Err(Error::ZeroDenominator);
    }
    Ok(RawFrac::new(r2.num() - r1.num(), r2.den() - r1.den()))
}

/// `(⊕_k P) ⊕ R = (k·u + r)/(k·v + s)` on raw components.
pub fn iterated_mediant(k: impl Into<BigInt>, p: &Rational, r: &Rational) -> RawFrac {
    let k = k.into();
    assert!(k >= BigInt::one(), "iterated mediant needs k >= 1");
    RawFrac::new(&k * p.num() + r.num(), &k * p.den() + r.den())
}

/// Extended Euclid: `(g, s, t)` with `g = gcd(a, b) > 0` and `s·a + t·b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroOverZero);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_negative() {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    Ok((r0, s0, t0))
}

/// Inverse of `a` modulo a prime `p`, in `[1, p-1]`.
pub fn mod_inverse(a: &BigInt, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return Err(Error::NotInvertible);
    }
    let (g, s, _) = ext_gcd(&a, &pb)?;
    if !g.is_one() {
        return Err(Error::NotInvertible);
    }
    let inv = s.mod_floor(&pb);
    Ok(u64::try_from(&inv).expect("residue fits"))
}
