//! Exact quadratic surds `(a + b√d)/c` as a carrier for inputs like `√2`.
//!
//! Sign, floor and comparison against rationals are decided exactly; no
//! floating point is involved anywhere.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `(a + b√d)/c` with `c > 0`, `gcd(a, b, c) = 1`, `d` square-free and
/// `b != 0` (rational values normalize away; see [`QuadraticSurd::new`]).
/// Equal values have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Outcome of normalizing surd coefficients: the value may collapse to a
/// rational (b = 0 or d a perfect square).
pub enum Normalized {
    Rational(Rational),
    Surd(QuadraticSurd),
}

impl QuadraticSurd {
    /// Normalize `(a + b√d)/c`. Requires `c != 0` and `d > 0`.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        d: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<Normalized> {
        let (mut a, mut b, mut c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(Error::InvalidLiteral("surd with zero denominator".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidLiteral("surd radicand must be positive".into()));
        }
        // Pull square factors out of d.
        let (square_free, scale) = square_free_part(&d);
        b *= scale;
        if square_free.is_one() {
            a += &b;
            b = BigInt::zero();
        }
        if b.is_zero() {
            return Ok(Normalized::Rational(Rational::new(a, c)?));
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        Ok(Normalized::Surd(QuadraticSurd { a: a / &g, b: b / &g, c: c / g, d: square_free }))
    }

    pub fn sqrt_of(d: impl Into<BigInt>) -> Result<Normalized> {
        Self::new(0, 1, d, 1)
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    fn build(a: BigInt, b: BigInt, c: BigInt, d: &BigInt) -> QuadraticSurd {
        match QuadraticSurd::new(a, b, d.clone(), c).expect("valid coefficients") {
            Normalized::Surd(s) => s,
            Normalized::Rational(_) => unreachable!("irrational closed under field ops"),
        }
    }

    /// `q·x + r` for rationals `q != 0`, `r`; stays irrational.
    pub fn mul_add_rational(&self, q: &Rational, r: &Rational) -> QuadraticSurd {
        assert!(!q.is_zero());
        // (qn/qd)·(a + b√d)/c + rn/rd = ((qn·rd·a + rn·qd·c) + qn·rd·b√d)/(qd·rd·c)
        let (qn, qd) = (q.num(), q.den());
        let (rn, rd) = (r.num(), r.den());
        QuadraticSurd::build(
            qn * rd * &self.a + rn * qd * &self.c,
            qn * rd * &self.b,
            qd * rd * &self.c,
            &self.d,
        )
    }

    pub fn sub_int(&self, n: &BigInt) -> QuadraticSurd {
        QuadraticSurd::build(&self.a - n * &self.c, self.b.clone(), self.c.clone(), &self.d)
    }

    pub fn neg(&self) -> QuadraticSurd {
        QuadraticSurd::build(-&self.a, -&self.b, self.c.clone(), &self.d)
    }

    pub fn abs(&self) -> QuadraticSurd {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `1/x`; the value is never zero.
    pub fn recip(&self) -> QuadraticSurd {
        // c/(a + b√d) = c(a - b√d)/(a² - b²d)
        let denom = &self.a * &self.a - &self.b * &self.b * &self.d;
        assert!(!denom.is_zero(), "surd is irrational, never zero");
        QuadraticSurd::build(&self.c * &self.a, -(&self.c * &self.b), denom, &self.d)
    }

    /// Exact sign of `a + b√d` over `c > 0`.
    pub fn sign(&self) -> i8 {
        let (sa, sb) = (sign_of(&self.a), sign_of(&self.b));
        match (sa, sb) {
            (0, s) | (s, 0) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                // Opposite signs: compare a² with b²·d.
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * &self.d;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => unreachable!("d square-free, value irrational"),
                }
            }
        }
    }

    /// Exact floor via an integer bracket on `b√d` plus one boundary check.
    pub fn floor(&self) -> BigInt {
        let b2d = (&self.b * &self.b) * &self.d;
        let root = b2d.sqrt(); // floor of |b|√d
        let numerator_low = if self.b.is_positive() {
            &self.a + &root
        } else {
            &self.a - &root - BigInt::one()
        };
        let candidate = numerator_low.div_floor(&self.c);
        let next = &candidate + BigInt::one();
        if self.cmp_int(&next) != Ordering::Less {
            next
        } else {
            candidate
        }
    }

    fn cmp_int(&self, n: &BigInt) -> Ordering {
        match self.sub_int(n).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Exact comparison with a finite rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        // x - r = ((a·rd - rn·c) + b·rd·√d)/(c·rd)
        let diff = QuadraticSurd::build(
            &self.a * r.den() - r.num() * &self.c,
            &self.b * r.den(),
            &self.c * r.den(),
            &self.d,
        );
        match diff.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => unreachable!("surd never equals a rational"),
        }
    }

    /// Exact comparison of two surds over the same radicand.
    pub fn cmp_same_field(&self, other: &QuadraticSurd) -> Result<Ordering> {
        if self.d != other.d {
            return Err(Error::Unsupported("comparing surds over different radicands".into()));
        }
        if self == other {
            return Ok(Ordering::Equal);
        }
        let a = &self.a * &other.c - &other.a * &self.c;
        let b = &self.b * &other.c - &other.b * &self.c;
        if b.is_zero() {
            return Ok(a.cmp(&BigInt::zero()));
        }
        let diff = QuadraticSurd::build(a, b, &self.c * &other.c, &self.d);
        Ok(match diff.sign() {
            1 => Ordering::Greater,
            _ => Ordering::Less,
        })
    }

    /// Decimal evaluation to `digits` places, as a rational `m/10^digits`
    /// enclosure `[lo, hi)` with `hi - lo = 10^-digits`. Used by tests as an
    /// independent comparison oracle.
    pub fn decimal_floor_scaled(&self, digits: u32) -> BigInt {
        let scale = BigInt::from(10).pow(digits);
        // floor( (a·10^k + b·√(d·10^{2k})) / c )
        let b2d = (&self.b * &self.b) * &self.d * &scale * &scale;
        let root = b2d.sqrt();
        let numerator_low = if self.b.is_positive() {
            &self.a * &scale + &root
        } else {
            &self.a * &scale - &root - BigInt::one()
        };
        let candidate = numerator_low.div_floor(&self.c);
        // boundary check against (candidate+1)/10^k
        let next = &candidate + BigInt::one();
        let next_rat = Rational::new(next.clone(), scale).expect("scale positive");
        if self.cmp_rational(&next_rat) != Ordering::Less {
            next
        } else {
            candidate
        }
    }
}

fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `(square_free, f)` with `d = square_free · f²`. Trial division; surd
/// radicands come from input literals and stay small.
fn square_free_part(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut scale = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let p2 = &p * &p;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            scale *= &p;
        }
        p += 1u32;
    }
    (rest, scale)
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quad:{},{},{},{}", self.a, self.b, self.d, self.c)
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√{})/{}", self.a, self.b, self.d, self.c)
    }
}
