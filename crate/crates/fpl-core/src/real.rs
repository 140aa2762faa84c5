//! The tagged carrier for real inputs: exact rational, exact quadratic
//! surd, or a decimal interval with a stated error bound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::interval::DecimalInterval;
use crate::rational::Rational;
use crate::surd::{Normalized, QuadraticSurd};

#[derive(Clone, Debug, PartialEq)]
pub enum RealValue {
    Exact(Rational),
    Surd(QuadraticSurd),
    Interval(DecimalInterval),
}

impl RealValue {
    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            RealValue::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            RealValue::Exact(r) => !r.is_infinite(),
            _ => true,
        }
    }

    /// `⌊n·x⌋`, exact for rationals and surds; for intervals the common
    /// floor of both scaled endpoints.
    pub fn floor_scaled(&self, n: &BigInt) -> Result<BigInt> {
        let nr = Rational::from_integer(n.clone());
        match self {
            RealValue::Exact(r) => {
                if r.is_infinite() {
                    return Err(Error::Unsupported("floor of infinity".into()));
                }
                Ok((&nr * r).floor())
            }
            RealValue::Surd(s) => Ok(s.mul_add_rational(&nr, &Rational::zero()).floor()),
            RealValue::Interval(i) => i.mul_add_rational(&nr, &Rational::zero()).floor(),
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Exact(r) => write!(f, "{r}"),
            RealValue::Surd(s) => write!(f, "{s}"),
            RealValue::Interval(i) => write!(f, "{i}"),
        }
    }
}

impl FromStr for RealValue {
    type Err = Error;

    /// Input literals:
    /// - `num/den` or `num` — exact rational (`1/0` is infinity);
    /// - `quad:a,b,d,c` — the surd `(a + b·√d)/c`;
    /// - `dec:<decimal>:<error>` — the interval `[v - e, v + e]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("quad:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::InvalidLiteral(s.to_string()));
            }
            let mut nums = Vec::with_capacity(4);
            for p in &parts {
                nums.push(
                    BigInt::from_str(p.trim())
                        .map_err(|_| Error::InvalidLiteral(s.to_string()))?,
                );
            }
            let (a, b, d, c) =
                (nums[0].clone(), nums[1].clone(), nums[2].clone(), nums[3].clone());
            return Ok(match QuadraticSurd::new(a, b, d, c)? {
                Normalized::Surd(q) => RealValue::Surd(q),
                Normalized::Rational(r) => RealValue::Exact(r),
            });
        }
        if let Some(rest) = s.strip_prefix("dec:") {
            let (value, err) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::InvalidLiteral(s.to_string()))?;
            let v = parse_decimal(value)?;
            let e = parse_decimal(err)?;
            if !e.num().is_positive() {
                return Err(Error::InvalidLiteral("error bound must be positive".into()));
            }
            return Ok(RealValue::Interval(DecimalInterval::new(&v - &e, &v + &e)?));
        }
        Ok(RealValue::Exact(s.parse()?))
    }
}

/// Parse a plain or scientific decimal (`-0.25`, `3`, `1e-40`, `2.5e3`)
/// into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidLiteral(s.to_string());
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    if !joined.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num = BigInt::from_str(&joined).map_err(|_| bad())? * sign;
    let mut den = BigInt::one();
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if shift >= 0 {
        num *= ten.pow(shift as u32);
    } else {
        den = ten.pow((-shift) as u32);
    }
    Rational::new(num, den)
}

/// Internal carrier for the fin recurrence. Wraps the three input kinds
/// behind the handful of exact queries the expansion loop needs.
#[derive(Clone, Debug)]
pub(crate) enum Fin {
    Exact(Rational),
    Surd(QuadraticSurd),
    Interval(DecimalInterval),
}

impl Fin {
    pub fn from_real(x: &RealValue) -> Fin {
        match x {
            RealValue::Exact(r) => Fin::Exact(r.clone()),
            RealValue::Surd(s) => Fin::Surd(s.clone()),
            RealValue::Interval(i) => Fin::Interval(i.clone()),
        }
    }

    /// `q·x + r` for exact rationals `q != 0`, `r`.
    pub fn mul_add(&self, q: &Rational, r: &Rational) -> Fin {
        match self {
            Fin::Exact(v) => Fin::Exact(&(q * v) + r),
            Fin::Surd(s) => Fin::Surd(s.mul_add_rational(q, r)),
            Fin::Interval(i) => Fin::Interval(i.mul_add_rational(q, r)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Fin::Exact(r) if r.is_zero())
    }

    pub fn sign(&self) -> Result<i8> {
        match self {
            Fin::Exact(r) => Ok(if r.is_zero() {
                0
            } else if r.is_negative() {
                -1
            } else {
                1
            }),
            Fin::Surd(s) => Ok(s.sign()),
            Fin::Interval(i) => i.sign(),
        }
    }

    /// `1/|x|` for non-zero `x`.
    pub fn recip_abs(&self) -> Result<Fin> {
        Ok(match self {
            Fin::Exact(r) => Fin::Exact(r.abs().recip()),
            Fin::Surd(s) => Fin::Surd(s.abs().recip()),
            Fin::Interval(i) => Fin::Interval(i.abs()?.recip()?),
        })
    }

    /// `(floor, exactly_integral)`; errors when an interval cannot rule an
    /// integer boundary out.
    pub fn floor_integral(&self) -> Result<(BigInt, bool)> {
        match self {
            Fin::Exact(r) => Ok((r.floor(), r.is_integer())),
            Fin::Surd(s) => Ok((s.floor(), false)),
            Fin::Interval(i) => {
                if i.straddles_integer() {
                    Err(Error::InsufficientPrecision("fin at an integer boundary".into()))
                } else {
                    Ok((i.floor()?, false))
                }
            }
        }
    }

    /// A lower bound on `⌊self⌋` that never fails (the interval's low end).
    pub fn floor_lower_bound(&self) -> BigInt {
        match self {
            Fin::Exact(r) => r.floor(),
            Fin::Surd(s) => s.floor(),
            Fin::Interval(i) => i.lo().floor(),
        }
    }

    pub fn sub_int(&self, n: &BigInt) -> Fin {
        match self {
            Fin::Exact(r) => Fin::Exact(r - &Rational::from_integer(n.clone())),
            Fin::Surd(s) => Fin::Surd(s.sub_int(n)),
            Fin::Interval(i) => Fin::Interval(i.sub_int(n)),
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Result<Ordering> {
        match self {
            Fin::Exact(v) => Ok(v.cmp(r)),
            Fin::Surd(s) => Ok(s.cmp_rational(r)),
            Fin::Interval(i) => i.cmp_rational(r),
        }
    }

}
