//! The maximum-+1 expansion algorithm and the two-expansion constructions
//! for the exceptional regimes.
//!
//! For a vertex or an irrational the expansion is unique and computed by
//! the floor/mod-p stepping rule. A half-point mediant has exactly two
//! one-term expansions. Every other rational `x` decomposes as
//! `x = R1 ⊕ R2`, and its two expansions are the canonical expansions of
//! the mediants `R_i ⊕ x` continued with the minus tail: the convergents
//! beyond the shared prefix then march along the value vector of `x`,
//! which reproduces the closed tail forms for the exceptional sets as
//! special cases.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::{CFExpansion, CFTerm, Tail};
use crate::graph::{self, Classification};
use crate::modulus::Modulus;
use crate::rational::Rational;
use crate::real::{Fin, RealValue};

/// Result of `expand_max_plus_one`: the classification that drove the
/// dispatch, the one or two expansions, and whether an irrational run hit
/// the term budget.
#[derive(Clone, Debug)]
pub struct ExpandOutcome {
    pub classification: Classification,
    pub expansions: Vec<CFExpansion>,
    pub truncated: bool,
}

/// Default term budget for irrational carriers.
pub const DEFAULT_MAX_TERMS: usize = 64;

/// The one or two maximum-+1 expansions of `x`.
///
/// Exact rationals dispatch on their regime; surds and intervals run the
/// stepping rule directly and truncate at `max_terms` (the budget does not
/// apply to exact vertices, whose expansions terminate on their own).
pub fn expand_max_plus_one(
    x: &RealValue,
    m: &Modulus,
    max_terms: usize,
) -> Result<ExpandOutcome> {
    match x {
        RealValue::Exact(r) => expand_exact(r, m),
        _ => {
            let (b, terms, truncated) = stepping_rule(&Fin::from_real(x), m, Some(max_terms))?;
            let e = if truncated {
                CFExpansion::new_truncated(m.clone(), b, terms)
            } else {
                CFExpansion::new(m.clone(), b, terms, Tail::None)
            };
            Ok(ExpandOutcome {
                classification: Classification::Irrational,
                expansions: vec![e],
                truncated,
            })
        }
    }
}

fn expand_exact(x: &Rational, m: &Modulus) -> Result<ExpandOutcome> {
    if x.is_infinite() {
        return Err(Error::Unsupported("expanding the vertex at infinity".into()));
    }
    let classification = graph::classify_rational(x, m)?;
    let expansions = match &classification {
        Classification::Vertex => {
            let (b, terms, _) = stepping_rule(&Fin::Exact(x.clone()), m, None)?;
            vec![CFExpansion::new(m.clone(), b, terms, Tail::None)]
        }
        Classification::MediantPoint { t } => vec![
            CFExpansion::new(m.clone(), t.clone(), vec![CFTerm::new(1, 2)], Tail::None),
            CFExpansion::new(m.clone(), t + 1u32, vec![CFTerm::new(-1, 2)], Tail::None),
        ],
        _ => two_expansions(x, m)?,
    };
    Ok(ExpandOutcome { classification, expansions, truncated: false })
}

/// Number of terms of the canonical expansion of `R1 ⊕ x`, minus one: the
/// distance of `R1` from `∞` along the maximum direction-changing path,
/// minus one. Zero for the whole exceptional set.
pub fn path_depth(x: &Rational, m: &Modulus) -> Result<usize> {
    let d = graph::decompose(x, m)?;
    let w = side_mediant(&d.r1, x, m)?;
    let (_, terms, _) = stepping_rule(&Fin::Exact(w), m, None)?;
    Ok(terms.len() - 1)
}

/// The two tailed expansions of a rational outside the vertex set.
/// The `R1`-side variant (ending in the longer last term) comes first,
/// matching the order the closed forms are usually written in.
fn two_expansions(x: &Rational, m: &Modulus) -> Result<Vec<CFExpansion>> {
    let d = graph::decompose(x, m)?;
    let mut out = Vec::with_capacity(2);
    for side in [&d.r1, &d.r2] {
        let w = side_mediant(side, x, m)?;
        let (b, terms, _) = stepping_rule(&Fin::Exact(w), m, None)?;
        out.push(CFExpansion::new(m.clone(), b, terms, Tail::Minus));
    }
    Ok(out)
}

/// `R ⊕ x` on raw components, with `x` written over denominator `N·s`.
/// Always a reduced vertex, and never a mediant point (its denominator
/// exceeds `2N`), so the stepping rule applies.
fn side_mediant(side: &Rational, x: &Rational, m: &Modulus) -> Result<Rational> {
    let (k, s) = graph::split_denominator(x, m);
    let x_num = x.num() * BigInt::from(m.p()).pow(m.l() - k);
    let num = side.num() + &x_num;
    let den = side.den() + m.n() * &s;
    let w = Rational::new(num.clone(), den.clone())?;
    debug_assert_eq!(w.num(), &num, "side mediant must be reduced");
    Ok(w)
}

/// Why a stepping run stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum StepStop {
    /// Fin reached zero; the expansion is complete.
    Finished,
    /// Term budget reached.
    Budget,
    /// The carrier could not decide the next step exactly. Every term
    /// already emitted is exact, and the next convergent denominator is
    /// at least `next_den_at_least`.
    Precision { next_den_at_least: BigInt, what: String },
}

struct SteppingRun {
    b: BigInt,
    terms: Vec<CFTerm>,
    stop: StepStop,
}

/// `(b, terms, truncated)` with precision failures surfaced as errors;
/// `budget = None` runs to termination (exact vertices only).
fn stepping_rule(
    x: &Fin,
    m: &Modulus,
    budget: Option<usize>,
) -> Result<(BigInt, Vec<CFTerm>, bool)> {
    let run = stepping_run(x, m, budget)?;
    match run.stop {
        StepStop::Finished => Ok((run.b, run.terms, false)),
        StepStop::Budget => Ok((run.b, run.terms, true)),
        StepStop::Precision { what, .. } => Err(Error::InsufficientPrecision(what)),
    }
}

/// The stepping rule: choose `b` by the four-case floor rule, then step
/// `y ← 1/|y| − a` with `a` the floor adjusted by the mod-`p` condition.
/// When `1/|y|` is an integer the expansion terminates with `a = 1/|y|`
/// (the alternative `a = 1/|y| − 1` only ever produces the excluded
/// trailing `+1/1`).
///
/// An undecidable step on an interval carrier stops the run rather than
/// erroring; the emitted prefix is exact and the stop records a proven
/// lower bound on the next convergent denominator, so callers that only
/// need convergents up to some bound can still conclude completeness.
fn stepping_run(x: &Fin, m: &Modulus, budget: Option<usize>) -> Result<SteppingRun> {
    let n = Rational::from_integer(m.n().clone());
    let fl = match x {
        Fin::Exact(r) => (&n * r).floor(),
        _ => {
            let scaled = x.mul_add(&n, &Rational::zero());
            scaled.floor_integral()?.0
        }
    };
    let b = choose_base(x, m, &fl)?;
    let mut y = x.mul_add(&n, &Rational::from_integer(-&b));
    let mut terms: Vec<CFTerm> = Vec::new();
    // residues of p_{i-2}, p_{i-1} mod p, and the convergent denominators
    let mut r_prev = 1u64 % m.p();
    let mut r_cur = m.residue(&b);
    let mut q_prev = BigInt::zero();
    let mut q_cur = m.n().clone();
    let finish = |terms: Vec<CFTerm>, stop: StepStop| Ok(SteppingRun { b: b.clone(), terms, stop });
    loop {
        if y.is_zero() {
            return finish(terms, StepStop::Finished);
        }
        if let Some(cap) = budget {
            if terms.len() >= cap {
                return finish(terms, StepStop::Budget);
            }
        }
        let eps = match y.sign() {
            Ok(s) => s,
            Err(Error::InsufficientPrecision(what)) => {
                // q strictly increases, so the next one is past q_cur
                let bound = &q_cur + 1u32;
                return finish(terms, StepStop::Precision { next_den_at_least: bound, what });
            }
            Err(e) => return Err(e),
        };
        debug_assert!(eps != 0);
        let r = y.recip_abs()?;
        let (floor, integral) = match r.floor_integral() {
            Ok(v) => v,
            Err(Error::InsufficientPrecision(what)) => {
                // a >= max(1, ⌊r⌋_lo) and eps >= -1 bound the next q
                let f_lo = r.floor_lower_bound().max(BigInt::one());
                let bound = (&f_lo * &q_cur - &q_prev).max(&q_cur + 1u32);
                return finish(terms, StepStop::Precision { next_den_at_least: bound, what });
            }
            Err(e) => return Err(e),
        };
        let a = if integral {
            floor
        } else if mod_valid(&floor, eps, r_prev, r_cur, m) {
            floor
        } else {
            &floor + 1u32
        };
        assert!(
            &a + eps >= BigInt::one() && (!terms.is_empty() || a >= BigInt::from(2)),
            "stepping rule produced an invalid term (a = {a}, eps = {eps})"
        );
        if let Some(last) = terms.last() {
            assert!(&last.a + eps >= BigInt::one(), "junction condition violated");
        }
        let r_next = (m.residue(&a) as u128 * r_cur as u128) as i128
            + eps as i128 * r_prev as i128;
        r_prev = r_cur;
        r_cur = r_next.rem_euclid(m.p() as i128) as u64;
        assert!(r_cur != 0, "convergent numerator divisible by p");
        let q_next = &a * &q_cur + eps * &q_prev;
        q_prev = std::mem::replace(&mut q_cur, q_next);
        terms.push(CFTerm::new(eps, a.clone()));
        if integral {
            return finish(terms, StepStop::Finished);
        }
        y = r.sub_int(&a);
    }
}

/// Irrational-carrier run that reports how it stopped instead of erroring
/// on precision exhaustion. Used by the approximation search, which can
/// prove completeness from the denominator bound alone.
pub(crate) fn expand_irrational_run(
    x: &RealValue,
    m: &Modulus,
    budget: usize,
) -> Result<(CFExpansion, StepStop)> {
    debug_assert!(!matches!(x, RealValue::Exact(_)));
    let run = stepping_run(&Fin::from_real(x), m, Some(budget))?;
    let e = match run.stop {
        StepStop::Finished => CFExpansion::new(m.clone(), run.b, run.terms, Tail::None),
        _ => CFExpansion::new_truncated(m.clone(), run.b, run.terms),
    };
    Ok((e, run.stop))
}

/// Outcome of the four-case base rule on an exact rational.
pub(crate) enum BaseChoice {
    Base(BigInt),
    /// `x` equals the mediant of its coprime flanks; both bases are valid.
    MediantTie,
}

/// The base rule for an exact finite rational, with the equality case
/// reported instead of rejected (the selector uses it as a tie-break).
pub(crate) fn base_rule_exact(x: &Rational, m: &Modulus) -> Result<BaseChoice> {
    match choose_base(&Fin::Exact(x.clone()), m, &(&Rational::from_integer(m.n().clone()) * x).floor()) {
        Ok(b) => Ok(BaseChoice::Base(b)),
        Err(Error::Unsupported(_)) => Ok(BaseChoice::MediantTie),
        Err(e) => Err(e),
    }
}

/// The four-case base rule. Equality with the flank mediant signals a
/// half-point, which callers dispatch before getting here.
fn choose_base(x: &Fin, m: &Modulus, fl: &BigInt) -> Result<BigInt> {
    let lo_coprime = !m.divides_p(fl);
    let hi_coprime = !m.divides_p(&(fl + 1u32));
    debug_assert!(lo_coprime || hi_coprime);
    if !hi_coprime {
        return Ok(fl.clone());
    }
    if !lo_coprime {
        return Ok(fl + 1u32);
    }
    let mediant = Rational::new(fl * 2u32 + 1u32, m.n() * 2u32)?;
    match x.cmp_rational(&mediant)? {
        std::cmp::Ordering::Less => Ok(fl.clone()),
        std::cmp::Ordering::Greater => Ok(fl + 1u32),
        std::cmp::Ordering::Equal => {
            Err(Error::Unsupported("stepping rule on a half-point mediant".into()))
        }
    }
}

/// `a·p_{i-1} ≢ −ε·p_{i-2} (mod p)`, the convergent-coprimality condition.
fn mod_valid(a: &BigInt, eps: i8, r_prev2: u64, r_prev1: u64, m: &Modulus) -> bool {
    let v = (m.residue(a) as i128 * r_prev1 as i128 + eps as i128 * r_prev2 as i128)
        .rem_euclid(m.p() as i128);
    v != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, l: u32) -> Modulus {
        Modulus::new(p, l).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn expand(x: &str, p: u64, l: u32) -> ExpandOutcome {
        let x: RealValue = x.parse().unwrap();
        expand_max_plus_one(&x, &m(p, l), DEFAULT_MAX_TERMS).unwrap()
    }

    fn texts(o: &ExpandOutcome) -> Vec<String> {
        o.expansions.iter().map(|e| e.to_text()).collect()
    }

    #[test]
    fn golden_vertex_11_40() {
        let o = expand("11/40", 5, 1);
        assert_eq!(o.classification, Classification::Vertex);
        assert_eq!(texts(&o), vec!["1/0+ 5/1+ 1/2+ 1/1+ 1/2"]);
    }

    #[test]
    fn golden_general_7_27() {
        let o = expand("7/27", 5, 1);
        assert_eq!(
            texts(&o),
            vec![
                "1/0+ 5/1+ 1/3+ 1/2+ 1/1+ 1/3+ tail:-",
                "1/0+ 5/1+ 1/3+ 1/2+ 1/1+ 1/1+ tail:+",
            ]
        );
        for e in &o.expansions {
            assert_eq!(
                e.evaluate().unwrap(),
                crate::expansion::Value::Exact(q("7/27"))
            );
        }
        assert_eq!(path_depth(&q("7/27"), &m(5, 1)).unwrap(), 3);
    }

    #[test]
    fn golden_bset_1_5_in_f25() {
        let o = expand("1/5", 5, 2);
        assert_eq!(o.classification, Classification::BSet { k: 1, half: false });
        assert_eq!(texts(&o), vec!["1/0+ 25/4+ tail:+", "1/0+ 25/6+ tail:-"]);
    }

    #[test]
    fn golden_half_point_3_10() {
        let o = expand("3/10", 5, 1);
        assert_eq!(texts(&o), vec!["1/0+ 5/1+ 1/2", "1/0+ 5/2+ -1/2"]);
    }

    #[test]
    fn golden_half_bset_1_2() {
        let o = expand("1/2", 5, 1);
        assert_eq!(o.classification, Classification::BSet { k: 0, half: true });
        assert_eq!(texts(&o), vec!["1/0+ 5/2+ 1/3+ tail:-", "1/0+ 5/3+ -1/3+ tail:-"]);
    }

    #[test]
    fn integers_and_p_multiples() {
        // 1 = 4/5 ⊕ 6/5 behaves like the exceptional set
        let o = expand("1", 5, 1);
        assert_eq!(texts(&o), vec!["1/0+ 5/4+ tail:+", "1/0+ 5/6+ tail:-"]);
        // 5 with p = 5: N·x = 25, both neighbors of 25 are coprime to 5
        let o = expand("5", 5, 1);
        assert_eq!(texts(&o), vec!["1/0+ 5/24+ tail:+", "1/0+ 5/26+ tail:-"]);
    }

    #[test]
    fn mediant_flank_decompositions() {
        // R1 = 3/10 is itself a half-point; the construction still yields
        // valid expansions whose common convergents give the best list
        let o = expand("2/7", 5, 1);
        assert_eq!(
            texts(&o),
            vec!["1/0+ 5/1+ 1/2+ 1/4+ tail:-", "1/0+ 5/1+ 1/2+ 1/2+ tail:+"]
        );
        let o = expand("4/13", 5, 1);
        assert_eq!(
            texts(&o),
            vec!["1/0+ 5/2+ -1/2+ 1/7+ tail:-", "1/0+ 5/2+ -1/2+ 1/5+ tail:+"]
        );
    }

    #[test]
    fn negative_vertex_mirrors() {
        let o = expand("-11/40", 5, 1);
        assert_eq!(texts(&o), vec!["1/0+ 5/-1+ -1/2+ 1/1+ 1/2"]);
        let e = &o.expansions[0];
        assert_eq!(
            e.evaluate().unwrap(),
            crate::expansion::Value::Exact(q("-11/40"))
        );
        assert!(e.validate().is_empty());
    }

    #[test]
    fn surd_expansion_brackets_value() {
        let x: RealValue = "quad:0,1,2,1".parse().unwrap();
        let o = expand_max_plus_one(&x, &m(5, 1), 10).unwrap();
        assert!(o.truncated);
        let e = &o.expansions[0];
        assert_eq!(e.terms().len(), 10);
        assert!(e.validate().is_empty());
        match e.evaluate().unwrap() {
            crate::expansion::Value::Bracket(iv) => {
                let sqrt2: crate::surd::QuadraticSurd =
                    match crate::surd::QuadraticSurd::sqrt_of(2).unwrap() {
                        crate::surd::Normalized::Surd(s) => s,
                        _ => unreachable!(),
                    };
                assert_eq!(sqrt2.cmp_rational(iv.lo()), std::cmp::Ordering::Greater);
                assert_eq!(sqrt2.cmp_rational(iv.hi()), std::cmp::Ordering::Less);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_over_pi_first_terms() {
        let x: RealValue = "dec:0.3183098861837906715377675267450287240689:1e-40"
            .parse()
            .unwrap();
        let o = expand_max_plus_one(&x, &m(5, 1), 8).unwrap();
        let e = &o.expansions[0];
        assert_eq!(e.base(), &BigInt::from(2));
        let prefix: Vec<(i8, i64)> = e
            .terms()
            .iter()
            .take(4)
            .map(|t| (t.eps, i64::try_from(&t.a).unwrap()))
            .collect();
        assert_eq!(prefix, vec![(-1, 2), (1, 2), (1, 5), (-1, 2)]);
    }

    #[test]
    fn expanding_infinity_is_rejected() {
        let x = RealValue::Exact(Rational::infinity());
        assert!(matches!(
            expand_max_plus_one(&x, &m(5, 1), 8),
            Err(Error::Unsupported(_))
        ));
    }
}
