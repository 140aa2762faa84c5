//! Best `X_{p^l}`-approximations, two ways: a brute-force oracle straight
//! from the definition, and the convergent characterization (common
//! convergents of the maximum-+1 expansions). `verify_equivalence` runs
//! both and compares.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expand::{self, ExpandOutcome};
use crate::expansion::big_to_json;
use crate::graph;
use crate::modulus::Modulus;
use crate::rational::Rational;
use crate::real::RealValue;
use crate::surd::QuadraticSurd;

/// Exact scalar a quality can be: rational (exact and interval-bound
/// cases) or a quadratic surd. Only same-kind values are ever compared.
#[derive(Clone, Debug, PartialEq)]
pub enum QualityValue {
    Rational(Rational),
    Surd(QuadraticSurd),
}

impl QualityValue {
    fn cmp(&self, other: &QualityValue) -> std::cmp::Ordering {
        match (self, other) {
            (QualityValue::Rational(a), QualityValue::Rational(b)) => a.cmp(b),
            (QualityValue::Surd(a), QualityValue::Surd(b)) => {
                a.cmp_same_field(b).expect("qualities share one radicand")
            }
            (QualityValue::Rational(a), QualityValue::Surd(b)) => {
                b.cmp_rational(a).reverse()
            }
            (QualityValue::Surd(a), QualityValue::Rational(b)) => a.cmp_rational(b),
        }
    }

    fn min(self, other: QualityValue) -> QualityValue {
        if self.cmp(&other) == std::cmp::Ordering::Greater {
            other
        } else {
            self
        }
    }
}

impl std::fmt::Display for QualityValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QualityValue::Rational(r) => write!(f, "{r}"),
            QualityValue::Surd(s) => write!(f, "{s}"),
        }
    }
}

/// `|v·x − u|` as an exact enclosure `[lo, hi]`; `lo == hi` for exact
/// carriers, a genuine interval for decimal-interval inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct Quality {
    pub lo: QualityValue,
    pub hi: QualityValue,
}

impl Quality {
    fn exact(v: QualityValue) -> Quality {
        Quality { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.lo, QualityValue::Rational(r) if r.is_zero()) && self.is_exact()
    }

    pub fn render(&self) -> String {
        if self.is_exact() {
            self.lo.to_string()
        } else {
            format!("{}..{}", self.lo, self.hi)
        }
    }
}

/// `|v·x − u|` for a vertex `u/v`.
pub fn quality_of(x: &RealValue, u: &BigInt, v: &BigInt) -> Quality {
    let vr = Rational::from_integer(v.clone());
    let neg_u = Rational::from_integer(-u.clone());
    match x {
        RealValue::Exact(r) => {
            let val = (&(&vr * r) + &neg_u).abs();
            Quality::exact(QualityValue::Rational(val))
        }
        RealValue::Surd(s) => {
            let val = s.mul_add_rational(&vr, &neg_u).abs();
            Quality::exact(QualityValue::Surd(val))
        }
        RealValue::Interval(i) => {
            let scaled = i.mul_add_rational(&vr, &neg_u);
            let (lo, hi) = abs_bounds(scaled.lo(), scaled.hi());
            Quality { lo: QualityValue::Rational(lo), hi: QualityValue::Rational(hi) }
        }
    }
}

fn abs_bounds(lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    if !lo.is_negative() {
        (lo.clone(), hi.clone())
    } else if hi.is_negative() || hi.is_zero() {
        (-hi, -lo)
    } else {
        let neg_lo = -lo;
        let top = if &neg_lo > hi { neg_lo } else { hi.clone() };
        (Rational::zero(), top)
    }
}

/// One best (or undecided) approximation `u/v` with its exact quality.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxRecord {
    pub frac: Rational,
    pub quality: Quality,
}

/// Output of the brute-force oracle. `undecided` is populated only for
/// interval inputs whose width cannot separate some candidate from the
/// running minimum; those candidates are carried rather than failing.
#[derive(Clone, Debug, Default)]
pub struct OracleBest {
    pub best: Vec<ApproxRecord>,
    pub undecided: Vec<ApproxRecord>,
}

/// The definition, executed literally: walk `v` over multiples of `N` up
/// to `v_max`; at each `v` the only viable numerators are `⌊v·x⌋` and
/// `⌈v·x⌉` (anything farther has quality above 1, beaten by the first
/// row); a candidate is emitted iff its quality strictly beats every
/// other vertex with `0 < v' <= v`, ties disqualifying.
pub fn brute_force_best(x: &RealValue, m: &Modulus, v_max: &BigInt) -> Result<OracleBest> {
    if !x.is_finite() {
        return Err(Error::Unsupported("best approximations of infinity".into()));
    }
    let mut out = OracleBest::default();
    // Running minima over all candidates seen so far (they are the only
    // vertices with quality below 1, so they alone can bind).
    let mut min_lo: Option<QualityValue> = None;
    let mut min_hi: Option<QualityValue> = None;
    let mut v = m.n().clone();
    while &v <= v_max {
        let fl = x.floor_scaled(&v)?;
        let mut candidates: Vec<(BigInt, Quality)> = Vec::new();
        let exact_hit = match x {
            RealValue::Exact(r) => (r.den() * &fl) == (r.num() * &v),
            _ => false,
        };
        let numerators: Vec<BigInt> =
            if exact_hit { vec![fl.clone()] } else { vec![fl.clone(), &fl + 1u32] };
        for u in numerators {
            if u.gcd(&v).is_one() {
                let q = quality_of(x, &u, &v);
                candidates.push((u, q));
            }
        }
        for (i, (u, q)) in candidates.iter().enumerate() {
            let sibling = candidates.get(1 - i).filter(|_| candidates.len() == 2);
            let beats_prior = match &min_lo {
                None => true,
                Some(bound) => q.hi.cmp(bound) == std::cmp::Ordering::Less,
            };
            let beats_sibling = match sibling {
                None => true,
                Some((_, sq)) => q.hi.cmp(&sq.lo) == std::cmp::Ordering::Less,
            };
            let beaten_by_prior = match &min_hi {
                None => false,
                Some(bound) => q.lo.cmp(bound) != std::cmp::Ordering::Less,
            };
            let beaten_by_sibling = match sibling {
                None => false,
                Some((_, sq)) => q.lo.cmp(&sq.hi) != std::cmp::Ordering::Less,
            };
            let record =
                ApproxRecord { frac: Rational::new(u.clone(), v.clone())?, quality: q.clone() };
            if beats_prior && beats_sibling {
                out.best.push(record);
            } else if !(beaten_by_prior || beaten_by_sibling) {
                out.undecided.push(record);
            }
        }
        for (_, q) in &candidates {
            min_lo = Some(match min_lo.take() {
                None => q.lo.clone(),
                Some(b) => b.min(q.lo.clone()),
            });
            min_hi = Some(match min_hi.take() {
                None => q.hi.clone(),
                Some(b) => b.min(q.hi.clone()),
            });
        }
        v += m.n();
    }
    Ok(out)
}

/// The convergent characterization: the best approximations of `x` up to
/// `v_max` are the convergents common to all (one or two) maximum-+1
/// expansions of `x`.
pub fn best_via_convergents(
    x: &RealValue,
    m: &Modulus,
    v_max: &BigInt,
) -> Result<Vec<ApproxRecord>> {
    let outcome = expansions_reaching(x, m, v_max)?;
    let lists: Vec<Vec<Rational>> = outcome
        .expansions
        .iter()
        .map(|e| e.convergents_up_to_den(v_max))
        .collect();
    let common: Vec<Rational> = match lists.len() {
        1 => lists.into_iter().next().unwrap(),
        _ => {
            let other: HashSet<Rational> = lists[1].iter().cloned().collect();
            lists[0].iter().filter(|c| other.contains(c)).cloned().collect()
        }
    };
    let records: Vec<ApproxRecord> = common
        .into_iter()
        .map(|frac| {
            let q = quality_of(x, frac.num(), frac.den());
            ApproxRecord { frac, quality: q }
        })
        .collect();
    debug_assert!(records.windows(2).all(|w| w[0].frac.den() < w[1].frac.den()));
    Ok(records)
}

/// Expansions of `x` with enough terms that every convergent up to
/// denominator `v_max` is materialized. Irrational carriers grow their
/// term budget until either the last convergent passes `v_max` or the
/// carrier's precision runs out with a proven bound showing the next
/// convergent would exceed `v_max` anyway.
fn expansions_reaching(x: &RealValue, m: &Modulus, v_max: &BigInt) -> Result<ExpandOutcome> {
    if matches!(x, RealValue::Exact(_)) {
        return expand::expand_max_plus_one(x, m, expand::DEFAULT_MAX_TERMS);
    }
    let mut budget = 8usize;
    loop {
        let (e, stop) = expand::expand_irrational_run(x, m, budget)?;
        let truncated = e.is_truncated();
        let last_den = e
            .convergents(e.terms().len() + 1)?
            .pop()
            .map(|c| c.den().clone())
            .expect("at least b/N");
        let complete = match &stop {
            expand::StepStop::Finished => true,
            expand::StepStop::Budget => &last_den > v_max,
            expand::StepStop::Precision { next_den_at_least, what } => {
                if &last_den > v_max || next_den_at_least > v_max {
                    true
                } else {
                    return Err(Error::InsufficientPrecision(what.clone()));
                }
            }
        };
        if complete {
            return Ok(ExpandOutcome {
                classification: crate::graph::Classification::Irrational,
                expansions: vec![e],
                truncated,
            });
        }
        budget *= 2;
    }
}

/// `u = α·p_{n+1} + β·p_n`, `v = α·q_{n+1} + β·q_n` solved exactly in the
/// convergent basis (the determinant is `±N`).
pub fn basis_decompose(
    uv: &Rational,
    p_n: &Rational,
    p_n1: &Rational,
    m: &Modulus,
) -> Result<(BigInt, BigInt)> {
    if !graph::is_vertex(uv, m) {
        return Err(Error::NotAVertex(uv.to_string()));
    }
    let det = p_n1.num() * p_n.den() - p_n.num() * p_n1.den();
    if det.abs() != *m.n() {
        return Err(Error::NotAdjacent(format!("{p_n}, {p_n1} are not consecutive convergents")));
    }
    let alpha_num = uv.num() * p_n.den() - uv.den() * p_n.num();
    let beta_num = uv.den() * p_n1.num() - uv.num() * p_n1.den();
    let (alpha, ra) = alpha_num.div_rem(&det);
    let (beta, rb) = beta_num.div_rem(&det);
    if !ra.is_zero() || !rb.is_zero() {
        return Err(Error::NonIntegral);
    }
    Ok((alpha, beta))
}

/// Which method(s) produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Oracle,
    Convergents,
    Both,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Convergents => "convergents",
            Method::Both => "both",
        }
    }
}

/// Report of a best-approximation run, serializable to the stable JSON
/// schema.
#[derive(Clone, Debug)]
pub struct BestApproxReport {
    pub x_text: String,
    pub modulus: Modulus,
    pub method: Method,
    pub v_max: BigInt,
    pub best: Vec<ApproxRecord>,
    /// Oracle candidates an interval input could not separate.
    pub undecided: Vec<ApproxRecord>,
    /// `Some` only when both methods ran.
    pub agreement: Option<bool>,
    /// Oracle-side list, included only on disagreement.
    pub oracle_best: Option<Vec<ApproxRecord>>,
}

impl BestApproxReport {
    pub fn to_json(&self) -> serde_json::Value {
        let records = |rs: &[ApproxRecord]| -> serde_json::Value {
            serde_json::Value::Array(
                rs.iter()
                    .map(|r| {
                        serde_json::json!({
                            "u": big_to_json(r.frac.num()),
                            "v": big_to_json(r.frac.den()),
                            "quality": r.quality.render(),
                        })
                    })
                    .collect(),
            )
        };
        let mut obj = serde_json::json!({
            "x": self.x_text,
            "p": self.modulus.p(),
            "l": self.modulus.l(),
            "method": self.method.as_str(),
            "v_max": big_to_json(&self.v_max),
            "best": records(&self.best),
        });
        if !self.undecided.is_empty() {
            obj["undecided"] = records(&self.undecided);
        }
        if let Some(a) = self.agreement {
            obj["agreement"] = serde_json::Value::Bool(a);
        }
        if let Some(ob) = &self.oracle_best {
            obj["oracle_best"] = records(ob);
        }
        obj
    }
}

/// Runs both methods and checks they produce the same list. For exact
/// vertex inputs with `v_max` at least the denominator, also asserts the
/// final record is `x` itself with quality zero.
pub fn verify_equivalence(
    x: &RealValue,
    m: &Modulus,
    v_max: &BigInt,
) -> Result<BestApproxReport> {
    let theorem = best_via_convergents(x, m, v_max)?;
    let oracle = brute_force_best(x, m, v_max)?;
    if !oracle.undecided.is_empty() {
        return Err(Error::InsufficientPrecision(
            "oracle could not rank every candidate; tighten the input interval".into(),
        ));
    }
    let fracs = |rs: &[ApproxRecord]| rs.iter().map(|r| r.frac.clone()).collect::<Vec<_>>();
    let mut agreement = fracs(&theorem) == fracs(&oracle.best);
    if let RealValue::Exact(r) = x {
        if graph::is_vertex(r, m) && !r.is_infinite() && r.den() <= v_max {
            let self_last = theorem
                .last()
                .map_or(false, |rec| &rec.frac == r && rec.quality.is_zero());
            agreement = agreement && self_last;
        }
    }
    Ok(BestApproxReport {
        x_text: x.to_string(),
        modulus: m.clone(),
        method: Method::Both,
        v_max: v_max.clone(),
        best: theorem,
        undecided: vec![],
        agreement: Some(agreement),
        oracle_best: if agreement { None } else { Some(oracle.best) },
    })
}

/// Default oracle bound guaranteeing completeness: `N·den(x)` for exact
/// inputs (no best approximation can have a larger denominator).
pub fn default_v_max(x: &RealValue, m: &Modulus) -> Option<BigInt> {
    match x {
        RealValue::Exact(r) if !r.is_infinite() => {
            let den = if r.den().is_one() { BigInt::one() } else { r.den().clone() };
            Some(m.n() * den)
        }
        _ => None,
    }
}

/// Convenience wrapper building a one-method report.
pub fn report_for(
    x: &RealValue,
    m: &Modulus,
    v_max: &BigInt,
    method: Method,
) -> Result<BestApproxReport> {
    match method {
        Method::Both => verify_equivalence(x, m, v_max),
        Method::Oracle => {
            let oracle = brute_force_best(x, m, v_max)?;
            Ok(BestApproxReport {
                x_text: x.to_string(),
                modulus: m.clone(),
                method,
                v_max: v_max.clone(),
                best: oracle.best,
                undecided: oracle.undecided,
                agreement: None,
                oracle_best: None,
            })
        }
        Method::Convergents => Ok(BestApproxReport {
            x_text: x.to_string(),
            modulus: m.clone(),
            method,
            v_max: v_max.clone(),
            best: best_via_convergents(x, m, v_max)?,
            undecided: vec![],
            agreement: None,
            oracle_best: None,
        }),
    }
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

    fn fracs(rs: &[ApproxRecord]) -> Vec<String> {
        rs.iter().map(|r| r.frac.to_string()).collect()
    }

    fn best_both(x: &str, p: u64, l: u32, v_max: i64) -> (Vec<String>, Vec<String>) {
        let x: RealValue = x.parse().unwrap();
        let v = BigInt::from(v_max);
        let oracle = brute_force_best(&x, &m(p, l), &v).unwrap();
        assert!(oracle.undecided.is_empty());
        let conv = best_via_convergents(&x, &m(p, l), &v).unwrap();
        (fracs(&oracle.best), fracs(&conv))
    }

    #[test]
    fn golden_11_40() {
        let (a, b) = best_both("11/40", 5, 1, 40);
        let want = ["1/5", "3/10", "4/15", "11/40"];
        assert_eq!(a, want);
        assert_eq!(b, want);
    }

    #[test]
    fn golden_7_27() {
        let (a, b) = best_both("7/27", 5, 1, 200);
        let want = ["1/5", "4/15", "9/35", "13/50"];
        assert_eq!(a, want);
        assert_eq!(b, want);
        // quality of the last record is 1/27
        let x: RealValue = "7/27".parse().unwrap();
        let conv = best_via_convergents(&x, &m(5, 1), &BigInt::from(200)).unwrap();
        assert_eq!(conv.last().unwrap().quality.render(), "1/27");
    }

    #[test]
    fn golden_no_best_cases() {
        let (a, b) = best_both("1/5", 5, 2, 500);
        assert!(a.is_empty() && b.is_empty());
        let (a, b) = best_both("3/10", 5, 1, 100);
        assert_eq!(a, ["3/10"]);
        assert_eq!(b, ["3/10"]);
    }

    #[test]
    fn one_over_pi_best_list() {
        let x: RealValue = "dec:0.3183098861837906715377675267450287240689:1e-40"
            .parse()
            .unwrap();
        let v = BigInt::from(355);
        let conv = best_via_convergents(&x, &m(5, 1), &v).unwrap();
        assert_eq!(fracs(&conv), ["2/5", "3/10", "8/25", "43/135", "78/245", "113/355"]);
        let rep = verify_equivalence(&x, &m(5, 1), &v).unwrap();
        assert_eq!(rep.agreement, Some(true));
    }

    #[test]
    fn short_interval_succeeds_to_its_proven_bound() {
        // 12 digits decide five terms exactly; past that, the lower bound
        // on the next denominator still proves the list complete at 355
        let x: RealValue = "dec:0.318309886184:1e-12".parse().unwrap();
        let conv = best_via_convergents(&x, &m(5, 1), &BigInt::from(355)).unwrap();
        assert_eq!(fracs(&conv), ["2/5", "3/10", "8/25", "43/135", "78/245", "113/355"]);
        let rep = verify_equivalence(&x, &m(5, 1), &BigInt::from(355)).unwrap();
        assert_eq!(rep.agreement, Some(true));
        // far past the precision horizon the failure is honest
        let deep = best_via_convergents(&x, &m(5, 1), &BigInt::from(100_000_000i64));
        assert!(matches!(deep, Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn sqrt2_verifies() {
        let x: RealValue = "quad:0,1,2,1".parse().unwrap();
        let rep = verify_equivalence(&x, &m(5, 1), &BigInt::from(2000)).unwrap();
        assert_eq!(rep.agreement, Some(true));
        assert!(!rep.best.is_empty());
    }

    #[test]
    fn near_miss_is_rejected_by_exact_tie() {
        // |25·(11/40) − 7| equals |15·(11/40) − 4|; the tie disqualifies 7/25.
        let x: RealValue = "11/40".parse().unwrap();
        let oracle = brute_force_best(&x, &m(5, 1), &BigInt::from(40)).unwrap();
        assert!(!oracle.best.iter().any(|r| r.frac == q("7/25")));
    }

    #[test]
    fn basis_decomposition() {
        let modulus = m(5, 1);
        // 7/25 = 11/40 ⊖ 4/15 against the consecutive pair (4/15, 11/40)
        let (alpha, beta) =
            basis_decompose(&q("7/25"), &q("4/15"), &q("11/40"), &modulus).unwrap();
        assert_eq!((&alpha, &beta), (&BigInt::one(), &BigInt::from(-1)));
        assert_eq!(&alpha * 11 + &beta * 4, BigInt::from(7));
        assert_eq!(&alpha * 40 + &beta * 15, BigInt::from(25));
        assert_eq!(
            basis_decompose(&q("11/40"), &q("4/15"), &q("11/40"), &modulus).unwrap(),
            (BigInt::one(), BigInt::zero())
        );
        assert_eq!(
            basis_decompose(&q("4/15"), &q("4/15"), &q("11/40"), &modulus).unwrap(),
            (BigInt::zero(), BigInt::one())
        );
        // every vertex solves integrally against genuine convergents; a
        // corrupt basis with determinant ±N but non-vertex entries does not
        assert!(matches!(
            basis_decompose(&q("1/5"), &q("1/2"), &q("3/1"), &modulus),
            Err(Error::NonIntegral)
        ));
        // skipping a convergent gives determinant ±2N and is rejected
        assert!(matches!(
            basis_decompose(&q("4/15"), &q("3/10"), &q("11/40"), &modulus),
            Err(Error::NotAdjacent(_))
        ));
    }

    #[test]
    fn report_json_shape() {
        let x: RealValue = "7/27".parse().unwrap();
        let rep = verify_equivalence(&x, &m(5, 1), &BigInt::from(200)).unwrap();
        let j = rep.to_json();
        assert_eq!(j["method"], "both");
        assert_eq!(j["agreement"], true);
        assert_eq!(j["best"].as_array().unwrap().len(), 4);
        assert_eq!(j["best"][3]["quality"], "1/27");
    }
}
