//! Continued-fraction values over `F_{p^l}`: the expansion type, its two
//! serialized forms, validation, convergents, exact evaluation, fins and
//! the path view.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph;
use crate::interval::DecimalInterval;
use crate::modulus::Modulus;
use crate::rational::Rational;

/// One partial quotient `ε/a` with `ε = ±1` and `a >= 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CFTerm {
    pub eps: i8,
    pub a: BigInt,
}

impl CFTerm {
    pub fn new(eps: i8, a: impl Into<BigInt>) -> Self {
        debug_assert!(eps == 1 || eps == -1);
        CFTerm { eps, a: a.into() }
    }
}

impl fmt::Debug for CFTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.eps, self.a)
    }
}

/// Symbolic infinite continuation. `Plus` appends `(+1,2),(−1,2),(−1,2),…`
/// and `Minus` appends `(−1,2),(−1,2),…`; both stand for fins of value
/// `+1` and `−1` respectively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    None,
    Plus,
    Minus,
}

/// An `F_{p^l}`-continued fraction `1/(0+) N/(b+) ε₁/(a₁+) ⋯`, finite or
/// with a symbolic tail. `truncated` marks a prefix of an irrational
/// expansion cut off at a term budget.
#[derive(Clone, PartialEq, Eq)]
pub struct CFExpansion {
    modulus: Modulus,
    b: BigInt,
    terms: Vec<CFTerm>,
    tail: Tail,
    truncated: bool,
}

/// Kind of a path edge relative to the walk so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Changing,
    Retaining,
}

/// A vertex on the expansion's path together with the kind of the edge
/// that enters it (`None` for `∞` and for the first vertex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub vertex: Rational,
    pub edge: Option<EdgeKind>,
}

/// A violated validity rule, reported with its 1-based term index
/// (index 0 refers to the base term `b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "term {}: {}", self.index, self.rule)
    }
}

/// Exact value of an expansion.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    /// Bracket between the last two convergents of a truncated expansion.
    Bracket(DecimalInterval),
}

impl CFExpansion {
    /// Builds and canonicalizes. Trailing `(−1,2)` terms merge into a minus
    /// tail and a then-trailing `(+1,2)` turns a minus tail into a plus
    /// tail, so equal values get equal representations.
    pub fn new(
        modulus: Modulus,
        b: impl Into<BigInt>,
        terms: Vec<CFTerm>,
        tail: Tail,
    ) -> CFExpansion {
        let mut e = CFExpansion { modulus, b: b.into(), terms, tail, truncated: false };
        e.normalize();
        e
    }

    pub fn new_truncated(
        modulus: Modulus,
        b: impl Into<BigInt>,
        terms: Vec<CFTerm>,
    ) -> CFExpansion {
        CFExpansion { modulus, b: b.into(), terms, tail: Tail::None, truncated: true }
    }

    fn normalize(&mut self) {
        if self.tail == Tail::Minus {
            let minus_two = CFTerm::new(-1, 2);
            while self.terms.last() == Some(&minus_two) {
                self.terms.pop();
            }
            if self.terms.last() == Some(&CFTerm::new(1, 2)) {
                self.terms.pop();
                self.tail = Tail::Plus;
            }
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn base(&self) -> &BigInt {
        &self.b
    }

    pub fn terms(&self) -> &[CFTerm] {
        &self.terms
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_finite(&self) -> bool {
        self.tail == Tail::None
    }

    /// Term at 1-based index `i`, materializing tail terms on demand.
    pub fn term_at(&self, i: usize) -> Option<CFTerm> {
        debug_assert!(i >= 1);
        let n = self.terms.len();
        if i <= n {
            return Some(self.terms[i - 1].clone());
        }
        match self.tail {
            Tail::None => None,
            Tail::Minus => Some(CFTerm::new(-1, 2)),
            Tail::Plus => {
                if i == n + 1 {
                    Some(CFTerm::new(1, 2))
                } else {
                    Some(CFTerm::new(-1, 2))
                }
            }
        }
    }

    /// Count of `ε_i = +1` over stored terms with `i >= 2`, the quantity
    /// the maximum-+1 selection maximizes.
    pub fn plus_count_excluding_first(&self) -> usize {
        self.terms.iter().skip(1).filter(|t| t.eps == 1).count()
    }

    /// Checks every definition rule and reports each violation. Tail
    /// expansions are checked over the stored prefix plus the first few
    /// materialized tail terms.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = &self.modulus;
        if m.divides_p(&self.b) {
            out.push(Violation { index: 0, rule: format!("gcd(b, {}) != 1", m.p()) });
        }
        let check_len = match self.tail {
            Tail::None => self.terms.len(),
            _ => self.terms.len() + 3,
        };
        let (mut p_prev, mut p_cur) = (BigInt::one(), self.b.clone());
        let (mut q_prev, mut q_cur) = (BigInt::zero(), m.n().clone());
        for i in 1..=check_len {
            let t = match self.term_at(i) {
                Some(t) => t,
                None => break,
            };
            if t.eps != 1 && t.eps != -1 {
                out.push(Violation { index: i, rule: format!("eps = {} not in {{1, -1}}", t.eps) });
                break;
            }
            if t.a < BigInt::one() {
                out.push(Violation { index: i, rule: format!("a_{i} = {} < 1", t.a) });
            }
            if &t.a + t.eps < BigInt::one() {
                out.push(Violation { index: i, rule: format!("a_{i} + eps_{i} = {} < 1", &t.a + t.eps) });
            }
            if let Some(next) = self.term_at(i + 1) {
                if &t.a + next.eps < BigInt::one() {
                    out.push(Violation {
                        index: i,
                        rule: format!("a_{i} + eps_{} = {} < 1", i + 1, &t.a + next.eps),
                    });
                }
            }
            let p_next = &t.a * &p_cur + t.eps * &p_prev;
            let q_next = &t.a * &q_cur + t.eps * &q_prev;
            if m.divides_p(&p_next) {
                out.push(Violation { index: i, rule: format!("p divides convergent numerator {p_next}") });
            }
            if q_next <= q_cur {
                out.push(Violation {
                    index: i,
                    rule: format!("denominators not increasing: {q_next} after {q_cur}"),
                });
            }
            p_prev = std::mem::replace(&mut p_cur, p_next);
            q_prev = std::mem::replace(&mut q_cur, q_next);
        }
        out
    }

    /// First `count` convergents `P_0 = b/N, P_1, …` by the exact
    /// recurrence; tail terms are generated on demand.
    pub fn convergents(&self, count: usize) -> Result<Vec<Rational>> {
        if self.tail == Tail::None && count > self.terms.len() + 1 {
            return Err(Error::CountExceedsLength {
                len: self.terms.len() + 1,
                requested: count,
            });
        }
        let mut out = Vec::with_capacity(count);
        self.walk_convergents(|p, q| {
            out.push(Rational::new(p.clone(), q.clone()).expect("q > 0"));
            out.len() < count
        });
        Ok(out)
    }

    /// All convergents with denominator at most `v_max` (always a finite
    /// list: denominators increase strictly).
    pub fn convergents_up_to_den(&self, v_max: &BigInt) -> Vec<Rational> {
        let mut out = Vec::new();
        self.walk_convergents(|p, q| {
            if q > v_max {
                return false;
            }
            out.push(Rational::new(p.clone(), q.clone()).expect("q > 0"));
            true
        });
        out
    }

    /// Drives the convergent recurrence while `visit` keeps returning true.
    fn walk_convergents(&self, mut visit: impl FnMut(&BigInt, &BigInt) -> bool) {
        let (mut p_prev, mut p_cur) = (BigInt::one(), self.b.clone());
        let (mut q_prev, mut q_cur) = (BigInt::zero(), self.modulus.n().clone());
        if !visit(&p_cur, &q_cur) {
            return;
        }
        let mut i = 1usize;
        while let Some(t) = self.term_at(i) {
            let p_next = &t.a * &p_cur + t.eps * &p_prev;
            let q_next = &t.a * &q_cur + t.eps * &q_prev;
            p_prev = std::mem::replace(&mut p_cur, p_next);
            q_prev = std::mem::replace(&mut q_cur, q_next);
            if !visit(&p_cur, &q_cur) {
                return;
            }
            i += 1;
        }
    }

    /// Exact value: the last convergent for finite expansions, backward
    /// substitution from the tail fin (`±1`) for tailed ones, and a
    /// bracket of the last two convergents for truncated prefixes.
    pub fn evaluate(&self) -> Result<Value> {
        if self.truncated {
            let cs = self.convergents(self.terms.len() + 1)?;
            if cs.len() < 2 {
                return Err(Error::InvalidExpansion("truncated with no terms".into()));
            }
            let (a, b) = (&cs[cs.len() - 2], &cs[cs.len() - 1]);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            return Ok(Value::Bracket(DecimalInterval::new(lo.clone(), hi.clone())?));
        }
        let mut y = match self.tail {
            Tail::None => {
                let cs = self.convergents(self.terms.len() + 1)?;
                return Ok(Value::Exact(cs.last().expect("at least b/N").clone()));
            }
            Tail::Plus => Rational::from_integer(1),
            Tail::Minus => Rational::from_integer(-1),
        };
        for t in self.terms.iter().rev() {
            let denom = &Rational::from_integer(t.a.clone()) + &y;
            if denom.is_zero() {
                return Err(Error::InvalidExpansion(format!("fin blows up at term {t:?}")));
            }
            y = &Rational::new(t.eps, 1).expect("eps") / &denom;
        }
        // y = N·x − b
        let x = &(&y + &Rational::from_integer(self.b.clone()))
            / &Rational::from_integer(self.modulus.n().clone());
        Ok(Value::Exact(x))
    }

    /// The fin sequence `y_1 = N·x − b`, `y_{i+1} = 1/|y_i| − a_i`, checked
    /// against the stored signs. Finite expansions yield `terms + 1` fins
    /// ending in `0`; tailed ones include two tail fins (values `±1`).
    pub fn fins(&self, x: &Rational) -> Result<Vec<Rational>> {
        if x.is_infinite() {
            return Err(Error::Unsupported("fins of infinity".into()));
        }
        let count = match self.tail {
            Tail::None => self.terms.len() + 1,
            _ => self.terms.len() + 2,
        };
        let n = Rational::from_integer(self.modulus.n().clone());
        let b = Rational::from_integer(self.b.clone());
        let mut y = &(&n * x) - &b;
        let mut out = Vec::with_capacity(count);
        for i in 1..=count {
            if let Some(t) = self.term_at(i) {
                let sign_ok = if y.is_zero() {
                    false
                } else {
                    (t.eps == 1) == !y.is_negative()
                };
                if !sign_ok {
                    return Err(Error::SignMismatch { index: i });
                }
            } else if !y.is_zero() {
                return Err(Error::SignMismatch { index: i });
            }
            out.push(y.clone());
            if y.is_zero() {
                break;
            }
            if let Some(t) = self.term_at(i) {
                y = &y.abs().recip() - &Rational::from_integer(t.a.clone());
            }
        }
        Ok(out)
    }

    /// The well directed path `∞ → P_0 → ⋯`, each vertex labelled with the
    /// kind of the edge entering it. Tailed expansions report the stored
    /// prefix. Fails with `NotWellDirected` if the geometry disagrees with
    /// the stored signs or a forced direction change is missing.
    pub fn to_path(&self) -> Result<Vec<PathStep>> {
        let cs = self.convergents(self.terms.len() + 1)?;
        let mut steps = Vec::with_capacity(cs.len() + 1);
        steps.push(PathStep { vertex: Rational::infinity(), edge: None });
        steps.push(PathStep { vertex: cs[0].clone(), edge: None });
        for (i, t) in self.terms.iter().enumerate() {
            // Edge P_i -> P_{i+1}; previous vertex is P_{i-1} (∞ for i = 0).
            let prev = if i == 0 { Rational::infinity() } else { cs[i - 1].clone() };
            let cur = &cs[i];
            let next = &cs[i + 1];
            let between = (prev < *next && *next < *cur) || (*cur < *next && *next < prev);
            let kind = if between { EdgeKind::Changing } else { EdgeKind::Retaining };
            let expected = if t.eps == 1 { EdgeKind::Changing } else { EdgeKind::Retaining };
            if kind != expected {
                return Err(Error::NotWellDirected(format!(
                    "edge into {next} is {kind:?} but eps says {expected:?}"
                )));
            }
            steps.push(PathStep { vertex: next.clone(), edge: Some(kind) });
        }
        // Well-directedness: whenever P_{i-1} ~ P_{i+1}, the next edge must
        // change direction.
        for i in 0..cs.len().saturating_sub(2) {
            let prev = if i == 0 { Rational::infinity() } else { cs[i - 1].clone() };
            if graph::are_adjacent(&prev, &cs[i + 1], &self.modulus)?
                && steps[i + 3].edge != Some(EdgeKind::Changing)
            {
                return Err(Error::NotWellDirected(format!(
                    "shortcut at {} forces a direction change",
                    cs[i + 1]
                )));
            }
        }
        Ok(steps)
    }

    /// Bit-exact text form, e.g. `1/0+ 5/1+ 1/2+ 1/1+ 1/2` or
    /// `1/0+ 25/4+ tail:+`.
    pub fn to_text(&self) -> String {
        let mut parts = vec!["1/0".to_string(), format!("{}/{}", self.modulus.n(), self.b)];
        for t in &self.terms {
            parts.push(format!("{}/{}", t.eps, t.a));
        }
        match self.tail {
            Tail::None => {}
            Tail::Plus => parts.push("tail:+".to_string()),
            Tail::Minus => parts.push("tail:-".to_string()),
        }
        parts.join("+ ")
    }

    /// JSON form `{"p":…,"l":…,"b":…,"terms":[[e,a],…],"tail":"none"}`.
    /// Integers are emitted as arbitrary-precision JSON numbers;
    /// `"truncated":true` appears only on truncated prefixes.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|t| {
                serde_json::Value::Array(vec![
                    serde_json::Value::from(t.eps),
                    big_to_json(&t.a),
                ])
            })
            .collect();
        let mut obj = serde_json::json!({
            "p": self.modulus.p(),
            "l": self.modulus.l(),
            "b": big_to_json(&self.b),
            "terms": terms,
            "tail": match self.tail {
                Tail::None => "none",
                Tail::Plus => "plus",
                Tail::Minus => "minus",
            },
        });
        if self.truncated {
            obj["truncated"] = serde_json::Value::Bool(true);
        }
        obj
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CFExpansion> {
        let bad = |what: &str| Error::InvalidExpansion(format!("json: {what}"));
        let p = v["p"].as_u64().ok_or_else(|| bad("p"))?;
        let l = u32::try_from(v["l"].as_u64().ok_or_else(|| bad("l"))?)
            .map_err(|_| bad("l range"))?;
        let modulus = Modulus::new(p, l)?;
        let b = json_to_big(&v["b"]).ok_or_else(|| bad("b"))?;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term"))?;
            let eps = pair[0].as_i64().ok_or_else(|| bad("eps"))?;
            if eps != 1 && eps != -1 {
                return Err(bad("eps not ±1"));
            }
            let a = json_to_big(&pair[1]).ok_or_else(|| bad("a"))?;
            terms.push(CFTerm { eps: eps as i8, a });
        }
        let tail = match v["tail"].as_str() {
            Some("none") | None => Tail::None,
            Some("plus") => Tail::Plus,
            Some("minus") => Tail::Minus,
            Some(other) => return Err(bad(&format!("tail {other:?}"))),
        };
        let truncated = v["truncated"].as_bool().unwrap_or(false);
        let mut e = CFExpansion { modulus, b, terms, tail, truncated };
        e.normalize();
        Ok(e)
    }
}

pub(crate) fn big_to_json(b: &BigInt) -> serde_json::Value {
    let n: serde_json::Number =
        serde_json::from_str(&b.to_string()).expect("integer literal is a valid JSON number");
    serde_json::Value::Number(n)
}

pub(crate) fn json_to_big(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        _ => None,
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p={}, l={})", self.to_text(), self.modulus.p(), self.modulus.l())
    }
}

/// Deterministic order for expansion lists: by base term, then terms.
impl PartialOrd for CFExpansion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CFExpansion {
    fn cmp(&self, other: &Self) -> Ordering {
        self.b
            .cmp(&other.b)
            .then_with(|| self.terms.cmp(&other.terms))
            .then_with(|| (self.tail as u8).cmp(&(other.tail as u8)))
    }
}

impl FromStr for CFExpansion {
    type Err = Error;

    /// Parses the bit-exact text form. The leading `1/0` and the `N/b`
    /// element are mandatory; `N` must be a prime power.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::InvalidExpansion(format!("text: {what}"));
        let mut parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() < 2 {
            return Err(bad("too short"));
        }
        let mut tail = Tail::None;
        match *parts.last().unwrap() {
            "tail:+" => {
                tail = Tail::Plus;
                parts.pop();
            }
            "tail:-" => {
                tail = Tail::Minus;
                parts.pop();
            }
            _ => {}
        }
        let mut elems = Vec::with_capacity(parts.len());
        for (i, raw) in parts.iter().enumerate() {
            let is_last = i + 1 == parts.len() && tail == Tail::None;
            let trimmed = if is_last { raw } else {
                raw.strip_suffix('+').ok_or_else(|| bad("missing '+' separator"))?
            };
            elems.push(trimmed);
        }
        if elems[0] != "1/0" {
            return Err(bad("must start with 1/0"));
        }
        let (n_str, b_str) =
            elems[1].split_once('/').ok_or_else(|| bad("N/b element"))?;
        let n = BigInt::from_str(n_str).map_err(|_| bad("N"))?;
        let b = BigInt::from_str(b_str).map_err(|_| bad("b"))?;
        let (p, l) = prime_power(&n).ok_or_else(|| bad("N is not a prime power"))?;
        let modulus = Modulus::new(p, l)?;
        let mut terms = Vec::new();
        for e in &elems[2..] {
            let (eps_str, a_str) = e.split_once('/').ok_or_else(|| bad("term"))?;
            let eps = match eps_str {
                "1" => 1i8,
                "-1" => -1i8,
                _ => return Err(bad("eps")),
            };
            let a = BigInt::from_str(a_str).map_err(|_| bad("a"))?;
            terms.push(CFTerm { eps, a });
        }
        Ok(CFExpansion::new(modulus, b, terms, tail))
    }
}

/// `n = p^l` with `p` prime, if it is one.
pub fn prime_power(n: &BigInt) -> Option<(u64, u32)> {
    if n <= &BigInt::one() {
        return None;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= *n {
        if n.mod_floor(&p).is_zero() {
            let mut rest = n.clone();
            let mut l = 0u32;
            while rest.mod_floor(&p).is_zero() {
                rest /= &p;
                l += 1;
            }
            if rest.is_one() {
                return Some((u64::try_from(&p).ok()?, l));
            }
            return None;
        }
        p += 1u32;
    }
    u64::try_from(n).ok().map(|p| (p, 1))
}
