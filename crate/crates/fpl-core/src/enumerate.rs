//! Exhaustive enumeration of the expansions of a vertex, and the
//! maximum-+1 selection. The enumeration is the ground-truth oracle for
//! the stepping rule.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::{CFExpansion, CFTerm, Tail};
use crate::graph;
use crate::modulus::Modulus;
use crate::rational::Rational;

/// Every valid finite expansion of the vertex `x`, in a deterministic
/// order (base term ascending, then terms lexicographically).
///
/// Depth-first search over the fin recurrence: at each step the partial
/// quotient can only be `⌊1/|y|⌋` or `⌊1/|y|⌋ + 1` (the fin bound), a fin
/// of `0` terminates, `−1` can never terminate, and `+1` forces a final
/// `+1/1`. Denominators increase strictly toward `den(x)`, so the search
/// is finite.
pub fn enumerate_all_expansions(x: &Rational, m: &Modulus) -> Result<Vec<CFExpansion>> {
    if x.is_infinite() {
        return Err(Error::Unsupported("enumerating expansions of infinity".into()));
    }
    if !graph::is_vertex(x, m) {
        return Err(Error::NotInX(x.to_string()));
    }
    let n = Rational::from_integer(m.n().clone());
    let nx = &n * x;
    let fl = nx.floor();
    let mut out = Vec::new();
    for delta in -1i32..=1 {
        let b = &fl + delta;
        let diff = &nx - &Rational::from_integer(b.clone());
        if diff.abs() > Rational::from_integer(1) || m.divides_p(&b) {
            continue;
        }
        let mut frame = Frame {
            y: diff,
            p_prev: BigInt::one(),
            p_cur: b.clone(),
            q_prev: BigInt::zero(),
            q_cur: m.n().clone(),
            terms: Vec::new(),
        };
        dfs(m, &b, &mut frame, &mut out);
    }
    out.sort();
    Ok(out)
}

struct Frame {
    y: Rational,
    p_prev: BigInt,
    p_cur: BigInt,
    q_prev: BigInt,
    q_cur: BigInt,
    terms: Vec<CFTerm>,
}

fn dfs(m: &Modulus, b: &BigInt, frame: &mut Frame, out: &mut Vec<CFExpansion>) {
    if frame.y.is_zero() {
        out.push(CFExpansion::new(m.clone(), b.clone(), frame.terms.clone(), Tail::None));
        return;
    }
    let eps: i8 = if frame.y.is_negative() { -1 } else { 1 };
    let one = Rational::from_integer(1);
    if frame.y == -&one {
        return; // a minus-one fin can never reach zero
    }
    let r = frame.y.abs().recip();
    let candidates: Vec<BigInt> = if frame.y == one {
        vec![BigInt::one()]
    } else if r.is_integer() {
        let v = r.num().clone();
        vec![&v - 1u32, v]
    } else {
        let f = r.floor();
        vec![f.clone(), f + 1u32]
    };
    for a in candidates {
        if a < BigInt::one() || &a + eps < BigInt::one() {
            continue;
        }
        if let Some(last) = frame.terms.last() {
            if &last.a + eps < BigInt::one() {
                continue;
            }
        }
        let p_next = &a * &frame.p_cur + eps * &frame.p_prev;
        let q_next = &a * &frame.q_cur + eps * &frame.q_prev;
        if q_next <= frame.q_cur || m.divides_p(&p_next) {
            continue;
        }
        let y_next = &r - &Rational::from_integer(a.clone());
        frame.terms.push(CFTerm::new(eps, a));
        let saved = (
            std::mem::replace(&mut frame.y, y_next),
            frame.p_prev.clone(),
            frame.q_prev.clone(),
        );
        frame.p_prev = std::mem::replace(&mut frame.p_cur, p_next);
        frame.q_prev = std::mem::replace(&mut frame.q_cur, q_next);
        dfs(m, b, frame, out);
        frame.p_cur = std::mem::replace(&mut frame.p_prev, saved.1);
        frame.q_cur = std::mem::replace(&mut frame.q_prev, saved.2);
        frame.y = saved.0;
        frame.terms.pop();
    }
}

/// Drops expansions ending in `+1/1`, then keeps those with the maximum
/// count of positive partial numerators `ε_i`, `i >= 2`.
///
/// Two expansions can tie on that count when the path one step past the
/// base vertex already reaches the value (e.g. `4/15` over `F_5` via
/// `1/5` or via `2/5 → 3/10`). The tie resolves to the base-rule side,
/// which is where the well directed path with maximum direction changing
/// edges lives; a genuine half-point mediant has no base-rule side and
/// keeps both.
pub fn select_max_plus_one(expansions: &[CFExpansion]) -> Result<Vec<CFExpansion>> {
    let kept: Vec<&CFExpansion> = expansions
        .iter()
        .filter(|e| e.terms().last() != Some(&CFTerm::new(1, 1)))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyAfterFilter);
    }
    let best = kept.iter().map(|e| e.plus_count_excluding_first()).max().unwrap();
    let tied: Vec<CFExpansion> = kept
        .into_iter()
        .filter(|e| e.plus_count_excluding_first() == best)
        .cloned()
        .collect();
    if tied.len() <= 1 {
        return Ok(tied);
    }
    let value = match tied[0].evaluate()? {
        crate::expansion::Value::Exact(v) => v,
        other => return Err(Error::InvalidExpansion(format!("selector on {other:?}"))),
    };
    match crate::expand::base_rule_exact(&value, tied[0].modulus())? {
        crate::expand::BaseChoice::MediantTie => Ok(tied),
        crate::expand::BaseChoice::Base(b) => {
            let out: Vec<CFExpansion> =
                tied.into_iter().filter(|e| e.base() == &b).collect();
            if out.is_empty() {
                return Err(Error::EmptyAfterFilter);
            }
            Ok(out)
        }
    }
}
