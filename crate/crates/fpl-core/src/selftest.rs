//! Seeded cross-module property suite, exposed so the command line can
//! run it (`fuzz` subcommand) and tests can reuse it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approx;
use crate::error::Result;
use crate::expand;
use crate::expansion::{CFExpansion, CFTerm, Tail, Value};
use crate::graph::{self, Classification};
use crate::modulus::Modulus;
use crate::rational::Rational;
use crate::real::RealValue;

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Informational lines (e.g. the self-test's caught violation).
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond && self.failures.len() < 32 {
            self.failures.push(msg());
        }
    }
}

/// Runs `trials` random rationals through the expansion, classification
/// and approximation invariants. Deterministic for a given seed.
///
/// `self_test` first feeds a deliberately corrupted expansion to the
/// validator and reports a failure if it is NOT flagged.
pub fn run_suite(
    m: &Modulus,
    seed: u64,
    trials: usize,
    den_bound: u64,
    self_test: bool,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();

    if self_test {
        let corrupt =
            CFExpansion::new(m.clone(), 1, vec![CFTerm::new(1, 1), CFTerm::new(-1, 2)], Tail::None);
        let violations = corrupt.validate();
        report.check(
            violations.iter().any(|v| v.index == 1),
            || "validator missed an injected violation at index 1".into(),
        );
        if let Some(v) = violations.first() {
            report.notes.push(format!("self-test: injected violation caught: {v}"));
        }
    }

    for _ in 0..trials {
        report.trials += 1;
        let den = rng.gen_range(1..=den_bound);
        let num_bound = 3 * den as i64;
        let num = rng.gen_range(-num_bound..=num_bound);
        let x = Rational::new(num, den as i64).expect("den > 0");
        check_one(m, &x, &mut report);
        if !report.failures.is_empty() && report.failures.len() >= 32 {
            break;
        }
    }
    Ok(report)
}

fn check_one(m: &Modulus, x: &Rational, report: &mut SuiteReport) {
    let xv = RealValue::Exact(x.clone());
    let outcome = match expand::expand_max_plus_one(&xv, m, 0) {
        Ok(o) => o,
        Err(e) => {
            report.check(false, || format!("expand({x}) failed: {e}"));
            return;
        }
    };
    let is_vertex = graph::is_vertex(x, m);
    let expected_count = match outcome.classification {
        Classification::Vertex => 1,
        _ => 2,
    };
    report.check(outcome.expansions.len() == expected_count, || {
        format!("expand({x}): {} expansions", outcome.expansions.len())
    });

    for e in &outcome.expansions {
        let violations = e.validate();
        report.check(violations.is_empty(), || format!("validate({e}): {violations:?}"));
        match e.evaluate() {
            Ok(Value::Exact(v)) => {
                report.check(&v == x, || format!("evaluate({e}) = {v} != {x}"));
            }
            other => report.check(false, || format!("evaluate({e}) -> {other:?}")),
        }
        // convergent structure over the stored prefix plus a tail window
        let count = e.terms().len() + if e.is_finite() { 1 } else { 8 };
        let cs = e.convergents(count).expect("count within range");
        let mut prev = (BigInt::one(), BigInt::from(0));
        for c in &cs {
            let det = c.num() * &prev.1 - &prev.0 * c.den();
            report.check(det.abs() == *m.n(), || format!("det {det} at {c} in {e}"));
            report.check(c.den() > &prev.1, || format!("q not increasing at {c} in {e}"));
            report.check(c.den().mod_floor(m.n()).is_zero(), || {
                format!("N does not divide {} in {e}", c.den())
            });
            report.check(!m.divides_p(c.num()), || format!("p | {} in {e}", c.num()));
            prev = (c.num().clone(), c.den().clone());
        }
        // fins: |y| <= 1, strict inequality for vertices
        if let Ok(fins) = e.fins(x) {
            let one = Rational::from_integer(1);
            for y in &fins {
                let a = y.abs();
                report.check(a <= one, || format!("|fin| > 1 in {e}"));
                if is_vertex {
                    report.check(a < one, || format!("|fin| = 1 on vertex {x}"));
                }
            }
        } else {
            report.check(false, || format!("fins({e}, {x}) failed"));
        }
    }

    // oracle equivalence at the completeness bound
    let v_max = match approx::default_v_max(&xv, m) {
        Some(v) => v,
        None => return,
    };
    let oracle = match approx::brute_force_best(&xv, m, &v_max) {
        Ok(o) => o,
        Err(e) => {
            report.check(false, || format!("oracle({x}) failed: {e}"));
            return;
        }
    };
    let theorem = match approx::best_via_convergents(&xv, m, &v_max) {
        Ok(t) => t,
        Err(e) => {
            report.check(false, || format!("convergent method({x}) failed: {e}"));
            return;
        }
    };
    let a: Vec<_> = oracle.best.iter().map(|r| r.frac.clone()).collect();
    let b: Vec<_> = theorem.iter().map(|r| r.frac.clone()).collect();
    report.check(a == b, || format!("best mismatch for {x}: oracle {a:?} vs convergents {b:?}"));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_green_and_deterministic() {
        let m = Modulus::new(5, 1).unwrap();
        let a = run_suite(&m, 42, 60, 120, false).unwrap();
        assert!(a.ok(), "{:?}", a.failures);
        let b = run_suite(&m, 42, 60, 120, false).unwrap();
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.checks, b.checks);
    }

    #[test]
    fn self_test_flags_injected_corruption() {
        let m = Modulus::new(5, 1).unwrap();
        let r = run_suite(&m, 1, 5, 40, true).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert!(r.notes.iter().any(|f| f.contains("injected violation caught")));
    }
}
