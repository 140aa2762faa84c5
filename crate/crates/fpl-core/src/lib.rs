//! Exact arithmetic for `F_{p^l}`-continued fractions.
//!
//! The vertex set `X_{p^l}` consists of the reduced fractions whose
//! denominator is a positive multiple of `N = p^l`, together with `∞ = 1/0`.
//! Two vertices `p/q`, `r/s` are joined in the graph `F_{p^l}` exactly when
//! `|r·q − s·p| = N`. Every real number has a continued-fraction expansion
//! over this graph of the shape
//!
//! ```text
//! 1/(0+) N/(b+) ε₁/(a₁+) ε₂/(a₂+) ⋯
//! ```
//!
//! and the expansions with the maximum number of positive partial
//! numerators characterize the best `X_{p^l}`-approximations of the value.
//! This crate computes those expansions exactly (for rationals, quadratic
//! surds and decimal intervals), enumerates all expansions of a vertex,
//! decomposes rationals outside the vertex set into their unique adjacent
//! mediant pair, and cross-checks the convergent characterization of best
//! approximations against a brute-force oracle.

mod error;
mod interval;
mod modulus;
mod rational;
mod real;
mod surd;

pub mod approx;
pub mod enumerate;
pub mod expand;
pub mod expansion;
pub mod graph;
pub mod selftest;

pub use error::{Error, Result};
pub use interval::DecimalInterval;
pub use modulus::{is_prime_u64, Modulus};
pub use rational::{ext_gcd, farey_diff, farey_sum, iterated_mediant, mod_inverse, RawFrac, Rational};
pub use real::{parse_decimal, RealValue};
pub use surd::{Normalized, QuadraticSurd};
