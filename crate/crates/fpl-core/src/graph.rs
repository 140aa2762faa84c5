//! The graph `F_{p^l}`: vertex membership, adjacency, regime
//! classification of real inputs, and the mediant decomposition of
//! rationals outside the vertex set.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expand;
use crate::modulus::Modulus;
use crate::rational::{ext_gcd, Rational};
use crate::real::RealValue;

/// Which regime a real input falls in, with the regime-specific data the
/// expansion and approximation machinery needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Member of `X_{p^l}` that is not a half-point mediant.
    Vertex,
    /// Vertex equal to `t/N ⊕ (t+1)/N` with both flanks coprime to `p`;
    /// carries `t`. Only possible for odd `p`.
    MediantPoint { t: BigInt },
    /// Denominator `p^k` or `2·p^k` with `k < l`: the exceptional set with
    /// no best approximations. `half` distinguishes the `2·p^k` case.
    BSet { k: u32, half: bool },
    /// Any other rational outside the vertex set; carries the unique
    /// adjacent pair `R1 ⊕ R2 = x` with `s1 <= s2` and the path depth `N_x`.
    GeneralRational {
        r1: Rational,
        r2: Rational,
        s1: BigInt,
        s2: BigInt,
        nx: usize,
    },
    Irrational,
}

/// The mediant pair of a rational outside the vertex set.
///
/// For denominators `p^k·s` with `s >= 2` the pair is adjacent and unique.
/// For `s = 1` (the `(1/p^k)·Z` case) the returned flanks
/// `(N·x − 1)/N, (N·x + 1)/N` still sum to `x` on raw components but are
/// not adjacent, which `adjacent: false` records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub r1: Rational,
    pub r2: Rational,
    pub adjacent: bool,
    /// p-adic valuation of the denominator (`0 <= k < l`).
    pub k: u32,
    /// p-free part of the denominator.
    pub s: BigInt,
    pub s1: BigInt,
    pub s2: BigInt,
}

pub fn is_vertex(x: &Rational, m: &Modulus) -> bool {
    x.is_infinite() || x.den().mod_floor(m.n()).is_zero()
}

/// Adjacency via the cross determinant `|r·q − s·p| = N`, with `∞ = 1/0`
/// plugged into the same formula.
pub fn are_adjacent(a: &Rational, b: &Rational, m: &Modulus) -> Result<bool> {
    for v in [a, b] {
        if !is_vertex(v, m) {
            return Err(Error::NotAVertex(v.to_string()));
        }
    }
    let det = a.num() * b.den() - b.num() * a.den();
    Ok(det.abs() == *m.n())
}

/// Split the denominator of a non-vertex rational as `p^k · s` with `p ∤ s`.
pub(crate) fn split_denominator(x: &Rational, m: &Modulus) -> (u32, BigInt) {
    let mut s = x.den().clone();
    let p = BigInt::from(m.p());
    let mut k = 0u32;
    loop {
        let (q, r) = s.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        s = q;
        k += 1;
    }
    (k, s)
}

/// The half-point test: a vertex `x` is a mediant point when its reduced
/// denominator is `2N` and both `⌊N·x⌋` and `⌊N·x⌋ + 1` are coprime to `p`.
pub(crate) fn mediant_point_t(x: &Rational, m: &Modulus) -> Option<BigInt> {
    if m.p() == 2 || x.is_infinite() {
        return None;
    }
    if x.den() != &(m.n() * 2u32) {
        return None;
    }
    let t = (x.num() * m.n()).div_floor(x.den());
    if m.divides_p(&t) || m.divides_p(&(&t + 1u32)) {
        return None;
    }
    Some(t)
}

/// Exact classification of a rational.
pub fn classify_rational(x: &Rational, m: &Modulus) -> Result<Classification> {
    if is_vertex(x, m) {
        return Ok(match mediant_point_t(x, m) {
            Some(t) => Classification::MediantPoint { t },
            None => Classification::Vertex,
        });
    }
    let (k, s) = split_denominator(x, m);
    debug_assert!(k < m.l());
    if s.is_one() {
        return Ok(Classification::BSet { k, half: false });
    }
    if s == BigInt::from(2) {
        return Ok(Classification::BSet { k, half: true });
    }
    let d = decompose(x, m)?;
    let nx = expand::path_depth(x, m)?;
    Ok(Classification::GeneralRational { r1: d.r1, r2: d.r2, s1: d.s1, s2: d.s2, nx })
}

/// Classification of any supported carrier. Surds are quadratic
/// irrationals by construction. An interval is reported `Irrational` only
/// when it provably contains no rational of denominator at most
/// `rational_bound`; otherwise the regime is undecidable.
pub fn classify(x: &RealValue, m: &Modulus, rational_bound: u64) -> Result<Classification> {
    match x {
        RealValue::Exact(r) => classify_rational(r, m),
        RealValue::Surd(_) => Ok(Classification::Irrational),
        RealValue::Interval(i) => {
            if i.excludes_denominators_up_to(rational_bound) {
                Ok(Classification::Irrational)
            } else {
                Err(Error::InsufficientPrecision(format!(
                    "interval contains a rational with denominator <= {rational_bound}"
                )))
            }
        }
    }
}

/// The unique adjacent decomposition `x = R1 ⊕ R2` for denominators with
/// p-free part `s >= 2`, and the non-adjacent flanking pair for `s = 1`.
pub fn decompose(x: &Rational, m: &Modulus) -> Result<Decomposition> {
    if is_vertex(x, m) {
        return Err(Error::InX(x.to_string()));
    }
    let (k, s) = split_denominator(x, m);
    let n = m.n();
    // X = p^{l-k}·r, so that r1 + r2 = X and s1 + s2 = s.
    let x_num = x.num() * BigInt::from(m.p()).pow(m.l() - k);
    if s.is_one() {
        let r1 = Rational::new(&x_num - 1, n.clone())?;
        let r2 = Rational::new(&x_num + 1, n.clone())?;
        return Ok(Decomposition {
            r1,
            r2,
            adjacent: false,
            k,
            s,
            s1: BigInt::one(),
            s2: BigInt::one(),
        });
    }
    // Bezout step: m0·X ≡ 1 (mod s), 0 < m0 < s.
    let (g, inv, _) = ext_gcd(&x_num.mod_floor(&s), &s)?;
    debug_assert!(g.is_one());
    let m0 = inv.mod_floor(&s);
    let (s1, r1);
    if &m0 * 2u32 <= s {
        s1 = m0.clone();
        r1 = (&m0 * &x_num - 1u32) / &s;
    } else {
        s1 = &s - &m0;
        r1 = &x_num - (&m0 * &x_num - 1u32) / &s;
    }
    let s2 = &s - &s1;
    let r2 = &x_num - &r1;
    let v1 = Rational::new(r1.clone(), n * &s1)?;
    let v2 = Rational::new(r2.clone(), n * &s2)?;
    debug_assert_eq!(v1.num(), &r1, "R1 must come out reduced");
    debug_assert_eq!(v2.num(), &r2, "R2 must come out reduced");
    debug_assert_eq!((&r1 * &s2 - &r2 * &s1).abs(), BigInt::one());
    Ok(Decomposition { r1: v1, r2: v2, adjacent: true, k, s, s1, s2 })
}

/// Least `k >= 1` with `(⊕_k P) ⊕ R` outside the vertex set; always `< p`.
///
/// The iterated mediant `(ku + r)/(kv + s)` leaves `X_{p^l}` exactly when
/// `p` divides its numerator, so `k ≡ −r·u⁻¹ (mod p)`.
pub fn min_mediant_exit(p_vert: &Rational, r_vert: &Rational, m: &Modulus) -> Result<u64> {
    if !are_adjacent(p_vert, r_vert, m)? {
        return Err(Error::NotAdjacent(format!("{p_vert}, {r_vert}")));
    }
    let u = m.residue(p_vert.num());
    let r = m.residue(r_vert.num());
    let u_inv = crate::rational::mod_inverse(&u.into(), m.p())?;
    let k = (m.p() - (r * u_inv) % m.p()) % m.p();
    debug_assert!(k >= 1 && k < m.p());
    Ok(k)
}

/// All vertices adjacent to `v` with denominator at most `den_bound`,
/// sorted by denominator then value. `∞` (denominator 0) sorts first and
/// appears among the neighbors of `b/N` vertices.
///
/// `∞` itself has infinitely many neighbors `b/N`; callers must bound the
/// numerators of interest with `window = (lo, hi)` (inclusive).
pub fn vertex_neighbors(
    v: &Rational,
    m: &Modulus,
    den_bound: &BigInt,
    window: Option<(&BigInt, &BigInt)>,
) -> Result<Vec<Rational>> {
    if !is_vertex(v, m) {
        return Err(Error::NotAVertex(v.to_string()));
    }
    let n = m.n();
    let mut out = Vec::new();
    if v.is_infinite() {
        let (lo, hi) = window.ok_or_else(|| {
            Error::Unsupported("neighbors of infinity need a numerator window".into())
        })?;
        if den_bound >= n {
            let mut b = lo.clone();
            while &b <= hi {
                if !m.divides_p(&b) {
                    out.push(Rational::new(b.clone(), n.clone())?);
                }
                b += 1u32;
            }
        }
        return Ok(out);
    }
    // Finite v = r/s: solve r·w − s·u = ±N over denominators w ≤ bound.
    // N | w comes for free because N | s and gcd(r, N) = 1.
    if v.den() <= den_bound {
        out.push(Rational::infinity());
    }
    let (r, s) = (v.num(), v.den());
    let mut w = n.clone();
    while &w <= den_bound {
        for sign in [1i8, -1i8] {
            let num = r * &w - if sign == 1 { n.clone() } else { -n.clone() };
            let (q, rem) = num.div_rem(s);
            if rem.is_zero() {
                // a non-coprime solution reduces to a fraction whose
                // determinant against v is no longer ±N; skip it
                let cand = Rational::new(q, w.clone())?;
                if cand.den() == &w {
                    out.push(cand);
                }
            }
        }
        w += n;
    }
    out.sort_by(|a, b| a.den().cmp(b.den()).then_with(|| a.cmp(b)));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn m5() -> Modulus {
        Modulus::new(5, 1).unwrap()
    }

    #[test]
    fn vertex_membership() {
        let m = m5();
        assert!(is_vertex(&q("11/40"), &m));
        assert!(!is_vertex(&q("7/27"), &m));
        assert!(is_vertex(&Rational::infinity(), &m));
        assert!(is_vertex(&q("-3/5"), &m));
        assert!(!is_vertex(&q("1/5"), &Modulus::new(5, 2).unwrap()));
    }

    #[test]
    fn adjacency() {
        let m = m5();
        assert!(are_adjacent(&q("1/5"), &q("3/10"), &m).unwrap());
        assert!(are_adjacent(&q("13/50"), &q("22/85"), &m).unwrap());
        assert!(are_adjacent(&Rational::infinity(), &q("2/5"), &m).unwrap());
        assert!(!are_adjacent(&q("2/5"), &q("4/15"), &m).unwrap());
        assert!(matches!(
            are_adjacent(&q("1/5"), &q("1/3"), &m),
            Err(Error::NotAVertex(_))
        ));
    }

    #[test]
    fn classify_regimes() {
        assert_eq!(
            classify_rational(&q("1/5"), &Modulus::new(5, 2).unwrap()).unwrap(),
            Classification::BSet { k: 1, half: false }
        );
        assert_eq!(
            classify_rational(&q("3/10"), &m5()).unwrap(),
            Classification::MediantPoint { t: BigInt::one() }
        );
        assert_eq!(classify_rational(&q("11/40"), &m5()).unwrap(), Classification::Vertex);
        match classify_rational(&q("7/27"), &m5()).unwrap() {
            Classification::GeneralRational { r1, r2, s1, s2, nx } => {
                assert_eq!((r1, r2), (q("13/50"), q("22/85")));
                assert_eq!((s1, s2), (10.into(), 17.into()));
                assert_eq!(nx, 3);
            }
            other => panic!("{other:?}"),
        }
        // integers divisible by p and half-integers with p | numerator
        // behave exactly like the exceptional set and classify by
        // denominator shape alone
        assert_eq!(
            classify_rational(&q("5/1"), &m5()).unwrap(),
            Classification::BSet { k: 0, half: false }
        );
        assert_eq!(
            classify_rational(&q("5/2"), &m5()).unwrap(),
            Classification::BSet { k: 0, half: true }
        );
        // denominator 2N with p | t is an ordinary vertex, not a mediant
        assert_eq!(classify_rational(&q("11/10"), &m5()).unwrap(), Classification::Vertex);
        // p = 2 never produces mediant points
        let m8 = Modulus::new(2, 3).unwrap();
        assert_eq!(classify_rational(&q("3/16"), &m8).unwrap(), Classification::Vertex);
    }

    #[test]
    fn classify_carriers() {
        let m = m5();
        let surd: RealValue = "quad:0,1,2,1".parse().unwrap();
        assert_eq!(classify(&surd, &m, 1000).unwrap(), Classification::Irrational);
        let narrow: RealValue = "dec:0.3183098861837906715377675267450287240689:1e-40"
            .parse()
            .unwrap();
        assert_eq!(classify(&narrow, &m, 1000).unwrap(), Classification::Irrational);
        let wide: RealValue = "dec:0.5:1e-3".parse().unwrap();
        assert!(matches!(
            classify(&wide, &m, 1000),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&q("1/5"), &Modulus::new(5, 2).unwrap()).unwrap();
        assert_eq!((d.r1, d.r2, d.adjacent), (q("4/25"), q("6/25"), false));

        let d = decompose(&q("7/27"), &m5()).unwrap();
        assert_eq!((d.r1.clone(), d.r2.clone(), d.adjacent), (q("13/50"), q("22/85"), true));
        assert!(are_adjacent(&d.r1, &d.r2, &m5()).unwrap());
        assert_eq!((d.s1, d.s2), (10.into(), 17.into()));

        let d = decompose(&q("1/2"), &m5()).unwrap();
        assert_eq!((d.r1, d.r2), (q("2/5"), q("3/5")));

        assert!(matches!(decompose(&q("11/40"), &m5()), Err(Error::InX(_))));
        assert!(matches!(decompose(&Rational::infinity(), &m5()), Err(Error::InX(_))));
    }

    #[test]
    fn decompose_negative_and_deep_powers() {
        let m = Modulus::new(5, 2).unwrap();
        let d = decompose(&q("-7/27"), &m).unwrap();
        assert!(d.adjacent);
        assert_eq!(
            crate::rational::farey_sum(&d.r1, &d.r2).reduced().unwrap(),
            q("-7/27")
        );
        let d = decompose(&q("3/35"), &m).unwrap(); // den = 5·7, k = 1, s = 7
        assert!(d.adjacent);
        assert_eq!((d.k, d.s.clone()), (1, 7.into()));
        assert_eq!(
            crate::rational::farey_sum(&d.r1, &d.r2).reduced().unwrap(),
            q("3/35")
        );
    }

    #[test]
    fn mediant_exit_examples() {
        let m = m5();
        assert_eq!(min_mediant_exit(&q("1/5"), &q("2/5"), &m).unwrap(), 3);
        assert_eq!(min_mediant_exit(&q("2/5"), &q("1/5"), &m).unwrap(), 2);
        let m2 = Modulus::new(2, 1).unwrap();
        assert_eq!(min_mediant_exit(&q("1/2"), &q("3/4"), &m2).unwrap(), 1);
        assert!(min_mediant_exit(&q("2/5"), &q("4/15"), &m).is_err());
    }

    #[test]
    fn mediant_exit_matches_direct_scan() {
        let m = m5();
        for (a, b) in [("1/5", "3/10"), ("3/10", "4/15"), ("11/40", "4/15"), ("-2/5", "-1/5")] {
            let (p_v, r_v) = (q(a), q(b));
            let k = min_mediant_exit(&p_v, &r_v, &m).unwrap();
            for j in 1..=k {
                let med = crate::rational::iterated_mediant(j, &p_v, &r_v)
                    .reduced()
                    .unwrap();
                assert_eq!(is_vertex(&med, &m), j < k, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn neighbors() {
        let m = m5();
        let inf = Rational::infinity();
        let lo = BigInt::from(-1);
        let hi = BigInt::from(6);
        let ns = vertex_neighbors(&inf, &m, &BigInt::from(5), Some((&lo, &hi))).unwrap();
        let expect: Vec<Rational> =
            ["-1/5", "1/5", "2/5", "3/5", "4/5", "6/5"].iter().map(|s| q(s)).collect();
        assert_eq!(ns, expect);

        let ns = vertex_neighbors(&q("1/5"), &m, &BigInt::from(15), None).unwrap();
        assert!(ns.contains(&q("3/10")));
        assert!(ns.contains(&q("4/15")));
        assert!(ns.contains(&Rational::infinity()));

        let ns = vertex_neighbors(&q("11/40"), &m, &BigInt::from(15), None).unwrap();
        assert!(ns.contains(&q("4/15")));
        assert!(!ns.iter().any(|v| v.is_infinite()));
    }
}
