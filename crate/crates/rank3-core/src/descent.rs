//! 3-descent data attached to curve fixtures: the classes `⅓ div(y - Y_i)`,
//! the exceptional prime set of the descent, and the local hypotheses
//! (odd primes, the prime 2, and the real place) with explicit windows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::factor::{factor_integer, FactorEffort};
use crate::arith::rational::{format_rational, int_valuation, qi, rational_cube_root};
use crate::arith::{parse_rational, rational_valuation, BigRational, RatFunc, RationalPoly};
use crate::error::{Error, Result};
use crate::fixture::CurveFixture;

/// A certified section: `Y² - f = κ X³` checked exactly, `X ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionClassData {
    pub label: String,
    pub index: usize,
    pub f: RationalPoly,
    pub x: RatFunc,
    pub y: RatFunc,
    pub kappa: BigRational,
    pub certified: bool,
}

impl TorsionClassData {
    /// `(X(t), Y(t))`, or `None` at a pole.
    pub fn specialize(&self, t: &BigRational) -> Option<(BigRational, BigRational)> {
        Some((self.x.eval(t)?, self.y.eval(t)?))
    }

    /// Whether `(Y(t)² - f(t)) / κ` is the cube of a rational (and equals `X(t)³`).
    pub fn cube_identity_at(&self, t: &BigRational) -> Option<bool> {
        let (x, y) = self.specialize(t)?;
        let n = (&y * &y - self.f.eval(t)) / &self.kappa;
        Some(rational_cube_root(&n).is_some_and(|c| c == x))
    }
}

/// Builds and certifies the data of class `i` (0-based).
pub fn build_class(fx: &CurveFixture, i: usize) -> Result<TorsionClassData> {
    let pt = fx
        .points
        .get(i)
        .ok_or_else(|| Error::CorruptFixture(format!("{} has no section {}", fx.label, i + 1)))?;
    if pt.x.is_zero() {
        return Err(Error::Degenerate(format!("section {} of {} has X = 0", i + 1, fx.label)));
    }
    if !pt.satisfies(&fx.f) {
        return Err(Error::CorruptFixture(format!("section {} of {} fails Y^2 - f = kappa X^3", i + 1, fx.label)));
    }
    Ok(TorsionClassData {
        label: fx.label.clone(),
        index: i,
        f: fx.f.clone(),
        x: pt.x.clone(),
        y: pt.y.clone(),
        kappa: pt.kappa.clone(),
        certified: true,
    })
}

/// Factoring effort used for exceptional-set integers.
pub const SET_EFFORT: FactorEffort = FactorEffort { trial_bound: 100_000, rho_iterations: 200_000, rho_attempts: 2 };

/// The finite set of primes outside which the descent argument applies, with
/// the reason each prime was added. Integers that could not be factored are kept
/// whole: every prime divisor of such an integer belongs to the set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub primes: BTreeMap<BigInt, Vec<String>>,
    pub unfactored: Vec<(BigInt, String)>,
    pub archimedean: bool,
}

impl ExceptionalSet {
    fn add(&mut self, p: BigInt, reason: &str) {
        let reasons = self.primes.entry(p).or_default();
        if !reasons.iter().any(|r| r == reason) {
            reasons.push(reason.to_string());
        }
    }

    fn add_integer(&mut self, n: &BigInt, reason: &str, effort: &FactorEffort) {
        let n = n.abs();
        if n <= BigInt::one() {
            return;
        }
        let fac = factor_integer(&n, None, effort).expect("nonzero");
        if !fac.is_complete() {
            self.unfactored.push((fac.cofactor.clone(), reason.to_string()));
        }
        for (p, _) in fac.factors {
            self.add(p, reason);
        }
    }

    fn add_rational(&mut self, x: &BigRational, reason: &str, effort: &FactorEffort) {
        self.add_integer(x.numer(), reason, effort);
        self.add_integer(x.denom(), reason, effort);
    }

    /// Whether `p` is (or may be) in the set.
    pub fn contains(&self, p: &BigInt) -> bool {
        self.primes.contains_key(p) || self.unfactored.iter().any(|(n, _)| (n % p).is_zero())
    }

    pub fn odd_primes(&self) -> Vec<BigInt> {
        self.primes.keys().filter(|p| p.is_odd()).cloned().collect()
    }

    pub fn is_fully_factored(&self) -> bool {
        self.unfactored.is_empty()
    }
}

/// Exceptional set for class `i`: `{∞, 2}`, the primes of every coefficient
/// denominator of `a, b, d, f` and of the Bezout cofactors `g, h` with
/// `a g + f h = 1`, and the primes of the leading coefficients of `a, b, d, f`.
pub fn construct_s(fx: &CurveFixture, i: usize, effort: &FactorEffort) -> Result<ExceptionalSet> {
    let deg = fx.degree();
    if deg.is_multiple_of(2) && !deg.is_multiple_of(6) {
        return Err(Error::Unsupported(format!("degree {deg} is 2 or 4 mod 6")));
    }
    if !fx.f.is_squarefree() {
        return Err(Error::CorruptFixture("f is not squarefree".into()));
    }
    let class = build_class(fx, i)?;
    let parts = fx.points[i].parts()?;
    let (g0, g, h) = parts.a.xgcd(&fx.f);
    if g0 != RationalPoly::one() {
        return Err(Error::CorruptFixture(format!("section {}: X numerator and f are not coprime", i + 1)));
    }
    let mut s = ExceptionalSet { archimedean: true, ..Default::default() };
    s.add(BigInt::from(2), "the prime 2");
    for (name, poly) in [("a", &parts.a), ("b", &parts.b), ("d", &parts.d), ("f", &fx.f)] {
        s.add_integer(&poly.denominator_lcm(), &format!("denominator of {name}"), effort);
        s.add_rational(&poly.lead(), &format!("leading coefficient of {name}"), effort);
    }
    s.add_integer(&g.denominator_lcm(), "Bezout denominator of g", effort);
    s.add_integer(&h.denominator_lcm(), "Bezout denominator of h", effort);
    s.add_rational(&class.kappa, "twist", effort);
    Ok(s)
}

/// `ord_p f(t)`, or `None` when `f(t) = 0`.
pub fn ord_at(f: &RationalPoly, p: &BigInt, t: &BigRational) -> Option<i64> {
    rational_valuation(&f.eval(t), p).ok()
}

/// Default search set `{0, …, 20} ∪ {1/p, …, 20/p}`.
pub fn default_search_set(p: &BigInt) -> Vec<BigRational> {
    let mut t: Vec<BigRational> = (0..=20).map(qi).collect();
    t.extend((1..=20).map(|k| BigRational::new(BigInt::from(k), p.clone())));
    t
}

/// First `t ∈ T` with `3 | ord_p f(t)`.
pub fn check_h1(f: &RationalPoly, p: &BigInt, search: &[BigRational]) -> Result<BigRational> {
    if p.is_even() {
        return Err(Error::Hypothesis(format!("{p} is not an odd prime")));
    }
    search
        .iter()
        .find(|t| ord_at(f, p, t).is_some_and(|v| v % 3 == 0))
        .cloned()
        .ok_or_else(|| Error::Exhausted(format!("no t in the search set has 3 | ord_{p} f(t)")))
}

/// Certificate that every odd prime admits a `t_p` from a finite set `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddPrimeCover {
    pub search: Vec<String>,
    /// `gcd` over `t ∈ T` of `num f(t) · den f(t)`; primes not dividing it have
    /// `ord_p f(t) = 0` for some `t`.
    pub common: BigInt,
    /// Explicit choices for the odd primes dividing `common`.
    pub exceptions: Vec<(BigInt, String)>,
}

/// Checks the odd-prime hypothesis for all odd primes at once: a prime that
/// misses some `f(t)` is covered by that `t`, so only the primes of the gcd of
/// the values need an explicit check.
pub fn check_h1_all(f: &RationalPoly, search: &[BigRational], effort: &FactorEffort) -> Result<OddPrimeCover> {
    let mut common = BigInt::zero();
    for t in search {
        let v = f.eval(t);
        if v.is_zero() {
            return Err(Error::Hypothesis(format!("f({}) = 0", format_rational(t))));
        }
        common = common.gcd(&(v.numer() * v.denom()));
    }
    let fac = factor_integer(&common, None, effort)?;
    if !fac.is_complete() {
        return Err(Error::Budget(format!("cannot factor the common value gcd {common}")));
    }
    let mut exceptions = Vec::new();
    for (p, _) in fac.factors.iter().filter(|(p, _)| p.is_odd()) {
        exceptions.push((p.clone(), format_rational(&check_h1(f, p, search)?)));
    }
    Ok(OddPrimeCover { search: search.iter().map(format_rational).collect(), common, exceptions })
}

/// Behaviour of 2 in `Q(√m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoBehaviour {
    Ramified,
    Inert,
    Split,
}

/// Splitting of 2 in `Q(√v)` for a nonzero non-square rational `v`, without
/// factoring: odd squares are 1 mod 8, so the squarefree part of an integer
/// with even 2-adic order is congruent to its odd part mod 8.
pub fn two_behaviour(v: &BigRational) -> Option<TwoBehaviour> {
    if v.is_zero() {
        return None;
    }
    let n = v.numer() * v.denom();
    if !n.is_negative() && crate::arith::rational::int_sqrt(&n).is_some() {
        return None;
    }
    let two = BigInt::from(2);
    let e = int_valuation(&n, &two);
    if e % 2 == 1 {
        return Some(TwoBehaviour::Ramified);
    }
    let odd = &n >> e as usize;
    let r = odd.mod_floor(&BigInt::from(8)).to_u8().unwrap();
    Some(match r {
        1 => TwoBehaviour::Split,
        5 => TwoBehaviour::Inert,
        _ => TwoBehaviour::Ramified,
    })
}

/// First `t ∈ T` with `Q(√f(t))` quadratic and 2 not split.
pub fn check_h2(f: &RationalPoly, search: &[BigRational]) -> Result<(BigRational, TwoBehaviour)> {
    for t in search {
        if let Some(b) = two_behaviour(&f.eval(t)) {
            if b != TwoBehaviour::Split {
                return Ok((t.clone(), b));
            }
        }
    }
    Err(Error::Exhausted("no t in the search set has 2 non-split".into()))
}

/// A local condition on `t`: a `p`-adic ball `ord_p(t - t_p) ≥ k`, or an open real interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PAdicWindow {
    Finite { p: BigInt, center: BigRational, k: i64 },
    Real { lo: Option<BigRational>, hi: Option<BigRational> },
}

impl PAdicWindow {
    pub fn contains(&self, t: &BigRational) -> bool {
        match self {
            PAdicWindow::Finite { p, center, k } => {
                let diff = t - center;
                diff.is_zero() || rational_valuation(&diff, p).unwrap() >= *k
            }
            PAdicWindow::Real { lo, hi } => lo.as_ref().is_none_or(|l| t > l) && hi.as_ref().is_none_or(|h| t < h),
        }
    }
}

impl fmt::Display for PAdicWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicWindow::Finite { p, center, k } => write!(f, "{p} {k} {}", format_rational(center)),
            PAdicWindow::Real { lo, hi } => write!(
                f,
                "inf {} {}",
                lo.as_ref().map_or("-inf".to_string(), format_rational),
                hi.as_ref().map_or("+inf".to_string(), format_rational)
            ),
        }
    }
}

impl FromStr for PAdicWindow {
    type Err = Error;
    /// Parses `p k t_p` or `inf lo hi` (with `-inf` / `+inf` for unbounded ends).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::Parse(format!("bad window line {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        if parts[0] == "inf" {
            let end = |x: &str| -> Result<Option<BigRational>> {
                if x.ends_with("inf") {
                    Ok(None)
                } else {
                    parse_rational(x).map(Some)
                }
            };
            return Ok(PAdicWindow::Real { lo: end(parts[1])?, hi: end(parts[2])? });
        }
        Ok(PAdicWindow::Finite {
            p: parts[0].parse().map_err(|_| bad())?,
            k: parts[1].parse().map_err(|_| bad())?,
            center: parse_rational(parts[2])?,
        })
    }
}

impl Serialize for PAdicWindow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PAdicWindow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest `k` with `ord_p(c_j) + j k > ord_p f(t_p)` for every nonzero Taylor
/// coefficient `c_j` (`j ≥ 1`) of `f` about `t_p`; then `ord_p f` is constant on
/// the ball `ord_p(t - t_p) ≥ k`.
pub fn window_radius(f: &RationalPoly, p: &BigInt, t_p: &BigRational) -> Result<PAdicWindow> {
    let shifted = f.taylor_shift(t_p);
    let c0 = shifted.coeff(0);
    if c0.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    let v0 = rational_valuation(&c0, p)?;
    let mut k = i64::MIN;
    for (j, c) in shifted.coeffs().iter().enumerate().skip(1) {
        if c.is_zero() {
            continue;
        }
        let vj = rational_valuation(c, p)?;
        let j = j as i64;
        k = k.max(Integer::div_floor(&(v0 - vj), &j) + 1);
    }
    if k == i64::MIN {
        return Err(Error::Degenerate("constant polynomial".into()));
    }
    Ok(PAdicWindow::Finite { p: p.clone(), center: t_p.clone(), k })
}

/// Result of the real-place analysis: `δ = 0` when `f` takes negative values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealWindowReport {
    pub delta: u8,
    /// The preferred negative interval (the one containing 0 when `f(0) < 0`).
    pub window: Option<PAdicWindow>,
    /// All maximal negative intervals, with endpoints bracketing real roots.
    pub regions: Vec<PAdicWindow>,
}

/// Isolating intervals `(lo, hi]` of the real roots of `f` with nonroot
/// endpoints, each of width at most `tol`.
pub fn isolate_real_roots(f: &RationalPoly, tol: &BigRational) -> Vec<(BigRational, BigRational)> {
    let lead = f.lead().abs();
    let bound = f.coeffs().iter().map(|c| c.abs() / &lead).max().unwrap_or_else(BigRational::zero) + qi(1);
    let mut todo = vec![(-&bound, bound)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = todo.pop() {
        let n = f.count_real_roots(Some(&lo), Some(&hi));
        if n == 0 {
            continue;
        }
        if n == 1 && &hi - &lo <= *tol {
            out.push((lo, hi));
            continue;
        }
        // split away from roots so endpoints stay nonroots
        let mut j = 2i64;
        let mid = loop {
            let m = &lo + (&hi - &lo) * BigRational::new(BigInt::from(j - 1), BigInt::from(2 * j - 1));
            if !f.eval(&m).is_zero() {
                break m;
            }
            j += 1;
        };
        todo.push((mid.clone(), hi));
        todo.push((lo, mid));
    }
    out.sort();
    out
}

/// Locates the negative set of `f` on the real line.
pub fn real_window(f: &RationalPoly) -> Result<RealWindowReport> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::Degenerate("constant polynomial".into()));
    }
    let roots = isolate_real_roots(f, &BigRational::new(BigInt::one(), BigInt::from(64)));
    let mut ends: Vec<Option<BigRational>> = vec![None];
    for (lo, hi) in &roots {
        ends.push(Some(lo.clone()));
        ends.push(Some(hi.clone()));
    }
    ends.push(None);
    let mut regions = Vec::new();
    for pair in ends.chunks(2) {
        let (lo, hi) = (pair[0].clone(), pair[1].clone());
        let sample = match (&lo, &hi) {
            (None, None) => qi(0),
            (None, Some(h)) => h - qi(1),
            (Some(l), None) => l + qi(1),
            (Some(l), Some(h)) => (l + h) / qi(2),
        };
        if f.eval(&sample).is_negative() {
            regions.push(PAdicWindow::Real { lo, hi });
        }
    }
    let zero = qi(0);
    let window = regions.iter().find(|w| w.contains(&zero)).or(regions.first()).cloned();
    Ok(RealWindowReport { delta: if regions.is_empty() { 1 } else { 0 }, window, regions })
}

/// `3 | min(ord_q f(t), 3 ord_q X(t))`: the local valuation condition that the
/// descent guarantees outside the exceptional set.
pub fn valuation_condition(f_t: &BigRational, x_t: &BigRational, q: &BigInt) -> bool {
    let vf = if f_t.is_zero() { None } else { Some(rational_valuation(f_t, q).unwrap()) };
    let vx = if x_t.is_zero() { None } else { Some(3 * rational_valuation(x_t, q).unwrap()) };
    match (vf, vx) {
        (Some(a), Some(b)) => a.min(b) % 3 == 0,
        (Some(a), None) => a % 3 == 0,
        (None, Some(b)) => b % 3 == 0,
        (None, None) => true,
    }
}

/// Hypothesis bundle for a fixture at one class: exceptional set, odd-prime
/// choices, the choice at 2, windows and `δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub label: String,
    pub exceptional: ExceptionalSet,
    pub odd: Vec<(BigInt, String)>,
    pub t2: (String, TwoBehaviour),
    pub windows: Vec<PAdicWindow>,
    pub real: RealWindowReport,
}

/// Runs the local checks with search set `{0, 1, …}` for every odd prime of the
/// exceptional set and at 2, and builds the corresponding windows.
pub fn check_hypotheses(fx: &CurveFixture, i: usize, effort: &FactorEffort) -> Result<HypothesisReport> {
    let s = construct_s(fx, i, effort)?;
    let mut odd = Vec::new();
    let mut windows = Vec::new();
    for p in s.odd_primes() {
        let t = check_h1(&fx.f, &p, &default_search_set(&p))?;
        windows.push(window_radius(&fx.f, &p, &t)?);
        odd.push((p, format_rational(&t)));
    }
    let two = BigInt::from(2);
    let (t2, behaviour) = check_h2(&fx.f, &default_search_set(&two))?;
    windows.push(window_radius(&fx.f, &two, &t2)?);
    let real = real_window(&fx.f)?;
    Ok(HypothesisReport { label: fx.label.clone(), exceptional: s, odd, t2: (format_rational(&t2), behaviour), windows, real })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;
    use crate::fixture::{load_fixture, FixtureSpec};
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    #[test]
    fn build_class_examples() {
        let f3 = load_fixture(&FixtureSpec::F3).unwrap();
        let c = build_class(&f3, 0).unwrap();
        assert!(c.certified);
        assert_eq!(c.x.num().degree(), Some(4));
        let f5 = load_fixture(&FixtureSpec::F5).unwrap();
        for i in 0..5 {
            assert!(build_class(&f5, i).unwrap().certified);
        }
        assert!(build_class(&f3, 7).is_err());
    }

    #[test]
    fn torsion_point_is_degenerate_for_the_map() {
        // f = t³ + (t + 2)²/4 with the point (0, 1): X = 0
        let f = RationalPoly::new(vec![qi(1), qi(1), q(1, 4), qi(1)]);
        let pt = crate::fixture::CurvePoint::new(RatFunc::zero(), RatFunc::constant(qi(1)));
        let fx = CurveFixture::new("f1-torsion", f, vec![pt]);
        assert!(matches!(build_class(&fx, 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn exceptional_sets() {
        // f = t³ + 2 with Y = t² ... use the constant-numerator section X = 1, Y² = t³ + 3? build
        // Y² - f = X³ with X = 1: f = Y² - 1, Y = t³ + 1 gives f = t⁶ + 2t³
        let f = poly(&[0, 0, 0, 2, 0, 0, 1]);
        let pt = crate::fixture::CurvePoint::new(RatFunc::one(), RatFunc::from_poly(poly(&[1, 0, 0, 1])));
        let fx = CurveFixture::new("const-a", f, vec![pt]);
        // f is not squarefree (t³ factor), so rejected
        assert!(construct_s(&fx, 0, &SET_EFFORT).is_err());
        let f = poly(&[-1, 0, 0, 2, 0, 0, 1]); // Y = t³ + 1, X³ = Y² - f = 2
        let pt = crate::fixture::CurvePoint::from_y(&f, RatFunc::from_poly(poly(&[1, 0, 0, 1])), qi(2)).unwrap();
        let fx = CurveFixture::new("const-a", f, vec![pt]);
        let s = construct_s(&fx, 0, &SET_EFFORT).unwrap();
        assert!(s.archimedean);
        assert_eq!(s.primes.keys().cloned().collect::<Vec<_>>(), vec![BigInt::from(2)]);

        let f3 = load_fixture(&FixtureSpec::F3).unwrap();
        let s3 = construct_s(&f3, 0, &SET_EFFORT).unwrap();
        assert!(s3.primes.contains_key(&BigInt::from(2)));
        assert!(s3.is_fully_factored());
        // f4 has degree 10 ≡ 4 mod 6
        let f4 = load_fixture(&FixtureSpec::F4).unwrap();
        assert!(matches!(construct_s(&f4, 0, &SET_EFFORT), Err(Error::Unsupported(_))));
    }

    #[test]
    fn h1_examples() {
        let f = poly(&[3, 3]); // 3t + 3
        let p = BigInt::from(3);
        assert!(check_h1(&f, &p, &[qi(0), qi(1)]).is_err());
        assert_eq!(check_h1(&poly(&[1, 1]), &BigInt::from(7), &[qi(0)]).unwrap(), qi(0));
        assert!(check_h1(&f, &BigInt::from(2), &[qi(0)]).is_err());
    }

    #[test]
    fn h2_examples() {
        assert_eq!(two_behaviour(&qi(1)), None);
        assert_eq!(two_behaviour(&qi(5)), Some(TwoBehaviour::Inert));
        assert_eq!(two_behaviour(&qi(-3)), Some(TwoBehaviour::Inert));
        assert_eq!(two_behaviour(&qi(17)), Some(TwoBehaviour::Split));
        assert_eq!(two_behaviour(&qi(-7)), Some(TwoBehaviour::Split));
        assert_eq!(two_behaviour(&qi(8)), Some(TwoBehaviour::Ramified));
        assert_eq!(two_behaviour(&qi(3)), Some(TwoBehaviour::Ramified));
        assert_eq!(two_behaviour(&q(45, 4)), Some(TwoBehaviour::Inert)); // square class of 5
        // f(0) = 1 rejected, then f(1) = 5 accepted
        let f = poly(&[1, 4]);
        assert_eq!(check_h2(&f, &[qi(0), qi(1)]).unwrap(), (qi(1), TwoBehaviour::Inert));
    }

    #[test]
    fn window_radius_examples() {
        let w = window_radius(&poly(&[0, 1]), &BigInt::from(3), &qi(1)).unwrap();
        assert_eq!(w, PAdicWindow::Finite { p: BigInt::from(3), center: qi(1), k: 1 });
        let p = 7i64;
        let w = window_radius(&poly(&[p * p, 0, 1]), &BigInt::from(p), &qi(0)).unwrap();
        assert_eq!(w, PAdicWindow::Finite { p: BigInt::from(p), center: qi(0), k: 2 });
        assert!(window_radius(&poly(&[0, 1]), &BigInt::from(3), &qi(0)).is_err());
        let text = w.to_string();
        assert_eq!(text, "7 2 0");
        assert_eq!(text.parse::<PAdicWindow>().unwrap(), w);
    }

    #[test]
    fn real_window_examples() {
        assert_eq!(real_window(&poly(&[1, 0, 1])).unwrap().delta, 1);
        let r = real_window(&poly(&[0, 0, -1])).unwrap();
        assert_eq!(r.delta, 0);
        assert_eq!(r.regions.len(), 2);
        assert!(r.regions.iter().all(|w| !w.contains(&qi(0))));
        // t² - 4 is negative exactly on (-2, 2)
        let r = real_window(&poly(&[-4, 0, 1])).unwrap();
        let w = r.window.unwrap();
        assert!(w.contains(&qi(0)) && w.contains(&q(19, 10)) && !w.contains(&qi(2)));
        let text = w.to_string();
        assert_eq!(text.parse::<PAdicWindow>().unwrap(), w);
        // f3 is negative left of its real root near -14.57
        let f3 = load_fixture(&FixtureSpec::F3).unwrap();
        let r = real_window(&f3.f).unwrap();
        assert_eq!(r.regions.len(), 1);
        let w = r.window.unwrap();
        assert!(w.contains(&q(-1458, 100)) && !w.contains(&q(-1457, 100)));
    }

    #[test]
    fn f3_descent_sanity() {
        let f3 = load_fixture(&FixtureSpec::F3).unwrap();
        let s = construct_s(&f3, 0, &SET_EFFORT).unwrap();
        for i in 0..4 {
            let c = build_class(&f3, i).unwrap();
            for n in -30..30 {
                let t = q(n, 7);
                let Some((x, _)) = c.specialize(&t) else { continue };
                assert_eq!(c.cube_identity_at(&t), Some(true));
                let ft = f3.f.eval(&t);
                if i == 0 {
                    for qq in [3i64, 11, 13, 17, 19, 23] {
                        let qq = BigInt::from(qq);
                        if !s.contains(&qq) && !(&qq % BigInt::from(7)).is_zero() {
                            assert!(valuation_condition(&ft, &x, &qq));
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn windows_keep_the_valuation(c in proptest::collection::vec(-50i64..50, 2..6), t0 in -20i64..20, s in proptest::collection::vec(-1000i64..1000, 1..20)) {
            let f = poly(&c);
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            for p in [3i64, 5, 7] {
                let pb = BigInt::from(p);
                let t0 = qi(t0);
                let Ok(w) = window_radius(&f, &pb, &t0) else { continue };
                let PAdicWindow::Finite { k, .. } = w else { unreachable!() };
                let v0 = ord_at(&f, &pb, &t0).unwrap();
                for &si in &s {
                    let step = qi(p).pow(k as i32);
                    let t = &t0 + step * qi(si);
                    prop_assert!(w.contains(&t));
                    prop_assert_eq!(ord_at(&f, &pb, &t), Some(v0));
                }
            }
        }
    }
}
