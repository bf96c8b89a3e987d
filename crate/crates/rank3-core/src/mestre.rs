//! Mestre's construction of `j = 0` elliptic curves over `Q(t)` with many
//! rational points.
//!
//! Six values `x_1, ..., x_6` summing to zero give `p(X) = ∏(X - x_i)`. Writing
//! `g(X) = X² + a_4/3`, the cubic `r = g³ - p` makes every `(x_i, g(x_i))` a
//! point of the genus one curve `Y³ = r(X)`, whose Jacobian is `y² = x³ + B`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::rational::{q, qi, rational_cube_root, rational_pow, rational_valuation};
use crate::arith::{BigRational, RatFunc};
use crate::error::{Error, Result};
use crate::fixture::{CurveFixture, CurvePoint};

/// The six roots of the sextic; `x_6 = -(x_1 + ... + x_5)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MestreInput {
    pub xs: [RatFunc; 6],
}

impl MestreInput {
    /// Completes five values with `x_6 = -(x_1 + ... + x_5)`.
    pub fn new(five: [RatFunc; 5]) -> Self {
        let sum = five.iter().fold(RatFunc::zero(), |acc, x| &acc + x);
        let [a, b, c, d, e] = five;
        MestreInput { xs: [a, b, c, d, e, -&sum] }
    }

    /// First coincident pair `(i, j)`, if any.
    pub fn coincidence(&self) -> Option<(usize, usize)> {
        (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).find(|&(i, j)| self.xs[i] == self.xs[j])
    }

    /// Constant inputs, for tests and examples.
    pub fn from_rationals(five: [BigRational; 5]) -> Self {
        Self::new(five.map(RatFunc::constant))
    }
}

/// `Y³ = r_3 X³ + r_2 X² + r_1 X + r_0` with its six marked points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicModel {
    /// Coefficients `a_0, ..., a_4` of `p(X) = X⁶ + a_4 X⁴ + ... + a_0`.
    pub a: [RatFunc; 5],
    /// Coefficients `r_0, ..., r_3` of `r(X)`.
    pub r: [RatFunc; 4],
    /// The marked points `(x_i, g(x_i))`.
    pub points: Vec<(RatFunc, RatFunc)>,
}

impl CubicModel {
    pub fn g(&self, x: &RatFunc) -> RatFunc {
        &(x * x) + &self.a[4].scale(&q(1, 3))
    }

    pub fn r_eval(&self, x: &RatFunc) -> RatFunc {
        horner(&self.r, x)
    }

    /// Checks `Y³ = r(X)` at every marked point.
    pub fn verify_points(&self) -> bool {
        self.points.iter().all(|(x, y)| y.pow(3) == self.r_eval(x))
    }
}

fn horner(coeffs: &[RatFunc], x: &RatFunc) -> RatFunc {
    coeffs.iter().rev().fold(RatFunc::zero(), |acc, c| &(&acc * x) + c)
}

/// Coefficients (ascending) of `P(c + u)` as a polynomial in `u`.
fn shift(coeffs: &[RatFunc], c: &RatFunc) -> Vec<RatFunc> {
    let mut out: Vec<RatFunc> = Vec::new();
    for a in coeffs.iter().rev() {
        // out = out * (c + u) + a
        let mut next = vec![RatFunc::zero(); out.len() + 1];
        for (k, o) in out.iter().enumerate() {
            next[k] = &next[k] + &(o * c);
            next[k + 1] = &next[k + 1] + o;
        }
        next[0] = &next[0] + a;
        out = next;
    }
    out
}

/// Expands `p(X)` and forms `r = g³ - p`; the six values must be distinct.
pub fn expand_sextic(input: &MestreInput) -> Result<CubicModel> {
    if let Some((i, j)) = input.coincidence() {
        return Err(Error::Degenerate(format!("x_{} = x_{} = {}", i + 1, j + 1, input.xs[i])));
    }
    expand_unchecked(input)
}

fn expand_unchecked(input: &MestreInput) -> Result<CubicModel> {
    // p(X) = ∏ (X - x_i), coefficients ascending
    let mut p = vec![RatFunc::one()];
    for x in &input.xs {
        let mut next = vec![RatFunc::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * x);
        }
        p = next;
    }
    if !p[5].is_zero() {
        return Err(Error::Degenerate("x_1 + ... + x_6 is not zero".into()));
    }
    let a: [RatFunc; 5] = [p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone(), p[4].clone()];
    let third = q(1, 3);
    let a4_3 = a[4].scale(&third);
    let r = [
        &a4_3.pow(3) - &a[0],
        -&a[1],
        &(&a[4] * &a[4]).scale(&third) - &a[2],
        -&a[3],
    ];
    let mut model = CubicModel { a, r, points: Vec::new() };
    model.points = input.xs.iter().map(|x| (x.clone(), model.g(x))).collect();
    Ok(model)
}

/// The one-parameter family of six values, with `t` either an indeterminate
/// (`RatFunc::x()`) or a constant.
pub fn mestre_parametrization(t: &RatFunc, u: &BigRational) -> Result<MestreInput> {
    let one = BigRational::one();
    let u3 = rational_pow(u, 3);
    let dens = [
        u * qi(4),
        (rational_pow(u, 4) - u) * qi(4),
        (rational_pow(u, 7) - u) * qi(4),
        (rational_pow(u, 4) + u) * qi(4),
    ];
    if dens.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate(format!("parameter u = {u} makes a denominator vanish")));
    }
    let c1 = (&one - &u3) / &dens[0];
    let c3 = -(&u3 + qi(3)) / &dens[0];
    let c4 = (rational_pow(u, 6) - qi(6) * &u3 - qi(3)) / &dens[1];
    let c5 = (rational_pow(u, 9) - rational_pow(u, 6) + qi(15) * &u3 + &one) / &dens[2];
    let k = |c: BigRational| RatFunc::constant(c);
    Ok(MestreInput::new([&k(c1.clone()) + t, &k(c1) - t, &k(c3) + t, &k(c4) - t, &k(c5) + t]))
}

/// The sixth value in closed form, used to cross-check `x_6 = -(x_1 + ... + x_5)`.
pub fn mestre_x6(t: &RatFunc, u: &BigRational) -> RatFunc {
    let u3 = rational_pow(u, 3);
    let c6 = (rational_pow(u, 6) + qi(8) * &u3 - BigRational::one()) / ((rational_pow(u, 4) + u) * qi(4));
    &RatFunc::constant(c6) - t
}

/// Choice of origin for the Weierstrass model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// The point at infinity, available when `r_3` is a rational cube.
    Infinity,
    /// The marked point with this index.
    Marked(usize),
}

/// Long Weierstrass coefficients `a_1, a_2, a_3, a_4, a_6`.
type LongCoeffs = [RatFunc; 5];

/// `v² = a u⁴ + b u³ + c u² + d u + q²` to long Weierstrass form, with the point map.
struct QuarticMap {
    q: RatFunc,
    c: RatFunc,
    d: RatFunc,
    long: LongCoeffs,
}

impl QuarticMap {
    /// `coeffs` ascending: `[q², d, c, b, a]`.
    fn new(coeffs: &[RatFunc], q: RatFunc) -> Result<Self> {
        if coeffs[0] != q.pow(2) {
            return Err(Error::Degenerate("quartic constant term is not q^2".into()));
        }
        if q.is_zero() {
            return Err(Error::Degenerate("quartic has q = 0".into()));
        }
        let (d, c, b, a) = (&coeffs[1], &coeffs[2], &coeffs[3], &coeffs[4]);
        let q2 = q.pow(2);
        let a1 = d / &q;
        let a2 = c - &(&(d * d) / &q2.scale(&qi(4)));
        let a3 = &q.scale(&qi(2)) * b;
        let a4 = -&(&q2.scale(&qi(4)) * a);
        let a6 = &a2 * &a4;
        Ok(QuarticMap { q, c: c.clone(), d: d.clone(), long: [a1, a2, a3, a4, a6] })
    }

    fn map(&self, u: &RatFunc, v: &RatFunc) -> Result<(RatFunc, RatFunc)> {
        if u.is_zero() {
            return Err(Error::Degenerate("point maps to the base point of the quartic".into()));
        }
        let q = &self.q;
        let vq = v + q;
        let x = &(&(&q.scale(&qi(2)) * &vq) + &(&self.d * u)) / &u.pow(2);
        let du_cu2 = &(&self.d * u) + &(&self.c * &u.pow(2));
        let y_num = &(&(&q.pow(2).scale(&qi(4)) * &vq) + &(&q.scale(&qi(2)) * &du_cu2))
            - &(&(&(&self.d * &self.d) * &u.pow(2)) / &q.scale(&qi(2)));
        Ok((x, &y_num / &u.pow(3)))
    }
}

/// Completes the square and the cube: `y² = x³ + A x + B`, returning `(A, B)` and the map.
fn to_short(long: &LongCoeffs) -> (RatFunc, RatFunc, impl Fn(&RatFunc, &RatFunc) -> (RatFunc, RatFunc)) {
    let [a1, a2, a3, a4, a6] = long.clone();
    let b2 = &(&a1 * &a1) + &a2.scale(&qi(4));
    let b4 = &a4.scale(&qi(2)) + &(&a1 * &a3);
    let b6 = &(&a3 * &a3) + &a6.scale(&qi(4));
    let a = &b4.scale(&q(1, 2)) - &(&b2 * &b2).scale(&q(1, 48));
    let b = &(&b6.scale(&q(1, 4)) - &(&b2 * &b4).scale(&q(1, 24))) + &b2.pow(3).scale(&q(1, 864));
    let map = move |x: &RatFunc, y: &RatFunc| {
        (x + &b2.scale(&q(1, 12)), y + &(&(&a1 * x) + &a3).scale(&q(1, 2)))
    };
    (a, b, map)
}

/// Output of [`to_weierstrass`] before integral normalization: `y² = x³ + B`.
#[derive(Clone, Debug)]
pub struct RawWeierstrass {
    pub b: RatFunc,
    pub points: Vec<(RatFunc, RatFunc)>,
}

/// Maps `Y³ = r(X)` to `y² = x³ + B` sending `origin` to the point at infinity,
/// and carries the remaining marked points across.
pub fn to_weierstrass_raw(model: &CubicModel, origin: Origin) -> Result<RawWeierstrass> {
    let [r0, r1, r2, r3] = model.r.clone();
    if r3.is_zero() {
        return Err(Error::Degenerate("r_3 = 0: not a cubic".into()));
    }
    let three = qi(3);
    let (quartic, center, qv, images): (Vec<RatFunc>, RatFunc, RatFunc, Vec<(RatFunc, RatFunc)>) = match origin {
        Origin::Infinity => {
            // lines Y = cX + s meet the cubic in a quadratic A X² + B X + C
            let r3c = r3.as_constant().ok_or_else(|| Error::Unsupported("r_3 depends on t".into()))?;
            let c = rational_cube_root(&r3c).ok_or_else(|| Error::NotACube(format!("r_3 = {r3c}")))?;
            let cf = RatFunc::constant(c.clone());
            let c2 = &c * &c;
            let s0 = r2.scale(&(BigRational::one() / (&three * &c2)));
            let quartic = vec![
                &(&r1 * &r1) - &(&r2 * &r0).scale(&qi(4)),
                r0.scale(&(qi(12) * &c2)),
                r1.scale(&(qi(-6) * &c)),
                r2.scale(&qi(4)),
                RatFunc::constant(qi(-3) * &c2),
            ];
            let bf = |s: &RatFunc| &(&(s * s) * &cf).scale(&three) - &r1;
            let qv = -&bf(&s0);
            let mut images = Vec::new();
            for (x, y) in &model.points {
                let s = y - &(&cf * x);
                let am = &s.scale(&(&three * &c2)) - &r2;
                let w = &(&am * x).scale(&qi(2)) + &bf(&s);
                images.push((&s - &s0, w));
            }
            (quartic, s0, qv, images)
        }
        Origin::Marked(i) => {
            let (x0, y0) = model.points.get(i).cloned().ok_or_else(|| Error::Degenerate(format!("no marked point {i}")))?;
            if y0.is_zero() {
                return Err(Error::Degenerate("origin has Y = 0".into()));
            }
            if y0.pow(3) != model.r_eval(&x0) {
                return Err(Error::Degenerate("origin is not on the cubic".into()));
            }
            let r1p = &(&(&r3 * &x0.pow(2)).scale(&three) + &(&r2 * &x0).scale(&qi(2))) + &r1;
            let r2p = &(&r3 * &x0).scale(&three) + &r2;
            let y02 = y0.pow(2);
            let quartic = vec![
                &(&r2p * &r2p) - &(&r3 * &r1p).scale(&qi(4)),
                (&r3 * &y02).scale(&qi(12)),
                (&y0 * &r2p).scale(&qi(-6)),
                r1p.scale(&qi(4)),
                y02.scale(&qi(-3)),
            ];
            let m0 = &r1p / &y02.scale(&three);
            let qv = &(&y0 * &m0.pow(2)).scale(&three) - &r2p;
            let mut images = Vec::new();
            for (j, (x, y)) in model.points.iter().enumerate() {
                if j == i {
                    continue;
                }
                let e = x - &x0;
                let m = &(y - &y0) / &e;
                let am = &m.pow(3) - &r3;
                let bm = &(&y0 * &m.pow(2)).scale(&three) - &r2p;
                let w = &(&am * &e).scale(&qi(2)) + &bm;
                images.push((&m - &m0, w));
            }
            (quartic, m0, qv, images)
        }
    };
    let shifted = shift(&quartic, &center);
    let qm = QuarticMap::new(&shifted, qv)?;
    let (a, b, short) = to_short(&qm.long);
    if !a.is_zero() {
        return Err(Error::Degenerate(format!("Jacobian has A = {a} != 0")));
    }
    let mut points = Vec::new();
    for (u, v) in images {
        let (x, y) = qm.map(&u, &v)?;
        let (x, y) = short(&x, &y);
        points.push((x, y));
    }
    Ok(RawWeierstrass { b, points })
}

/// `λ` making `λ⁶ c` an integer with no sixth-power factor.
pub fn sixth_power_normalizer(c: &BigRational) -> Result<BigRational> {
    if c.is_zero() {
        return Err(Error::Degenerate("zero constant".into()));
    }
    let mut lam = BigRational::one();
    let mut primes: Vec<BigInt> = Vec::new();
    for n in [c.numer().abs(), c.denom().clone()] {
        let f = crate::arith::factor_integer(&n, None, &crate::arith::FactorEffort::default())?;
        if !f.is_complete() {
            return Err(Error::Budget(format!("cannot factor normalizing constant {n}")));
        }
        primes.extend(f.factors.iter().map(|(p, _)| p.clone()));
    }
    for p in primes {
        let v = rational_valuation(c, &p)?;
        // ⌈-v/6⌉
        let e = Integer::div_ceil(&(-v), &6);
        lam *= rational_pow(&BigRational::from_integer(p), e);
    }
    Ok(lam)
}

/// Integral model: `f = λ⁶ B ∈ Z[t]` and points `(λ² x, λ³ y)`.
pub fn normalize(raw: &RawWeierstrass, label: &str) -> Result<CurveFixture> {
    if !raw.b.is_polynomial() {
        return Err(Error::Unsupported(format!("B = {} is not a polynomial in t", raw.b)));
    }
    let (content, _) = raw.b.num().content_and_primitive();
    let lam = sixth_power_normalizer(&content)?;
    let f = raw.b.num().scale(&rational_pow(&lam, 6));
    let l2 = rational_pow(&lam, 2);
    let l3 = rational_pow(&lam, 3);
    let points = raw
        .points
        .iter()
        .map(|(x, y)| CurvePoint::new(x.scale(&l2), y.scale(&l3)))
        .collect();
    let mut fx = CurveFixture::new(label, f, points);
    fx.notes.push(format!("scaling lambda = {lam}"));
    Ok(fx)
}

/// Full pipeline: Weierstrass model, then integral normalization.
pub fn to_weierstrass(model: &CubicModel, origin: Origin, label: &str) -> Result<CurveFixture> {
    normalize(&to_weierstrass_raw(model, origin)?, label)
}
