//! Divisor-class arithmetic on hyperelliptic Jacobians over `F_p` and
//! certification of `Z/3`-independence of the fixture classes.
//!
//! Curves are moved to an odd-degree monic model `W² = F(σ)` so that Cantor's
//! algorithm with a single point at infinity applies. Reduction at a good odd
//! prime is injective on torsion, so classes that stay independent mod `p` are
//! independent over `Q`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::factor::primes_up_to;
use crate::arith::fp::{inv_mod, reduce_rational};
use crate::arith::modular::{mul_mod_u64, pow_mod_u64};
use crate::arith::{FpPoly, RationalPoly};
use crate::error::{Error, Result};
use crate::fixture::{ClassLayout, CurveFixture};
use crate::qform::{ternary_combinations, ternary_string};

/// How the odd model's coordinates relate to `(t, y)` on `y² = f(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OddMap {
    /// Odd degree input: `σ = l t`, `W = l^{(n-1)/2} y` with `l` the leading coefficient.
    Scale { l: u64 },
    /// Even degree input with `f(θ) = 0`: `σ = c / (t - θ)`,
    /// `W = c^{(n-1)/2} y / (t - θ)^{d/2}` with `c = f'(θ)`.
    Shift { theta: u64, c: u64, d: usize },
}

/// `W² = F(σ)` with `F` monic of odd degree `2g + 1`, squarefree over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddModel {
    pub p: u64,
    pub f: FpPoly,
    pub genus: usize,
    pub map: OddMap,
}

fn fp_pow(a: u64, e: u64, p: u64) -> u64 {
    pow_mod_u64(a % p, e, p)
}

/// Builds the odd model of `y² = f(t)` over `F_p`, shifting the root `root` to
/// infinity when the degree is even.
pub fn to_odd_model(f: &FpPoly, root: Option<u64>) -> Result<OddModel> {
    let p = f.modulus();
    let d = f.degree().ok_or_else(|| Error::Degenerate("zero polynomial".into()))?;
    if d < 3 {
        return Err(Error::Unsupported(format!("degree {d} curve")));
    }
    if !f.is_squarefree() {
        return Err(Error::BadPrime(p, "f is not squarefree mod p".into()));
    }
    if d % 2 == 1 {
        let l = f.lead();
        let n = d as u64;
        // H(σ) = l^{n-1} f(σ / l), monic
        let linv = inv_mod(l, p);
        let coeffs = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, &c)| mul_mod_u64(mul_mod_u64(c, fp_pow(l, n - 1, p), p), fp_pow(linv, j as u64, p), p))
            .collect();
        let big_f = FpPoly::new(p, coeffs);
        return Ok(OddModel { p, genus: (d - 1) / 2, f: big_f, map: OddMap::Scale { l } });
    }
    let theta = root.ok_or_else(|| Error::Unsupported("even degree needs a root".into()))?;
    if f.eval(theta) != 0 {
        return Err(Error::Degenerate(format!("{theta} is not a root of f mod {p}")));
    }
    // F~(s) = s^d f(θ + 1/s) has degree d - 1 and leading coefficient c = f'(θ)
    let shifted = f.taylor_shift(theta);
    let rev: Vec<u64> = (0..=d).map(|j| shifted.coeff(d - j)).collect();
    let ftil = FpPoly::new(p, rev);
    let n = d - 1;
    let c = ftil.lead();
    // H(σ) = c^{n-1} F~(σ / c)
    let cinv = inv_mod(c, p);
    let coeffs = ftil
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, &a)| mul_mod_u64(mul_mod_u64(a, fp_pow(c, (n - 1) as u64, p), p), fp_pow(cinv, j as u64, p), p))
        .collect();
    let big_f = FpPoly::new(p, coeffs);
    Ok(OddModel { p, genus: (n - 1) / 2, f: big_f, map: OddMap::Shift { theta, c, d } })
}

/// Reduced divisor `(u, v)`: `u` monic, `deg v < deg u ≤ g`, `u | v² - F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordDivisor {
    pub u: FpPoly,
    pub v: FpPoly,
}

impl MumfordDivisor {
    pub fn identity(p: u64) -> Self {
        MumfordDivisor { u: FpPoly::one(p), v: FpPoly::zero(p) }
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_one()
    }

    /// The class of `P - ∞` for an affine point `P = (x, y)`.
    pub fn from_point(p: u64, x: u64, y: u64) -> Self {
        MumfordDivisor { u: FpPoly::new(p, vec![(p - x % p) % p, 1]), v: FpPoly::constant(p, y) }
    }

    /// `u | v² - F` and the degree conditions.
    pub fn is_valid(&self, model: &OddModel) -> bool {
        self.u.lead() == 1
            && self.v.deg() < self.u.deg()
            && self.u.deg() <= model.genus as isize
            && self.v.mul(&self.v).sub(&model.f).rem(&self.u).is_zero()
    }

    pub fn neg(&self) -> Self {
        MumfordDivisor { u: self.u.clone(), v: self.v.neg() }
    }

    /// Coefficient listing for transcripts.
    pub fn describe(&self) -> String {
        format!("u={:?} v={:?}", self.u.coeffs(), self.v.coeffs())
    }
}

/// Composition and reduction of two divisor classes.
pub fn cantor_add(a: &MumfordDivisor, b: &MumfordDivisor, model: &OddModel) -> MumfordDivisor {
    let (d1, e1, e2) = a.u.xgcd(&b.u);
    let (d, c1, c2) = d1.xgcd(&a.v.add(&b.v));
    let s1 = c1.mul(&e1);
    let s2 = c1.mul(&e2);
    let s3 = c2;
    let u = a.u.mul(&b.u).div_exact(&d.mul(&d));
    let num = s1
        .mul(&a.u)
        .mul(&b.v)
        .add(&s2.mul(&b.u).mul(&a.v))
        .add(&s3.mul(&a.v.mul(&b.v).add(&model.f)));
    let v = num.div_exact(&d).rem(&u);
    reduce_divisor(u, v, model)
}

/// Cantor reduction of a semi-reduced divisor.
pub fn reduce_divisor(mut u: FpPoly, mut v: FpPoly, model: &OddModel) -> MumfordDivisor {
    let g = model.genus as isize;
    v = v.rem(&u);
    while u.deg() > g {
        let u2 = model.f.sub(&v.mul(&v)).div_exact(&u);
        let v2 = v.neg().rem(&u2);
        u = u2;
        v = v2;
    }
    let u = u.monic();
    let v = v.rem(&u);
    MumfordDivisor { u, v }
}

/// `n · D` by double-and-add.
pub fn scalar_mul(d: &MumfordDivisor, n: u64, model: &OddModel) -> MumfordDivisor {
    let mut acc = MumfordDivisor::identity(model.p);
    let mut base = d.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = cantor_add(&acc, &base, model);
        }
        base = cantor_add(&base, &base, model);
        n >>= 1;
    }
    acc
}

fn reduce_poly(f: &RationalPoly, p: u64) -> Result<FpPoly> {
    let r = FpPoly::from_rational(f, p).ok_or_else(|| Error::BadPrime(p, "denominator divisible by p".into()))?;
    if r.degree() != f.degree() {
        return Err(Error::BadPrime(p, "leading coefficient vanishes mod p".into()));
    }
    Ok(r)
}

/// Image of the semi-reduced divisor `(u(t), v(t))` on the odd model.
fn transport(u: &FpPoly, v: &FpPoly, model: &OddModel) -> Result<MumfordDivisor> {
    let p = model.p;
    let k = u.degree().unwrap_or(0);
    let n = model.f.degree().unwrap() as u64;
    let half = (n - 1) / 2;
    match model.map {
        OddMap::Scale { l } => {
            // t = σ / l
            let linv = inv_mod(l, p);
            let sub = FpPoly::new(p, vec![0, linv]);
            let u2 = u.compose(&sub).monic();
            let v2 = v.compose(&sub).scale(fp_pow(l, half, p)).rem(&u2);
            Ok(reduce_divisor(u2, v2, model))
        }
        OddMap::Shift { theta, c, d } => {
            if u.eval(theta) == 0 {
                return Err(Error::BadPrime(p, "divisor meets the shifted root".into()));
            }
            // u'(σ) = σ^k u(θ + c/σ) = Σ u_j (θσ + c)^j σ^{k-j}
            let lin = FpPoly::new(p, vec![c, theta]);
            let mut u2 = FpPoly::zero(p);
            for (j, &uj) in u.coeffs().iter().enumerate() {
                let term = lin.pow(j as u32).mul(&FpPoly::monomial(p, k - j)).scale(uj);
                u2 = u2.add(&term);
            }
            let u2 = u2.monic();
            if u2.degree() == Some(0) {
                return Ok(MumfordDivisor::identity(p));
            }
            let sigma = FpPoly::x(p);
            let sinv = sigma.inv_mod(&u2).ok_or_else(|| Error::BadPrime(p, "σ not invertible".into()))?;
            // t = θ + c σ^{-1} in F_p[σ]/(u')
            let t_elem = FpPoly::constant(p, theta).add(&sinv.scale(c)).rem(&u2);
            let mut vt = FpPoly::zero(p);
            for &vc in v.coeffs().iter().rev() {
                vt = vt.mul(&t_elem).add(&FpPoly::constant(p, vc)).rem(&u2);
            }
            let factor = sigma.scale(inv_mod(c, p)).powmod(&BigInt::from(d / 2), &u2);
            let v2 = vt.mul(&factor).scale(fp_pow(c, half, p)).rem(&u2);
            Ok(reduce_divisor(u2, v2, model))
        }
    }
}

/// `⅓ div(y - Y)` for one section, split into the class `[E']` of its affine
/// part on the odd model and, for even-degree curves, the contribution of the
/// two points at infinity.
#[derive(Clone, Debug)]
struct SectionClass {
    affine: MumfordDivisor,
    /// The infinite part equals `thirds / 3` times the class of `(σ, W) = (0, w0)`.
    thirds: i64,
    w0: u64,
}

impl SectionClass {
    /// The hyperelliptic conjugate: the section `-Y`.
    fn conjugate(&self, p: u64) -> Self {
        SectionClass { affine: self.affine.neg(), thirds: self.thirds, w0: (p - self.w0) % p }
    }
}

fn section_class(fx: &CurveFixture, idx: usize, model: &OddModel) -> Result<SectionClass> {
    let p = model.p;
    let pt = &fx.points[idx];
    if pt.x.is_zero() {
        return Err(Error::Degenerate(format!("section {} has X = 0", idx + 1)));
    }
    let s = pt.parts()?;
    let (a, b, d) = (reduce_poly(&s.a, p)?, reduce_poly(&s.b, p)?, reduce_poly(&s.d, p)?);
    let u = a.monic();
    if !u.gcd(&b).is_one() || !u.gcd(&d).is_one() {
        return Err(Error::BadPrime(p, format!("section {} degenerates mod p", idx + 1)));
    }
    let d3inv = d.pow(3).inv_mod(&u).unwrap_or_else(|| FpPoly::zero(p));
    let v = b.mul(&d3inv).rem(&u);
    let affine = transport(&u, &v, model)?;
    let mut out = SectionClass { affine, thirds: 0, w0: 0 };
    if let OddMap::Shift { c, d: deg_f, .. } = model.map {
        // y - Y has unequal pole orders at the two points at infinity exactly
        // when the leading terms of y and Y cancel on one branch
        let e = s.b.degree().unwrap_or(0);
        let delta = s.d.degree().unwrap_or(0);
        let k = s.a.degree().unwrap_or(0);
        if e == 3 * delta + deg_f / 2 && s.b.lead().pow(2) == s.d.lead().pow(6) * fx.f.lead() {
            let half = (model.f.degree().unwrap() as u64 - 1) / 2;
            let lb = reduce_rational(&s.b.lead(), p).unwrap();
            let ld = reduce_rational(&s.d.lead(), p).unwrap();
            out.thirds = 2 * e as i64 - 3 * k as i64;
            out.w0 = mul_mod_u64(mul_mod_u64(fp_pow(c, half, p), lb, p), inv_mod(fp_pow(ld, 3, p), p), p);
        }
    }
    Ok(out)
}

/// `Σ cᵢ Sᵢ` for integer coefficients, failing if the infinite part is not integral.
fn combine_sections(parts: &[(i64, &SectionClass)], model: &OddModel) -> Result<MumfordDivisor> {
    let p = model.p;
    let mut acc = MumfordDivisor::identity(p);
    let mut thirds = 0i64;
    let mut reference: Option<u64> = None;
    for &(coef, sc) in parts {
        let term = if coef >= 0 { sc.affine.clone() } else { sc.affine.neg() };
        acc = cantor_add(&acc, &scalar_mul(&term, coef.unsigned_abs(), model), model);
        if sc.thirds != 0 {
            let w = *reference.get_or_insert(sc.w0);
            let sign = if sc.w0 == w { 1 } else { -1 };
            thirds += coef * sign * sc.thirds;
        }
    }
    if thirds % 3 != 0 {
        return Err(Error::CorruptFixture("divisor at infinity is not divisible by 3".into()));
    }
    if let Some(w) = reference {
        let pplus = MumfordDivisor::from_point(p, 0, w);
        let m = thirds / 3;
        let shift = scalar_mul(&if m >= 0 { pplus } else { pplus.neg() }, m.unsigned_abs(), model);
        acc = cantor_add(&acc, &shift, model);
    }
    Ok(acc)
}

/// The fixture's `i`-th divisor class reduced mod `p`, respecting its layout.
///
/// For the difference layout the last section is replaced by its conjugate
/// when its leading term sits on the other branch at infinity, so that the
/// infinite parts cancel.
pub fn reduce_class(fx: &CurveFixture, i: usize, model: &OddModel) -> Result<MumfordDivisor> {
    let d = match fx.layout {
        ClassLayout::Direct => combine_sections(&[(1, &section_class(fx, i, model)?)], model)?,
        ClassLayout::DifferenceWithLast => {
            let a = section_class(fx, i, model)?;
            let mut b = section_class(fx, fx.points.len() - 1, model)?;
            if a.thirds != 0 && b.thirds != 0 && a.w0 != b.w0 {
                b = b.conjugate(model.p);
            }
            combine_sections(&[(1, &a), (-1, &b)], model)?
        }
    };
    if !d.is_valid(model) {
        return Err(Error::Hypothesis(format!("class {} is not a valid reduced divisor mod {}", i + 1, model.p)));
    }
    if !scalar_mul(&d, 3, model).is_identity() {
        return Err(Error::Hypothesis(format!("class {} is not 3-torsion mod {}", i + 1, model.p)));
    }
    Ok(d)
}

/// Whether `p` is a good prime for the fixture; returns the odd model if so.
pub fn good_model(fx: &CurveFixture, p: u64) -> Result<OddModel> {
    if p <= 3 {
        return Err(Error::BadPrime(p, "p must exceed 3".into()));
    }
    let f = reduce_poly(&fx.f, p)?;
    if !f.is_squarefree() {
        return Err(Error::BadPrime(p, "f not squarefree mod p".into()));
    }
    let mut secs = Vec::new();
    for pt in &fx.points {
        let s = pt.parts()?;
        let a = reduce_poly(&s.a, p)?;
        let b = reduce_poly(&s.b, p)?;
        let d = reduce_poly(&s.d, p)?;
        if reduce_rational(&pt.kappa, p).is_none_or(|k| k == 0) {
            return Err(Error::BadPrime(p, "twist vanishes mod p".into()));
        }
        if !a.gcd(&b).is_one() || !a.gcd(&d).is_one() {
            return Err(Error::BadPrime(p, "section data not coprime mod p".into()));
        }
        secs.push(a);
    }
    let root = if f.degree().unwrap() % 2 == 0 {
        let r = f.roots().into_iter().find(|&r| secs.iter().all(|a| a.eval(r) != 0));
        Some(r.ok_or_else(|| Error::BadPrime(p, "no usable root of f mod p".into()))?)
    } else {
        None
    };
    to_odd_model(&f, root)
}

/// First `how_many` good primes at least `start` (and below `2^16`).
pub fn good_prime_select(fx: &CurveFixture, how_many: usize, start: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for p in primes_up_to(1 << 16) {
        let p = p as u64;
        if p < start {
            continue;
        }
        if good_model(fx, p).is_ok() {
            out.push(p);
            if out.len() == how_many {
                return Ok(out);
            }
        }
    }
    Err(Error::Exhausted(format!("found only {} good primes for {}", out.len(), fx.label)))
}

/// Result of the `Z/3`-independence scan at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub prime: u64,
    pub rank: usize,
    /// Basis of the relation space, as ternary strings.
    pub relations: Vec<String>,
    /// Every combination tested, with whether it vanished.
    pub transcript: Vec<(String, bool)>,
}

/// Row-reduces vectors over `F_3`, returning a reduced basis.
fn f3_basis(vectors: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut rows: Vec<Vec<u8>> = vectors.to_vec();
    let n = rows.first().map_or(0, Vec::len);
    let mut basis = Vec::new();
    for col in 0..n {
        let Some(pos) = rows.iter().position(|r| r[col] != 0) else { continue };
        let mut pivot = rows.remove(pos);
        if pivot[col] == 2 {
            pivot.iter_mut().for_each(|x| *x = (*x * 2) % 3);
        }
        for r in rows.iter_mut().chain(basis.iter_mut()) {
            let k = r[col];
            if k != 0 {
                for j in 0..n {
                    r[j] = (r[j] + 3 * 3 - k * pivot[j] % 3) % 3;
                }
            }
        }
        basis.push(pivot);
    }
    basis
}

/// Tests all nonzero combinations up to sign; each vanishing one is a relation.
pub fn independence_mod3(classes: &[MumfordDivisor], model: &OddModel) -> IndependenceReport {
    let negs: Vec<MumfordDivisor> = classes.iter().map(MumfordDivisor::neg).collect();
    let mut transcript = Vec::new();
    let mut zeros = Vec::new();
    for c in ternary_combinations(classes.len()) {
        let mut acc = MumfordDivisor::identity(model.p);
        for (i, &ci) in c.iter().enumerate() {
            match ci {
                1 => acc = cantor_add(&acc, &classes[i], model),
                2 => acc = cantor_add(&acc, &negs[i], model),
                _ => {}
            }
        }
        let zero = acc.is_identity();
        transcript.push((ternary_string(&c), zero));
        if zero {
            zeros.push(c);
        }
    }
    let basis = f3_basis(&zeros);
    IndependenceReport {
        prime: model.p,
        rank: classes.len() - basis.len(),
        relations: basis.iter().map(|v| ternary_string(v)).collect(),
        transcript,
    }
}

/// Torsion-rank verification of a fixture at several good primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub label: String,
    pub degree: usize,
    pub genus: usize,
    pub classes: usize,
    pub reports: Vec<IndependenceReport>,
}

impl TorsionReport {
    /// Certified lower bound: the smallest rank over the primes used.
    pub fn rank(&self) -> usize {
        self.reports.iter().map(|r| r.rank).min().unwrap_or(0)
    }

    pub fn stable(&self) -> bool {
        self.reports.windows(2).all(|w| w[0].rank == w[1].rank && w[0].relations == w[1].relations)
    }

    pub fn primes(&self) -> Vec<u64> {
        self.reports.iter().map(|r| r.prime).collect()
    }
}

/// Reduces every class at `how_many` good primes from `start` on and scans for relations.
pub fn verify_torsion(fx: &CurveFixture, how_many: usize, start: u64) -> Result<TorsionReport> {
    let primes = good_prime_select(fx, how_many, start)?;
    let mut reports = Vec::new();
    for p in primes {
        let model = good_model(fx, p)?;
        let classes = (0..fx.class_count()).map(|i| reduce_class(fx, i, &model)).collect::<Result<Vec<_>>>()?;
        reports.push(independence_mod3(&classes, &model));
    }
    Ok(TorsionReport { label: fx.label.clone(), degree: fx.degree(), genus: fx.genus(), classes: fx.class_count(), reports })
}

/// Affine points of `W² = F(σ)` over `F_p` (brute force, small `p`).
pub fn affine_points(model: &OddModel) -> Vec<(u64, u64)> {
    let p = model.p;
    let mut out = Vec::new();
    for x in 0..p {
        let fx = model.f.eval(x);
        for y in 0..p {
            if mul_mod_u64(y, y, p) == fx {
                out.push((x, y));
            }
        }
    }
    out
}

/// Smallest `n ≥ 1` with `n D = 0`, searching up to `bound`.
pub fn divisor_order(d: &MumfordDivisor, model: &OddModel, bound: u64) -> Option<u64> {
    let mut acc = d.clone();
    for n in 1..=bound {
        if acc.is_identity() {
            return Some(n);
        }
        acc = cantor_add(&acc, d, model);
    }
    None
}

/// Chord-tangent addition on `y² = x³ + a x² + b x + c`; `None` is the point at infinity.
pub fn chord_tangent(p: u64, cubic: &FpPoly, a: Option<(u64, u64)>, b: Option<(u64, u64)>) -> Option<(u64, u64)> {
    let (Some((x1, y1)), Some((x2, y2))) = (a, b) else { return a.or(b) };
    let a2 = cubic.coeff(2);
    let lam = if x1 != x2 {
        mul_mod_u64((y2 + p - y1) % p, inv_mod((x2 + p - x1) % p, p), p)
    } else if (y1 + y2) % p == 0 {
        return None;
    } else {
        let num = cubic.derivative().eval(x1);
        mul_mod_u64(num, inv_mod(2 * y1 % p, p), p)
    };
    let x3 = (mul_mod_u64(lam, lam, p) + 3 * p - a2 - x1 - x2) % p;
    let y3 = (2 * p - (y1 + mul_mod_u64(lam, (x3 + p - x1) % p, p)) % p) % p;
    Some((x3, y3))
}

/// The divisor `[P] - [∞]` of an affine point, or the identity for `None`.
pub fn point_divisor(p: u64, pt: Option<(u64, u64)>) -> MumfordDivisor {
    match pt {
        None => MumfordDivisor::identity(p),
        Some((x, y)) => MumfordDivisor::from_point(p, x, y),
    }
}

/// Exhaustive agreement of Cantor and chord-tangent on every monic squarefree cubic over F_p.
/// Exhaustively compares [`cantor_add`] with chord-tangent addition for every
/// squarefree monic cubic over `F_p` and every pair of points; returns the
/// number of additions checked or the first disagreement.
pub fn chord_tangent_agreement(p: u64) -> std::result::Result<usize, String> {
    let mut checked = 0;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                let cubic = FpPoly::new(p, vec![c, b, a, 1]);
                if !cubic.is_squarefree() {
                    continue;
                }
                let model = OddModel { p, f: cubic.clone(), genus: 1, map: OddMap::Scale { l: 1 } };
                let mut pts: Vec<Option<(u64, u64)>> = vec![None];
                pts.extend(affine_points(&model).into_iter().map(Some));
                for &x in &pts {
                    for &y in &pts {
                        let expect = point_divisor(p, chord_tangent(p, &cubic, x, y));
                        let got = cantor_add(&point_divisor(p, x), &point_divisor(p, y), &model);
                        if got != expect {
                            return Err(format!("p = {p}, cubic {cubic:?}: {x:?} + {y:?}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{load_fixture, FixtureSpec};
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn genus_one_matches_chord_tangent() {
        for p in [3, 5, 7] {
            assert!(chord_tangent_agreement(p).unwrap() > 0);
        }
    }

    #[test]
    fn group_laws_small() {
        let p = 5;
        let model = to_odd_model(&FpPoly::from_i64(p, &[1, 0, 0, 1]), None).unwrap();
        let pts = affine_points(&model);
        assert_eq!(pts.len(), 5); // y² = x³ + 1 over F_5 has 6 points with infinity
        let d = MumfordDivisor::from_point(p, pts[1].0, pts[1].1);
        assert_eq!(cantor_add(&d, &MumfordDivisor::identity(p), &model), d);
        assert!(cantor_add(&d, &d.neg(), &model).is_identity());
    }

    #[test]
    fn odd_model_point_counts() {
        // d = 6 over F_7 with roots 1..6: y² = ∏(t - e) has the same number of
        // points as its odd model (both points over t = ∞ become affine, the
        // Weierstrass point at θ becomes ∞)
        let p = 7;
        let mut f = FpPoly::one(p);
        for e in 1..=6 {
            f = f.mul(&FpPoly::new(p, vec![p - e, 1]));
        }
        let model = to_odd_model(&f, Some(1)).unwrap();
        assert_eq!((model.f.degree(), model.genus), (Some(5), 2));
        let mut even_affine = 0;
        for t in 0..p {
            let v = f.eval(t);
            even_affine += (0..p).filter(|&y| mul_mod_u64(y, y, p) == v).count();
        }
        // lead 1 is a square: two points at infinity on the even model
        let even_total = even_affine + 2;
        let odd_total = affine_points(&model).len() + 1;
        assert_eq!(even_total, odd_total);
        assert!(to_odd_model(&f, Some(0)).is_err());
    }

    #[test]
    fn genus_two_orders_divide_group_order() {
        // y² = x⁵ + x + 3 over F_5; #J = (N1² + N2)/2 - q
        let p = 5u64;
        let f = FpPoly::from_i64(p, &[3, 1, 0, 0, 0, 1]);
        let model = to_odd_model(&f, None).unwrap();
        let n1 = affine_points(&model).len() as i64 + 1;
        // count over F_25 = F_5[i]/(i² - 2)
        let nr = 2u64;
        let mul = |a: (u64, u64), b: (u64, u64)| {
            ((a.0 * b.0 + nr * a.1 * b.1) % p, (a.0 * b.1 + a.1 * b.0) % p)
        };
        let mut sq = std::collections::HashMap::new();
        for x0 in 0..p {
            for x1 in 0..p {
                *sq.entry(mul((x0, x1), (x0, x1))).or_insert(0i64) += 1;
            }
        }
        let mut n2 = 1i64;
        for x0 in 0..p {
            for x1 in 0..p {
                let x = (x0, x1);
                let mut acc = (0u64, 0u64);
                for &c in f.coeffs().iter().rev() {
                    acc = mul(acc, x);
                    acc = ((acc.0 + c) % p, acc.1);
                }
                n2 += sq.get(&acc).copied().unwrap_or(0);
            }
        }
        let q = p as i64;
        let jac = ((n1 * n1 + n2) / 2 - q) as u64;
        let pts = affine_points(&model);
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let d = cantor_add(
                    &MumfordDivisor::from_point(p, pts[i].0, pts[i].1),
                    &MumfordDivisor::from_point(p, pts[j].0, pts[j].1),
                    &model,
                );
                let ord = divisor_order(&d, &model, jac).expect("order within #J");
                assert_eq!(jac % ord, 0, "order {ord} does not divide {jac}");
            }
        }
    }

    #[test]
    fn f1_family_rank_one() {
        let fx = load_fixture(&FixtureSpec::F1 { a: crate::arith::rational::qi(2) }).unwrap();
        let r = verify_torsion(&fx, 2, 50).unwrap();
        assert_eq!(r.rank(), 1);
        assert!(r.stable());
    }

    #[test]
    fn f2_family_rank_two() {
        let fx = load_fixture(&"f2(-5,1)".parse().unwrap()).unwrap();
        let r = verify_torsion(&fx, 2, 50).unwrap();
        assert_eq!(r.rank(), 2);
        assert!(r.stable());
    }

    #[test]
    fn f3_rank_three_with_relation() {
        let fx = load_fixture(&FixtureSpec::F3).unwrap();
        let r = verify_torsion(&fx, 2, 50).unwrap();
        assert_eq!(r.rank(), 3);
        assert!(r.stable());
        // D1 - D2 - D3 + D4 = 0: every class is involved
        assert_eq!(r.reports[0].relations, vec!["1221".to_string()]);
    }

    #[test]
    fn f3_relation_is_all_ones_after_conjugating_first_section() {
        let mut fx = load_fixture(&FixtureSpec::F3).unwrap();
        for i in [0, 3] {
            let pt = &fx.points[i];
            fx.points[i] = crate::fixture::CurvePoint::from_y(&fx.f, -&pt.y, pt.kappa.clone()).unwrap();
        }
        let r = verify_torsion(&fx, 2, 50).unwrap();
        assert_eq!(r.rank(), 3);
        assert_eq!(r.reports[0].relations, vec!["1111".to_string()]);
    }

    #[test]
    fn f5_and_mestre_u2_ranks() {
        let f5 = verify_torsion(&load_fixture(&FixtureSpec::F5).unwrap(), 2, 50).unwrap();
        assert_eq!((f5.rank(), f5.stable()), (5, true));
        let m = verify_torsion(&load_fixture(&FixtureSpec::MestreU2).unwrap(), 2, 50).unwrap();
        assert_eq!(m.rank(), 4);
        assert_eq!(m.reports[0].relations, vec!["11111".to_string()]);
    }

    #[test]
    fn constructed_f3_sections_sum_to_zero() {
        let r = verify_torsion(&load_fixture(&FixtureSpec::F3Constructed).unwrap(), 2, 50).unwrap();
        assert_eq!(r.rank(), 4);
        assert_eq!(r.reports[0].relations, vec!["11111".to_string()]);
    }

    #[test]
    fn f4_rank_four() {
        let fx = load_fixture(&FixtureSpec::F4).unwrap();
        let r = verify_torsion(&fx, 2, 50).unwrap();
        assert_eq!(r.rank(), 4);
        assert!(r.stable());
    }

    #[test]
    fn good_prime_examples() {
        // t³ + 1 mod 5 = (t + 1)(t² - t + 1): squarefree with a root
        let f = FpPoly::from_i64(5, &[1, 0, 0, 1]);
        assert!(f.is_squarefree() && !f.roots().is_empty());
        let f4 = load_fixture(&FixtureSpec::F4).unwrap();
        // primes dividing the leading coefficient of f4 are rejected
        let lead = f4.f.lead().to_integer();
        for p in [2u64, 3, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73] {
            if (&lead % BigInt::from(p)).is_zero() {
                assert!(good_model(&f4, p).is_err());
            }
        }
        assert!(good_model(&f4, 3).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn cantor_is_associative_and_commutative(i in 0usize..40, j in 0usize..40, k in 0usize..40) {
            // genus 2 model over F_13
            let p = 13;
            let model = to_odd_model(&FpPoly::from_i64(p, &[7, 2, 0, 3, 0, 1]), None).unwrap();
            let pts = affine_points(&model);
            let pick = |n: usize| {
                let a = pts[n % pts.len()];
                let b = pts[(n * 7 + 3) % pts.len()];
                cantor_add(&MumfordDivisor::from_point(p, a.0, a.1), &MumfordDivisor::from_point(p, b.0, b.1), &model)
            };
            let (x, y, z) = (pick(i), pick(j), pick(k));
            prop_assert!(x.is_valid(&model));
            prop_assert_eq!(cantor_add(&x, &y, &model), cantor_add(&y, &x, &model));
            prop_assert_eq!(
                cantor_add(&cantor_add(&x, &y, &model), &z, &model),
                cantor_add(&x, &cantor_add(&y, &z, &model), &model)
            );
        }
    }
}
