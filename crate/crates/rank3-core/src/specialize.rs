//! Specialization `t ↦ Q(√f(t))`: admissible parameters, explicit 3-torsion
//! ideal classes as binary quadratic forms, rank certificates, and a resumable
//! enumeration harness over a JSON-lines certificate store.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::factor::{factor_integer, FactorEffort, FactorHints, FactoredInteger};
use crate::arith::modular::crt_combine;
use crate::arith::rational::{format_rational, height, int_sqrt, rational_sqrt};
use crate::arith::{mod_inverse, parse_rational, rational_valuation, BigRational};
use crate::descent::{build_class, check_hypotheses, real_window, PAdicWindow, TorsionClassData};
use crate::error::{Error, Result};
use crate::fixture::CurveFixture;
use crate::qform::{
    class_group_small, fundamental_discriminant, independent_three_torsion, rank3_certificate, QuadForm,
    Rank3Certificate, CLASS_GROUP_BUDGET,
};

/// A specialization value together with the windows it satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateT {
    pub t: BigRational,
    pub windows: Vec<usize>,
    pub height: BigInt,
}

/// Solves the finite windows as congruences on integers: `t ≡ t_p (mod p^k)`.
/// Windows with `k ≤ 0` and `p`-integral center hold for every integer and are
/// ignored.
pub fn crt_windows(windows: &[PAdicWindow]) -> Result<(BigInt, BigInt)> {
    let mut pairs = Vec::new();
    for w in windows {
        if let PAdicWindow::Finite { p, center, k } = w {
            if !center.is_integer() {
                if center.is_zero() || rational_valuation(center, p)? < 0 {
                    return Err(Error::Unsupported(format!("window center {} is not {p}-integral", format_rational(center))));
                }
                if *k > 0 {
                    return Err(Error::Unsupported("integer stream needs integral centers".into()));
                }
                continue;
            }
            if *k <= 0 {
                continue;
            }
            let m = p.pow(*k as u32);
            pairs.push((center.to_integer().mod_floor(&m), m));
        }
    }
    if pairs.is_empty() {
        return Ok((BigInt::zero(), BigInt::one()));
    }
    crt_combine(&pairs)
}

fn satisfied(windows: &[PAdicWindow], t: &BigRational) -> Option<Vec<usize>> {
    if windows.iter().all(|w| w.contains(t)) {
        Some((0..windows.len()).collect())
    } else {
        None
    }
}

/// How candidates are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StreamPolicy {
    /// Integers `t₀ + M j` from the CRT solution of the finite windows.
    Crt,
    /// All rationals of height at most `B`, ordered by height, kept when they
    /// lie in every window.
    Rational,
}

/// Integer candidates `t₀ + M j` with `|t| ≤ B` in every window, ordered by `|t|`.
pub fn integer_stream(windows: &[PAdicWindow], bound: u64) -> Result<Vec<CandidateT>> {
    let (t0, m) = crt_windows(windows)?;
    let b = BigInt::from(bound);
    // center t₀ in (-M/2, M/2]
    let t0 = if &t0 * 2 > m { t0 - &m } else { t0 };
    let mut out = Vec::new();
    let mut j = BigInt::zero();
    loop {
        let mut any = false;
        let js = if j.is_zero() { vec![j.clone()] } else { vec![-&j, j.clone()] };
        for jj in js {
            let t = &t0 + &m * jj;
            if t.abs() > b {
                continue;
            }
            any = true;
            let tq = BigRational::from_integer(t);
            if let Some(ws) = satisfied(windows, &tq) {
                out.push(CandidateT { height: height(&tq), t: tq, windows: ws });
            }
        }
        if !any && !j.is_zero() {
            break;
        }
        if !any && j.is_zero() && t0.abs() > b {
            break;
        }
        j += 1;
    }
    out.sort_by(|a, b| (&a.height, &a.t).cmp(&(&b.height, &b.t)));
    Ok(out)
}

/// Rationals `a/b` with `max(|a|, b) ≤ B` in every window, ordered by height then value.
pub fn rational_stream(windows: &[PAdicWindow], bound: u64) -> Vec<CandidateT> {
    let bound = bound as i64;
    let mut out = Vec::new();
    for h in 1..=bound {
        let mut level = Vec::new();
        let mut push = |a: i64, b: i64| {
            if b > 0 && a.gcd(&b) == 1 {
                level.push(BigRational::new(a.into(), b.into()));
            }
        };
        for b in 1..=h {
            push(h, b);
            push(-h, b);
        }
        for a in -(h - 1)..=(h - 1) {
            push(a, h);
        }
        level.sort();
        level.dedup();
        for t in level {
            if let Some(ws) = satisfied(windows, &t) {
                out.push(CandidateT { height: height(&t), t, windows: ws });
            }
        }
    }
    out
}

/// Candidates under the chosen policy.
pub fn admissible_stream(windows: &[PAdicWindow], bound: u64, policy: StreamPolicy) -> Result<Vec<CandidateT>> {
    match policy {
        StreamPolicy::Crt => integer_stream(windows, bound),
        StreamPolicy::Rational => Ok(rational_stream(windows, bound)),
    }
}

/// Where enumeration windows come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowSource {
    /// Only the negative real interval of `f` (imaginary fields).
    Real,
    /// The local windows at the exceptional primes and 2, plus the real interval.
    Hypotheses,
}

/// Windows for a fixture; an everywhere-positive `f` yields no real window.
pub fn harness_windows(fx: &CurveFixture, source: WindowSource, effort: &FactorEffort) -> Result<Vec<PAdicWindow>> {
    match source {
        WindowSource::Real => Ok(real_window(&fx.f)?.window.into_iter().collect()),
        WindowSource::Hypotheses => {
            let h = check_hypotheses(fx, 0, effort)?;
            let mut w = h.windows;
            w.extend(h.real.window);
            Ok(w)
        }
    }
}

/// Whether the field data rests on a complete factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Field,
    Order,
}

/// `m = f(t)`, its square class and the discriminant of `Q(√m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldData {
    #[serde(with = "rational_str")]
    pub m: BigRational,
    /// Signed squarefree part (times any unfactored cofactor at order level).
    pub core: BigInt,
    /// `|num m · den m| = square² · |core|`.
    pub square: BigInt,
    pub discriminant: BigInt,
    pub level: Level,
    /// Prime factorization of `|num m · den m|` found, and the unfactored cofactor.
    pub factors: Vec<(BigInt, u32)>,
    pub cofactor: BigInt,
}

/// Why a candidate produced no certificate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Skip {
    ZeroValue,
    SquareValue,
    RealField,
    Degenerate(usize),
    SelfCheck(usize),
    NoForms,
    Unsupported(String),
}

impl std::fmt::Display for Skip {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Skip::ZeroValue => write!(f, "f(t) = 0"),
            Skip::SquareValue => write!(f, "f(t) is a rational square"),
            Skip::RealField => write!(f, "f(t) > 0: real quadratic field, not certified"),
            Skip::Degenerate(i) => write!(f, "X_{}(t) = 0 or a pole", i + 1),
            Skip::SelfCheck(i) => write!(f, "form from section {} failed the cube self-check", i + 1),
            Skip::NoForms => write!(f, "no 3-torsion form survived"),
            Skip::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

fn int_valuation_of(n: &BigInt, p: &BigInt) -> u32 {
    let mut e = 0;
    let mut rest = n.clone();
    while (&rest % p).is_zero() {
        rest /= p;
        e += 1;
    }
    e
}

fn merge_factors(a: &FactoredInteger, b: &FactoredInteger) -> (Vec<(BigInt, u32)>, BigInt) {
    let mut m: BTreeMap<BigInt, u32> = BTreeMap::new();
    for (p, e) in a.factors.iter().chain(&b.factors) {
        *m.entry(p.clone()).or_insert(0) += e;
    }
    (m.into_iter().collect(), &a.cofactor * &b.cofactor)
}

/// Evaluates `f(t)` and extracts the square class and discriminant.
pub fn field_from_t(
    fx: &CurveFixture,
    t: &BigRational,
    hints: Option<&FactorHints>,
    effort: &FactorEffort,
) -> std::result::Result<FieldData, Skip> {
    let m = fx.f.eval(t);
    if m.is_zero() {
        return Err(Skip::ZeroValue);
    }
    let n = m.numer() * m.denom();
    if n.is_positive() && int_sqrt(&n).is_some() {
        return Err(Skip::SquareValue);
    }
    let fa = factor_integer(m.numer(), hints, effort).expect("nonzero");
    let fb = factor_integer(m.denom(), hints, effort).expect("nonzero");
    let (factors, cofactor) = merge_factors(&fa, &fb);
    let fi = FactoredInteger { sign: 1, factors: factors.clone(), cofactor: cofactor.clone() };
    let (square, core_abs) = fi.square_split();
    let core = if m.is_negative() { -core_abs } else { core_abs };
    if core.is_one() {
        return Err(Skip::SquareValue);
    }
    let level = if cofactor.is_one() { Level::Field } else { Level::Order };
    Ok(FieldData { discriminant: fundamental_discriminant(&core), m, core, square, level, factors, cofactor })
}

/// Builds a form for the class of the ideal `𝔞` with `(y_t - Y_i(t)) = 𝔞³` up to
/// the exceptional places, then self-checks that its cube is principal.
///
/// Writing `L(y_t - Y_i(t)) = u + v√core` with coprime integers `u, v`, the norm
/// `N = u² - core v²` is `L² κ X_i(t)³` up to the removed content; `A` collects
/// `p^{ord_p(N)/3}` over the primes (and unfactored cofactors) of `X_i(t)`, `L`
/// and the content that are unramified and balanced (`3 | ord_p(N)`), and
/// `√core ≡ -u/v (mod A)` fixes the middle coefficient. Unbalanced primes are
/// exceptional for this `t`; if dropping them leaves a class of order 3·2^j the
/// 2-power part is removed, otherwise the candidate form is rejected.
pub fn ideal_class_from_point(
    class: &TorsionClassData,
    t: &BigRational,
    field: &FieldData,
    effort: &FactorEffort,
) -> std::result::Result<QuadForm, Skip> {
    let i = class.index;
    let (x, y) = class.specialize(t).ok_or(Skip::Degenerate(i))?;
    if x.is_zero() {
        return Err(Skip::Degenerate(i));
    }
    let r = rational_sqrt(&(&field.m / BigRational::from_integer(field.core.clone()))).ok_or(Skip::SelfCheck(i))?;
    let l = r.denom().lcm(y.denom());
    let lq = BigRational::from_integer(l.clone());
    let mut u = (-&y * &lq).to_integer();
    let mut v = (&r * &lq).to_integer();
    let g = u.gcd(&v);
    u /= &g;
    v /= &g;
    let core = &field.core;
    let norm = &u * &u - core * &v * &v;
    if norm.is_zero() {
        return Err(Skip::Degenerate(i));
    }
    // atoms: primes (and unfactored cofactors) of X(t), L and g
    let mut atoms: BTreeSet<BigInt> = BTreeSet::new();
    for n in [x.numer(), x.denom(), &l, &g] {
        let fac = factor_integer(n, None, effort).expect("nonzero");
        atoms.extend(fac.factors.into_iter().map(|(p, _)| p));
        if !fac.cofactor.is_one() {
            atoms.insert(fac.cofactor);
        }
    }
    let d = &field.discriminant;
    let two = BigInt::from(2);
    let mut a = BigInt::one();
    // when core ≡ 1 (mod 4) and u, v are both odd, u + v√core = 2β with β
    // integral, and the rational factor 2 is principal: count 2 in N(β)
    let halved = d.is_odd() && u.is_odd() && v.is_odd();
    for p in atoms {
        let mut e = int_valuation_of(&norm, &p);
        if p == two && halved {
            e -= 2;
        }
        if e == 0 || !e.is_multiple_of(3) {
            continue;
        }
        if p == two {
            // only a split 2 (D ≡ 1 mod 8) carries a non-trivial odd-order part
            if d.mod_floor(&BigInt::from(8)) == BigInt::one() {
                a *= two.pow(e / 3);
            }
        } else if p.gcd(core).is_one() {
            a *= p.pow(e / 3);
        }
    }
    let form = if a.is_one() {
        QuadForm::principal(d)
    } else {
        // √core ≡ -u/v at the prime above each p | A dividing u + v√core
        let k2 = a.trailing_zeros().unwrap_or(0);
        let a_odd: BigInt = &a >> k2;
        let two_a = &a * 2u32;
        let b = if d.is_even() {
            let c: BigInt = (-&u * mod_inverse(&v, &a).map_err(|_| Skip::SelfCheck(i))?).mod_floor(&a);
            (&c * 2u32).mod_floor(&two_a)
        } else {
            // B odd, and B ≡ √core (mod 2^{k2+1}) at the chosen prime above 2
            let m2 = BigInt::one() << (k2 + 1);
            let c2: BigInt = if k2 == 0 {
                BigInt::one()
            } else {
                (-&u * mod_inverse(&v, &m2).map_err(|_| Skip::SelfCheck(i))?).mod_floor(&m2)
            };
            let mut pairs = vec![(c2, m2)];
            if !a_odd.is_one() {
                let c: BigInt = (-&u * mod_inverse(&v, &a_odd).map_err(|_| Skip::SelfCheck(i))?).mod_floor(&a_odd);
                pairs.push((c, a_odd));
            }
            crt_combine(&pairs).map_err(|_| Skip::SelfCheck(i))?.0
        };
        let num: BigInt = &b * &b - d;
        let four_a: BigInt = &a * 4u32;
        if !(&num % &four_a).is_zero() {
            return Err(Skip::SelfCheck(i));
        }
        QuadForm::new(a, b, num / four_a)
    };
    let form = form.reduce().map_err(|_| Skip::SelfCheck(i))?;
    if form.pow(3).is_principal() {
        return Ok(form);
    }
    // 2-power torsion picked up at the excluded places dies under 2-power
    // exponents, while a 3-torsion class survives up to sign
    for k in [2u64, 4, 8, 16] {
        let g = form.pow(k);
        if g.pow(3).is_principal() {
            return Ok(g);
        }
    }
    Err(Skip::SelfCheck(i))
}

/// A self-contained rank certificate for one specialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub fixture: String,
    #[serde(with = "rational_str")]
    pub t: BigRational,
    pub field: FieldData,
    /// Forms with the index of the section they came from.
    pub forms: Vec<(usize, QuadForm)>,
    pub transcript: Rank3Certificate,
    pub rank: u32,
    pub skipped_sections: Vec<Skip>,
    pub timestamp: u64,
}

impl RankCertificate {
    /// Re-verifies the certificate from its own content: factorization evidence,
    /// squarefree part and discriminant, form discriminants, cube-principality
    /// and every non-principality check.
    pub fn verify(&self) -> bool {
        let f = &self.field;
        let n = f.m.numer() * f.m.denom();
        let evidence = f.factors.iter().fold(f.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e));
        let core_ok = {
            let fi = FactoredInteger { sign: 1, factors: f.factors.clone(), cofactor: f.cofactor.clone() };
            let (s, c) = fi.square_split();
            s == f.square && c == f.core.abs() && (f.core.is_negative() == f.m.is_negative())
        };
        let primes_ok = f.factors.iter().all(|(p, _)| crate::arith::is_probable_prime(p));
        let level_ok = (f.level == Level::Field) == f.cofactor.is_one();
        evidence == n.abs()
            && core_ok
            && primes_ok
            && level_ok
            && f.discriminant == fundamental_discriminant(&f.core)
            && self.transcript.discriminant == f.discriminant
            && self.transcript.forms.len() as u32 == self.rank
            && self.transcript.verify()
    }

    /// `class_group_small(D)` 3-rank dominates the certified rank (small `|D|` only).
    pub fn domination_check(&self, limit: u64) -> Option<bool> {
        let d: i64 = (&self.field.discriminant).try_into().ok()?;
        if d.unsigned_abs() >= limit {
            return None;
        }
        let g = class_group_small(d, CLASS_GROUP_BUDGET).ok()?;
        Some(g.three_rank >= self.rank)
    }
}

/// Certifies `rk_3 Cl ≥ r` for `Q(√f(t))` from the fixture's sections.
pub fn certify_field(
    fx: &CurveFixture,
    t: &BigRational,
    hints: Option<&FactorHints>,
    effort: &FactorEffort,
) -> std::result::Result<RankCertificate, Skip> {
    let deg = fx.degree();
    if deg.is_multiple_of(2) && !deg.is_multiple_of(6) {
        return Err(Skip::Unsupported(format!("degree {deg}")));
    }
    let field = field_from_t(fx, t, hints, effort)?;
    if !field.core.is_negative() {
        return Err(Skip::RealField);
    }
    let mut forms = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..fx.points.len() {
        let class = build_class(fx, i).map_err(|e| Skip::Unsupported(e.to_string()))?;
        match ideal_class_from_point(&class, t, &field, effort) {
            Ok(f) => forms.push((i, f)),
            Err(s) => skipped.push(s),
        }
    }
    let plain: Vec<QuadForm> = forms.iter().map(|(_, f)| f.clone()).collect();
    let basis = independent_three_torsion(&field.discriminant, &plain);
    if basis.is_empty() {
        return Err(Skip::NoForms);
    }
    let chosen: Vec<(usize, QuadForm)> = basis.iter().map(|&j| forms[j].clone()).collect();
    let transcript = rank3_certificate(&field.discriminant, &chosen.iter().map(|(_, f)| f.clone()).collect::<Vec<_>>())
        .map_err(|_| Skip::NoForms)?;
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(RankCertificate {
        fixture: fx.label.clone(),
        t: t.clone(),
        rank: transcript.rank,
        field,
        forms: chosen,
        transcript,
        skipped_sections: skipped,
        timestamp,
    })
}

/// Serde helper storing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::*;
    pub fn serialize<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        parse_rational(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Append-only JSON-lines certificate store with discriminant deduplication.
#[derive(Debug)]
pub struct CertificateStore {
    path: PathBuf,
    seen: BTreeSet<BigInt>,
}

impl CertificateStore {
    /// Opens (creating if needed) a store and loads the discriminants already present.
    pub fn open(path: &Path) -> Result<Self> {
        let mut seen = BTreeSet::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let c: RankCertificate = serde_json::from_str(&line)?;
                seen.insert(c.field.discriminant);
            }
        } else {
            File::create(path)?;
        }
        Ok(CertificateStore { path: path.to_path_buf(), seen })
    }

    pub fn contains(&self, d: &BigInt) -> bool {
        self.seen.contains(d)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    /// Appends unless the discriminant is already stored; returns whether it was new.
    pub fn insert(&mut self, cert: &RankCertificate) -> Result<bool> {
        if !self.seen.insert(cert.field.discriminant.clone()) {
            return Ok(false);
        }
        let mut f = OpenOptions::new().append(true).open(&self.path)?;
        writeln!(f, "{}", serde_json::to_string(cert)?)?;
        Ok(true)
    }

    /// Every stored certificate.
    pub fn load_all(path: &Path) -> Result<Vec<RankCertificate>> {
        let mut out = Vec::new();
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            if !line.trim().is_empty() {
                out.push(serde_json::from_str(&line)?);
            }
        }
        Ok(out)
    }
}

/// Resume cursor: last processed candidate index per `(fixture, B)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cursor {
    pub positions: BTreeMap<String, usize>,
}

impl Cursor {
    fn key(fixture: &str, bound: u64) -> String {
        format!("{fixture}@{bound}")
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Cursor::default());
        }
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn get(&self, fixture: &str, bound: u64) -> usize {
        self.positions.get(&Self::key(fixture, bound)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, fixture: &str, bound: u64, pos: usize) {
        self.positions.insert(Self::key(fixture, bound), pos);
    }
}

/// Certificates with `|D|` below this bound are cross-checked against the
/// brute-force class group.
pub const DOMINATION_LIMIT: u64 = 10_000_000;

/// Settings for [`enumeration_harness`].
#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub bound: u64,
    pub budget: Duration,
    pub windows: Vec<PAdicWindow>,
    pub policy: StreamPolicy,
    pub effort: FactorEffort,
    pub hints: Option<FactorHints>,
    pub cursor: Option<PathBuf>,
    pub batch: usize,
}

/// Counts produced by a harness run. Order-level outcomes are near misses:
/// forms certified against an order whose discriminant rests on an unfactored
/// cofactor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessSummary {
    pub fixture: String,
    pub bound: u64,
    pub candidates: usize,
    pub processed: usize,
    pub resumed_from: usize,
    pub completed: bool,
    pub new_certificates: usize,
    pub duplicates: usize,
    pub skips: BTreeMap<String, usize>,
    /// Distinct field-level discriminants in the store with rank ≥ r, per r.
    pub fields_by_rank: BTreeMap<u32, usize>,
    /// Field-level certificates per decade of `|D|` (`floor(log10 |D|)`), split by rank.
    pub fields_by_decade: BTreeMap<u32, BTreeMap<u32, usize>>,
    /// Stored certificates with `|D|` below the domination limit, and those whose
    /// brute-force 3-rank fell short of the certified rank.
    pub domination_checked: usize,
    pub domination_failures: Vec<String>,
    pub near_misses: Vec<NearMiss>,
}

/// An order-level certificate: ranks are certified only for the order whose
/// discriminant includes the unfactored cofactor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMiss {
    pub t: String,
    pub rank: u32,
    pub cofactor_digits: usize,
}

fn decade(d: &BigInt) -> u32 {
    d.abs().to_string().len() as u32 - 1
}

/// Runs the admissible stream through [`certify_field`] under a wall-clock budget.
pub fn enumeration_harness(fx: &CurveFixture, cfg: &HarnessConfig, store: &mut CertificateStore) -> Result<HarnessSummary> {
    let start = Instant::now();
    let stream = admissible_stream(&cfg.windows, cfg.bound, cfg.policy)?;
    let mut cursor = match &cfg.cursor {
        Some(p) => Cursor::load(p)?,
        None => Cursor::default(),
    };
    let from = cursor.get(&fx.label, cfg.bound).min(stream.len());
    let mut summary = HarnessSummary {
        fixture: fx.label.clone(),
        bound: cfg.bound,
        candidates: stream.len(),
        resumed_from: from,
        ..Default::default()
    };
    let mut pos = from;
    let batch = cfg.batch.max(1);
    while pos < stream.len() {
        if start.elapsed() > cfg.budget {
            break;
        }
        let end = (pos + batch).min(stream.len());
        let results: Vec<_> = stream[pos..end]
            .par_iter()
            .map(|c| certify_field(fx, &c.t, cfg.hints.as_ref(), &cfg.effort))
            .collect();
        for (c, r) in stream[pos..end].iter().zip(results) {
            match r {
                Ok(cert) if cert.field.level == Level::Order => summary.near_misses.push(NearMiss {
                    t: format_rational(&c.t),
                    rank: cert.rank,
                    cofactor_digits: cert.field.cofactor.to_string().len(),
                }),
                Ok(cert) => {
                    if store.insert(&cert)? {
                        summary.new_certificates += 1;
                    } else {
                        summary.duplicates += 1;
                    }
                }
                Err(s) => {
                    let key = match s {
                        Skip::Degenerate(_) => "degenerate".to_string(),
                        Skip::SelfCheck(_) => "self-check".to_string(),
                        other => other.to_string(),
                    };
                    *summary.skips.entry(key).or_insert(0) += 1;
                }
            }
        }
        summary.processed += end - pos;
        pos = end;
        if let Some(p) = &cfg.cursor {
            cursor.set(&fx.label, cfg.bound, pos);
            cursor.save(p)?;
        }
    }
    summary.completed = pos == stream.len();
    for cert in CertificateStore::load_all(&store.path)? {
        if cert.fixture != fx.label || cert.field.level != Level::Field {
            continue;
        }
        for r in 1..=cert.rank {
            *summary.fields_by_rank.entry(r).or_insert(0) += 1;
        }
        *summary
            .fields_by_decade
            .entry(decade(&cert.field.discriminant))
            .or_default()
            .entry(cert.rank)
            .or_insert(0) += 1;
        match cert.domination_check(DOMINATION_LIMIT) {
            Some(true) => summary.domination_checked += 1,
            Some(false) => {
                summary.domination_checked += 1;
                summary.domination_failures.push(cert.field.discriminant.to_string());
            }
            None => {}
        }
    }
    Ok(summary)
}
