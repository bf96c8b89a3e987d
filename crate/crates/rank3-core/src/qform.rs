//! Binary quadratic forms: reduction, composition, small class groups and
//! 3-rank certificates.
//!
//! Definite forms (negative discriminant) model ideal classes of imaginary
//! quadratic orders. A small indefinite toolkit (reduction cycles) is included
//! only for the narrow class groups needed by the reflection check.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The form `a x² + b xy + c y²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm { a: a.into(), b: b.into(), c: c.into() }
    }

    /// Form with given `a`, `b` and discriminant `d`; requires `4a | b² - d`.
    pub fn from_ab(a: BigInt, b: BigInt, d: &BigInt) -> Result<Self> {
        let num: BigInt = &b * &b - d;
        let four_a: BigInt = &a * 4;
        if !(&num % &four_a).is_zero() {
            return Err(Error::DiscriminantMismatch(format!("b^2 - D not divisible by 4a for a={a}"), d.to_string()));
        }
        Ok(QuadForm { c: num / four_a, a, b })
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// Principal form of discriminant `d` (`d ≡ 0, 1 mod 4`).
    pub fn principal(d: &BigInt) -> Self {
        let b: BigInt = d.mod_floor(&BigInt::from(2));
        let c = (&b - d) / 4;
        QuadForm { a: BigInt::one(), b, c }
    }

    pub fn inverse(&self) -> Self {
        QuadForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }
    }

    /// Reduced form of a positive definite form: `|b| ≤ a ≤ c`, `b ≥ 0` if `|b| = a` or `a = c`.
    pub fn reduce(&self) -> Result<Self> {
        if !self.discriminant().is_negative() {
            return Err(Error::Unsupported("reduction of indefinite forms".into()));
        }
        if !self.a.is_positive() {
            return Err(Error::Unsupported("negative definite form".into()));
        }
        Ok(self.reduce_unchecked())
    }

    fn reduce_unchecked(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a.clone(), self.b.clone(), self.c.clone());
        loop {
            let two_a = &a * 2;
            if !(-&a < b && b <= a) {
                // translate b into (-a, a]
                let k = (&a - &b).div_floor(&two_a);
                let nb = &b + &two_a * &k;
                c = &a * &k * &k + &b * &k + &c;
                b = nb;
                continue;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b.is_negative() {
                b = -b;
            }
            return QuadForm { a, b, c };
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a
            && self.a <= self.c
            && (!(self.b.abs() == self.a || self.a == self.c) || !self.b.is_negative())
    }

    pub fn is_principal(&self) -> bool {
        let r = self.reduce_unchecked();
        r.a.is_one()
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &QuadForm) -> Result<Self> {
        let d = self.discriminant();
        let d2 = other.discriminant();
        if d != d2 {
            return Err(Error::DiscriminantMismatch(d.to_string(), d2.to_string()));
        }
        Ok(compose_raw(self, other, &d).reduce_unchecked())
    }

    pub fn square(&self) -> Self {
        self.compose(self).expect("same discriminant")
    }

    /// `self^n` for `n ≥ 0`.
    pub fn pow(&self, n: u64) -> Self {
        let d = self.discriminant();
        let mut r = QuadForm::principal(&d);
        let mut base = self.reduce_unchecked();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = compose_raw(&r, &base, &d).reduce_unchecked();
            }
            base = compose_raw(&base, &base, &d).reduce_unchecked();
            n >>= 1;
        }
        r
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.a.to_i64().unwrap(), self.b.to_i64().unwrap(), self.c.to_i64().unwrap())
    }
}

/// Composition without reduction; valid for any nonsquare discriminant.
fn compose_raw(f1: &QuadForm, f2: &QuadForm, d: &BigInt) -> QuadForm {
    let (a1, b1) = (&f1.a, &f1.b);
    let (a2, b2) = (&f2.a, &f2.b);
    let e = (b1 + b2) / 2;
    let g1 = a1.extended_gcd(a2);
    let g2 = g1.gcd.extended_gcd(&e);
    // g2 = h*(x a1 + y a2) + k e
    let (x, y, z) = (&g2.x * &g1.x, &g2.x * &g1.y, g2.y.clone());
    let g = g2.gcd;
    let a3 = a1 * a2 / (&g * &g);
    let big_b: BigInt = (&x * a1 * b2 + &y * a2 * b1 + &z * ((b1 * b2 + d) / 2)) / &g;
    let b3 = big_b.mod_floor(&(&a3 * 2));
    let c3 = (&b3 * &b3 - d) / (&a3 * 4);
    QuadForm { a: a3, b: b3, c: c3 }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl FromStr for QuadForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("not a form triple: {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let p = |x: &str| x.parse::<BigInt>().map_err(|_| bad());
        Ok(QuadForm { a: p(parts[0])?, b: p(parts[1])?, c: p(parts[2])? })
    }
}

impl Serialize for QuadForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Fundamental discriminant of `Q(√m)` for squarefree `m ≠ 1`.
pub fn fundamental_discriminant(squarefree: &BigInt) -> BigInt {
    if squarefree.mod_floor(&BigInt::from(4)).is_one() {
        squarefree.clone()
    } else {
        squarefree * 4
    }
}

/// Whether `d` is a fundamental discriminant (trial division; small `d` only).
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let m4 = d.rem_euclid(4);
    let core = if m4 == 1 {
        d
    } else if m4 == 0 {
        let q = d / 4;
        if !matches!(q.rem_euclid(4), 2 | 3) {
            return false;
        }
        q
    } else {
        return false;
    };
    let n = core.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Brute-force class group of a negative discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallClassGroup {
    pub discriminant: BigInt,
    pub forms: Vec<QuadForm>,
    /// Invariant factors `d_1 | d_2 | ...` (all > 1).
    pub invariants: Vec<u64>,
    pub three_rank: u32,
}

impl SmallClassGroup {
    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    /// 3-rank from counting classes whose cube is principal.
    pub fn three_rank_by_counting(&self) -> u32 {
        let n = self.forms.iter().filter(|f| f.pow(3).is_principal()).count();
        let mut r = 0;
        let mut m = 1;
        while m < n {
            m *= 3;
            r += 1;
        }
        assert_eq!(m, n, "3-torsion count is not a power of 3");
        r
    }

    /// Checks closure, identity, inverses and commutativity on every pair of
    /// classes, and associativity on every triple `(x, y, z)` with `z` running
    /// over the first `assoc_width` classes.
    pub fn check_axioms(&self, assoc_width: usize) -> std::result::Result<(), String> {
        let e = QuadForm::principal(&self.discriminant);
        let members: std::collections::HashSet<&QuadForm> = self.forms.iter().collect();
        let op = |x: &QuadForm, y: &QuadForm| x.compose(y).map_err(|err| err.to_string());
        for x in &self.forms {
            if op(x, &e)? != *x {
                return Err(format!("{x:?} * 1 != {x:?}"));
            }
            if !op(x, &x.inverse())?.is_principal() {
                return Err(format!("{x:?} * {x:?}^-1 is not principal"));
            }
            for y in &self.forms {
                let xy = op(x, y)?;
                if !members.contains(&xy) {
                    return Err(format!("{x:?} * {y:?} = {xy:?} is not a listed class"));
                }
                if xy != op(y, x)? {
                    return Err(format!("{x:?}, {y:?} do not commute"));
                }
                for z in self.forms.iter().take(assoc_width) {
                    if op(&xy, z)? != op(x, &op(y, z)?)? {
                        return Err(format!("({x:?}, {y:?}, {z:?}) not associative"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Default discriminant budget for [`class_group_small`].
pub const CLASS_GROUP_BUDGET: u64 = 100_000_000;

/// Reduced primitive forms of a negative discriminant, sorted by `(a, b)`.
pub fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let n = d.unsigned_abs() as i64;
    let amax = ((n / 3) as u64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a in 1..=amax {
        if 3 * a * a > n {
            break;
        }
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && (a == c)) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push(QuadForm::new(a, b, c));
        }
    }
    out
}

/// Class group of a negative discriminant by enumeration of reduced forms.
///
/// The structure comes from growing the group one generator at a time, recording
/// the relation that closes each cyclic extension, and diagonalising the
/// relation matrix.
pub fn class_group_small(d: i64, budget: u64) -> Result<SmallClassGroup> {
    if d >= 0 {
        return Err(Error::Unsupported("class groups of positive discriminants".into()));
    }
    if !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::Unsupported(format!("{d} is not a discriminant")));
    }
    if d.unsigned_abs() > budget {
        return Err(Error::Budget(format!("|D| = {} exceeds {budget}", d.unsigned_abs())));
    }
    let forms = reduced_forms(d);
    let db = BigInt::from(d);
    let identity = QuadForm::principal(&db);
    let op = |x: &QuadForm, y: &QuadForm| x.compose(y).unwrap();
    let invariants = abelian_invariants(&forms, &identity, op);
    let three_rank = invariants.iter().filter(|&&k| k % 3 == 0).count() as u32;
    Ok(SmallClassGroup { discriminant: db, forms, invariants, three_rank })
}

/// Invariant factors of a finite abelian group given by all its elements.
pub fn abelian_invariants<T, F>(elements: &[T], identity: &T, op: F) -> Vec<u64>
where
    T: Clone + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    let mut coords: HashMap<T, Vec<i64>> = HashMap::new();
    coords.insert(identity.clone(), Vec::new());
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for x in elements {
        if coords.contains_key(x) {
            continue;
        }
        let k = relations.len();
        // smallest n with n·x in the current subgroup
        let mut y = x.clone();
        let mut n = 1i64;
        while !coords.contains_key(&y) {
            y = op(&y, x);
            n += 1;
        }
        let mut rel = coords[&y].clone();
        rel.resize(k, 0);
        let mut rel: Vec<i64> = rel.into_iter().map(|c| -c).collect();
        rel.push(n);
        let old: Vec<(T, Vec<i64>)> = coords.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        let mut power = x.clone();
        for j in 1..n {
            for (h, c) in &old {
                let mut v = c.clone();
                v.resize(k, 0);
                v.push(j);
                coords.insert(op(h, &power), v);
            }
            power = op(&power, x);
        }
        for r in relations.iter_mut() {
            r.push(0);
        }
        relations.push(rel);
    }
    let mut diag = smith_diagonal(relations);
    diag.retain(|&d| d > 1);
    diag.sort_unstable();
    diag
}

/// Diagonal of the Smith normal form of a square integer matrix.
#[allow(clippy::needless_range_loop)]
fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<u64> {
    let n = m.len();
    for t in 0..n {
        loop {
            // pivot: smallest nonzero absolute value in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return finish_diag(&m) };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..n {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    for i in t..n {
                        m[i][j] -= q * m[i][t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition on the remaining block
            let mut fixed = true;
            'outer: for i in t + 1..n {
                for j in t + 1..n {
                    if m[i][j] % p != 0 {
                        for k in t..n {
                            m[t][k] += m[i][k];
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    finish_diag(&m)
}

fn finish_diag(m: &[Vec<i64>]) -> Vec<u64> {
    (0..m.len()).map(|i| m[i][i].unsigned_abs()).collect()
}

/// Transcript of a successful 3-rank certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank3Certificate {
    pub discriminant: BigInt,
    pub forms: Vec<QuadForm>,
    /// Every nonzero combination up to sign, as ternary strings, with the reduced product.
    pub combinations: Vec<(String, QuadForm)>,
    pub rank: u32,
}

/// Failure of [`rank3_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateFailure {
    WrongDiscriminant(usize),
    NotPrimitive(usize),
    CubeNotPrincipal(usize),
    /// A combination that is principal.
    Relation(Vec<u8>),
}

/// Nonzero vectors of `(Z/3)^r` whose first nonzero entry is 1.
pub fn ternary_combinations(r: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let total = 3usize.pow(r as u32);
    for code in 1..total {
        let mut v = Vec::with_capacity(r);
        let mut c = code;
        for _ in 0..r {
            v.push((c % 3) as u8);
            c /= 3;
        }
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

pub fn ternary_string(v: &[u8]) -> String {
    v.iter().map(|d| char::from(b'0' + d)).collect()
}

/// Certifies `rk_3 Cl(D) ≥ r` from explicit forms.
pub fn rank3_certificate(d: &BigInt, forms: &[QuadForm]) -> std::result::Result<Rank3Certificate, CertificateFailure> {
    let mut reduced = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        if &f.discriminant() != d {
            return Err(CertificateFailure::WrongDiscriminant(i));
        }
        if !f.is_primitive() {
            return Err(CertificateFailure::NotPrimitive(i));
        }
        let r = f.reduce_unchecked();
        if !r.pow(3).is_principal() {
            return Err(CertificateFailure::CubeNotPrincipal(i));
        }
        reduced.push(r);
    }
    let squares: Vec<QuadForm> = reduced.iter().map(|f| f.square()).collect();
    let mut combinations = Vec::new();
    for c in ternary_combinations(reduced.len()) {
        let mut acc = QuadForm::principal(d);
        for (i, &ci) in c.iter().enumerate() {
            match ci {
                1 => acc = acc.compose(&reduced[i]).unwrap(),
                2 => acc = acc.compose(&squares[i]).unwrap(),
                _ => {}
            }
        }
        if acc.is_principal() {
            return Err(CertificateFailure::Relation(c));
        }
        combinations.push((ternary_string(&c), acc));
    }
    Ok(Rank3Certificate { discriminant: d.clone(), forms: reduced, rank: forms.len() as u32, combinations })
}

impl Rank3Certificate {
    /// Recomputes every check from the stored forms.
    pub fn verify(&self) -> bool {
        match rank3_certificate(&self.discriminant, &self.forms) {
            Ok(c) => c.rank == self.rank && c.combinations == self.combinations,
            Err(_) => false,
        }
    }
}

/// Largest independent subfamily of 3-torsion classes among `forms`, as indices.
///
/// Forms whose cube is not principal are ignored. The span is tracked
/// explicitly, so the result is exact.
pub fn independent_three_torsion(d: &BigInt, forms: &[QuadForm]) -> Vec<usize> {
    let mut span: Vec<QuadForm> = vec![QuadForm::principal(d)];
    let mut chosen = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        if &f.discriminant() != d || !f.is_primitive() {
            continue;
        }
        let f = f.reduce_unchecked();
        if !f.pow(3).is_principal() || span.contains(&f) {
            continue;
        }
        let f2 = f.square();
        let mut next = span.clone();
        for s in &span {
            next.push(s.compose(&f).unwrap());
            next.push(s.compose(&f2).unwrap());
        }
        span = next;
        chosen.push(i);
    }
    chosen
}

// ---------------------------------------------------------------------------
// Indefinite forms (small positive discriminants only).

/// Reduced indefinite form test: `0 < b < √Δ`, `√Δ - b < 2|a| < √Δ + b`.
fn indefinite_is_reduced(a: i64, b: i64, s: i64) -> bool {
    b > 0 && b <= s && 2 * a.abs() > s - b && 2 * a.abs() <= s + b
}

/// One step of the reduction operator on `(a, b, c)`.
fn rho(f: (i64, i64, i64), delta: i64, s: i64) -> (i64, i64, i64) {
    let (_, b, c) = f;
    let cc = c.abs();
    let two_c = 2 * cc;
    // b' ≡ -b (mod 2c) in the appropriate window
    let nb = if cc > s {
        let mut nb = (-b).rem_euclid(two_c);
        if nb > cc {
            nb -= two_c;
        }
        nb
    } else {
        // s + 1 - 2|c| ≤ b' ≤ s
        let lo = s + 1 - two_c;
        lo + (-b - lo).rem_euclid(two_c)
    };
    (c, nb, (nb * nb - delta) / (4 * c))
}

fn indefinite_reduce(mut f: (i64, i64, i64), delta: i64, s: i64) -> (i64, i64, i64) {
    while !indefinite_is_reduced(f.0, f.1, s) {
        f = rho(f, delta, s);
    }
    f
}

/// Narrow class group of a positive nonsquare discriminant, as ρ-cycles.
pub struct NarrowClassGroup {
    pub discriminant: i64,
    cycle_of: HashMap<(i64, i64, i64), usize>,
    representatives: Vec<(i64, i64, i64)>,
    s: i64,
}

impl NarrowClassGroup {
    pub fn new(delta: i64) -> Result<Self> {
        if delta <= 0 || !matches!(delta.rem_euclid(4), 0 | 1) {
            return Err(Error::Unsupported(format!("{delta} is not a positive discriminant")));
        }
        let s = (delta as u64).sqrt() as i64;
        if s * s == delta {
            return Err(Error::Unsupported("square discriminant".into()));
        }
        let mut reduced = Vec::new();
        for b in 1..=s {
            if (b - delta).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - delta;
            for a_abs in 1..=(s + b) / 2 {
                if 2 * a_abs <= s - b || num % (4 * a_abs) != 0 {
                    continue;
                }
                for a in [a_abs, -a_abs] {
                    let c = num / (4 * a);
                    if a.gcd(&b).gcd(&c) == 1 {
                        reduced.push((a, b, c));
                    }
                }
            }
        }
        reduced.sort_unstable();
        let mut cycle_of = HashMap::new();
        let mut representatives = Vec::new();
        for f in reduced {
            if cycle_of.contains_key(&f) {
                continue;
            }
            let id = representatives.len();
            representatives.push(f);
            let mut g = f;
            loop {
                cycle_of.insert(g, id);
                g = rho(g, delta, s);
                if g == f {
                    break;
                }
            }
        }
        Ok(NarrowClassGroup { discriminant: delta, cycle_of, representatives, s })
    }

    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }

    fn class_of(&self, f: (i64, i64, i64)) -> usize {
        self.cycle_of[&indefinite_reduce(f, self.discriminant, self.s)]
    }

    fn compose(&self, x: (i64, i64, i64), y: (i64, i64, i64)) -> (i64, i64, i64) {
        let d = BigInt::from(self.discriminant);
        let r = compose_raw(&QuadForm::new(x.0, x.1, x.2), &QuadForm::new(y.0, y.1, y.2), &d);
        let f = (r.a.to_i64().unwrap(), r.b.to_i64().unwrap(), r.c.to_i64().unwrap());
        indefinite_reduce(f, self.discriminant, self.s)
    }

    /// 3-rank via `#{C : C³ = 1} = 3^rank` (equal for narrow and wide groups).
    pub fn three_rank(&self) -> u32 {
        let delta = self.discriminant;
        let b0 = delta.rem_euclid(2);
        let principal = self.class_of((1, b0, (b0 - delta) / 4));
        let n = self
            .representatives
            .iter()
            .filter(|&&f| {
                let f3 = self.compose(self.compose(f, f), f);
                self.cycle_of[&f3] == principal
            })
            .count();
        let mut r = 0;
        let mut m = 1;
        while m < n {
            m *= 3;
            r += 1;
        }
        assert_eq!(m, n, "3-torsion count is not a power of 3");
        r
    }
}

/// Squarefree kernel of a small nonzero integer (sign kept).
fn squarefree_kernel(n: i64) -> i64 {
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut out = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out *= m;
    sign * out as i64
}

fn fundamental_of(n: i64) -> i64 {
    let k = squarefree_kernel(n);
    if k.rem_euclid(4) == 1 {
        k
    } else {
        4 * k
    }
}

/// Outcome of the reflection check for one `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScholzReport {
    pub d: i64,
    pub real_discriminant: i64,
    pub imaginary_discriminant: i64,
    pub real_rank: u32,
    pub imaginary_rank: u32,
    pub difference: i64,
}

/// Compares the 3-ranks of `Q(√d)` and `Q(√-3d)`; the difference must lie in {0, 1}.
pub fn scholz_check(d: i64, budget: u64) -> Result<ScholzReport> {
    if d <= 1 || squarefree_kernel(d) != d {
        return Err(Error::Unsupported(format!("{d} is not a squarefree integer > 1")));
    }
    let real = fundamental_of(d);
    let imag = fundamental_of(-3 * d);
    if real.unsigned_abs() > budget || imag.unsigned_abs() > budget {
        return Err(Error::Budget(format!("discriminants of d = {d} exceed {budget}")));
    }
    let real_rank = NarrowClassGroup::new(real)?.three_rank();
    let imaginary_rank = class_group_small(imag, budget)?.three_rank;
    let difference = imaginary_rank as i64 - real_rank as i64;
    Ok(ScholzReport { d, real_discriminant: real, imaginary_discriminant: imag, real_rank, imaginary_rank, difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(a, b, c)
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(f(1, 0, 5).reduce().unwrap(), f(1, 0, 5));
        assert_eq!(f(6, 7, 3).reduce().unwrap(), f(2, 1, 3));
        assert_eq!(f(6, 7, 3).discriminant(), BigInt::from(-23));
        assert_eq!(f(3, -3, 5).reduce().unwrap(), f(3, 3, 5));
        assert_eq!(f(2, -1, 2).reduce().unwrap(), f(2, 1, 2));
        assert!(f(1, 3, 1).reduce().is_err());
    }

    #[test]
    fn composition_d23() {
        let g = f(2, 1, 3);
        assert_eq!(g.square(), f(2, -1, 3));
        assert_eq!(g.pow(3), f(1, 1, 6));
        assert!(g.compose(&g.inverse()).unwrap().is_principal());
        assert!(f(1, 1, 6).is_principal());
        assert!(!g.is_principal());
        assert!(g.compose(&f(1, 0, 5)).is_err());
    }

    #[test]
    fn small_groups() {
        let g = class_group_small(-23, CLASS_GROUP_BUDGET).unwrap();
        assert_eq!(g.class_number(), 3);
        assert_eq!(g.invariants, vec![3]);
        assert_eq!(g.three_rank, 1);
        let g = class_group_small(-4, CLASS_GROUP_BUDGET).unwrap();
        assert_eq!((g.class_number(), g.three_rank), (1, 0));
        // D = -3299: both methods must agree
        let g = class_group_small(-3299, CLASS_GROUP_BUDGET).unwrap();
        assert_eq!(g.three_rank, g.three_rank_by_counting());
        assert_eq!(g.class_number() as u64, g.invariants.iter().product::<u64>());
        assert!(class_group_small(5, CLASS_GROUP_BUDGET).is_err());
        assert!(class_group_small(-10, 5).is_err());
    }

    #[test]
    fn known_class_numbers() {
        // standard small class numbers: h(-3)=1, h(-15)=2, h(-20)=2, h(-47)=5, h(-71)=7, h(-3299)=27
        for (d, h) in [(-3, 1), (-15, 2), (-20, 2), (-47, 5), (-71, 7), (-3299, 27), (-4027, 9)] {
            assert_eq!(class_group_small(d, CLASS_GROUP_BUDGET).unwrap().class_number(), h, "D={d}");
        }
    }

    #[test]
    fn elementary_divisors_noncyclic() {
        // D = -4027 has class group (Z/3)^2, D = -3299 has Z/3 x Z/9
        assert_eq!(class_group_small(-4027, CLASS_GROUP_BUDGET).unwrap().invariants, vec![3, 3]);
        assert_eq!(class_group_small(-3299, CLASS_GROUP_BUDGET).unwrap().invariants, vec![3, 9]);
        // D = -84 has (Z/2)^2
        assert_eq!(class_group_small(-84, CLASS_GROUP_BUDGET).unwrap().invariants, vec![2, 2]);
    }

    #[test]
    fn certificates() {
        let d = BigInt::from(-23);
        let c = rank3_certificate(&d, &[f(2, 1, 3)]).unwrap();
        assert_eq!(c.rank, 1);
        assert!(c.verify());
        assert_eq!(rank3_certificate(&d, &[f(1, 1, 6)]), Err(CertificateFailure::Relation(vec![1])));
        // (2,1,3) and its inverse are dependent
        assert!(matches!(rank3_certificate(&d, &[f(2, 1, 3), f(2, -1, 3)]), Err(CertificateFailure::Relation(_))));
        let d = BigInt::from(-4027);
        let g = class_group_small(-4027, CLASS_GROUP_BUDGET).unwrap();
        let idx = independent_three_torsion(&d, &g.forms);
        assert_eq!(idx.len(), 2);
        let forms: Vec<QuadForm> = idx.iter().map(|&i| g.forms[i].clone()).collect();
        assert_eq!(rank3_certificate(&d, &forms).unwrap().combinations.len(), 4);
    }

    #[test]
    fn form_text_roundtrip() {
        let g = f(2, -1, 3);
        assert_eq!(g.to_string().parse::<QuadForm>().unwrap(), g);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<QuadForm>(&json).unwrap(), g);
        assert!("(1,2)".parse::<QuadForm>().is_err());
    }

    #[test]
    fn narrow_groups() {
        // h+(Q(√3)) = 2 (fundamental unit of norm +1), h+(Q(√5)) = 1, Q(√229) has h = 3
        assert_eq!(NarrowClassGroup::new(12).unwrap().class_number(), 2);
        assert_eq!(NarrowClassGroup::new(5).unwrap().class_number(), 1);
        assert_eq!(NarrowClassGroup::new(229).unwrap().three_rank(), 1);
        assert_eq!(NarrowClassGroup::new(8).unwrap().three_rank(), 0);
    }

    #[test]
    fn reflection_examples() {
        let r = scholz_check(2, 10_000).unwrap();
        assert!((0..=1).contains(&r.difference));
        let r = scholz_check(79, 10_000).unwrap();
        assert!((0..=1).contains(&r.difference));
        // Q(√229) has 3-rank 1, Q(√-687) has class number 12: difference 0
        let r = scholz_check(229, 10_000).unwrap();
        assert_eq!((r.real_rank, r.imaginary_rank), (1, 1));
        assert!(scholz_check(1, 10_000).is_err());
        assert!(scholz_check(12, 10_000).is_err());
    }

    #[test]
    fn fundamental_discriminants() {
        assert!(is_fundamental(-4) && is_fundamental(-23) && is_fundamental(-8) && is_fundamental(5));
        assert!(!is_fundamental(-16) && !is_fundamental(-12 * 4) && !is_fundamental(-27));
        assert_eq!(fundamental_discriminant(&BigInt::from(-2)), BigInt::from(-8));
        assert_eq!(fundamental_discriminant(&BigInt::from(-3)), BigInt::from(-3));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn group_axioms(k in 1i64..2500) {
            let d = -4 * k - 3;
            prop_assume!(is_fundamental(d));
            let g = class_group_small(d, CLASS_GROUP_BUDGET).unwrap();
            let e = QuadForm::principal(&BigInt::from(d));
            let n = g.forms.len();
            for i in 0..n.min(6) {
                let x = &g.forms[i];
                prop_assert!(x.is_reduced());
                prop_assert_eq!(x.compose(&e).unwrap(), x.clone());
                prop_assert!(x.compose(&x.inverse()).unwrap().is_principal());
                for j in 0..n.min(6) {
                    let y = &g.forms[j];
                    let xy = x.compose(y).unwrap();
                    prop_assert!(g.forms.contains(&xy));
                    prop_assert_eq!(xy.clone(), y.compose(x).unwrap());
                    let z = &g.forms[(i + 2 * j) % n];
                    prop_assert_eq!(xy.compose(z).unwrap(), x.compose(&y.compose(z).unwrap()).unwrap());
                }
            }
            prop_assert_eq!(g.three_rank, g.three_rank_by_counting());
        }

        #[test]
        fn reduction_is_idempotent(a in 1i64..500, b in -500i64..500, c in 1i64..500) {
            let x = f(a, b, c);
            prop_assume!(x.discriminant() < BigInt::zero());
            let r = x.reduce().unwrap();
            prop_assert_eq!(r.discriminant(), x.discriminant());
            prop_assert!(r.is_reduced());
            prop_assert_eq!(r.reduce().unwrap(), r);
        }
    }
}
