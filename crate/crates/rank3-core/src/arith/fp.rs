//! Polynomials over a prime field `F_p` with word-sized `p`, including
//! Cantor–Zassenhaus factorization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modular::{mul_mod_u64, pow_mod_u64};
use super::poly::RationalPoly;
use super::rational::BigRational;

/// Inverse in `F_p` via Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "zero has no inverse");
    pow_mod_u64(a, p - 2, p)
}

/// Reduction of a rational modulo `p`; `None` when `p` divides the denominator.
pub fn reduce_rational(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = x.denom().mod_floor(&pb).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    let n = x.numer().mod_floor(&pb).to_u64().unwrap();
    Some(mul_mod_u64(n, inv_mod(d, p), p))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(p={}, {:?})", self.p, self.c)
    }
}

impl FpPoly {
    pub fn new(p: u64, c: Vec<u64>) -> Self {
        let mut c: Vec<u64> = c.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_i64(p: u64, c: &[i64]) -> Self {
        Self::new(p, c.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
    }

    /// Reduction of a rational polynomial; `None` when a denominator vanishes mod `p`.
    pub fn from_rational(f: &RationalPoly, p: u64) -> Option<Self> {
        Some(Self::new(p, f.coeffs().iter().map(|c| reduce_rational(c, p)).collect::<Option<Vec<_>>>()?))
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u64, a: u64) -> Self {
        Self::new(p, vec![a])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    /// `t^k`.
    pub fn monomial(p: u64, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Self::new(p, c)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.c.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1` for comparisons.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn scale(&self, a: u64) -> Self {
        Self::new(self.p, self.c.iter().map(|&x| mul_mod_u64(x, a, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(self.p, (0..n).map(|k| (self.coeff(k) + o.coeff(k)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(self.p, (0..n).map(|k| (self.coeff(k) + self.p - o.coeff(k)) % self.p).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, self.c.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                let s = acc[i + j] + a as u128 * b as u128;
                acc[i + j] = if s >= p * p * 4 { s % p } else { s };
            }
        }
        Self::new(self.p, acc.into_iter().map(|x| (x % p) as u64).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.p);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.lead(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod_u64(r[k + dd], inv, p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod_u64(c, dc, p)) % p;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact division over F_p");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.c.iter().enumerate().skip(1).map(|(k, &x)| mul_mod_u64(x, k as u64 % self.p, self.p)).collect(),
        )
    }

    pub fn eval(&self, t: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.c.iter().rev() {
            acc = (mul_mod_u64(acc, t, self.p) + c) % self.p;
        }
        acc
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(self.p);
        for &c in self.c.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(self.p, c));
        }
        acc
    }

    /// Coefficients of `self(t + a)`.
    pub fn taylor_shift(&self, a: u64) -> Self {
        let p = self.p;
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = (c[j] + mul_mod_u64(c[j + 1], a, p)) % p;
            }
        }
        Self::new(p, c)
    }

    /// `self^e mod m` for a big exponent.
    pub fn powmod(&self, e: &BigInt, m: &Self) -> Self {
        let mut result = Self::one(self.p).rem(m);
        let mut base = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        result
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Roots in `F_p` (distinct), by splitting `gcd(f, t^p - t)`.
    pub fn roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let p = self.p;
        let m = self.monic();
        let xp = FpPoly::x(p).powmod(&BigInt::from(p), &m);
        let g = xp.sub(&FpPoly::x(p)).gcd(&m);
        let mut roots: Vec<u64> = equal_degree_split(&g, 1, p).into_iter().map(|f| (p - f.coeff(0)) % p).collect();
        roots.sort_unstable();
        roots
    }

    /// Exact cube root of a monic polynomial, if it is a cube.
    pub fn cube_root(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let f = self.monic();
        let mut out = Self::one(self.p);
        for (g, e) in factor_poly_fp(&f).factors {
            if e % 3 != 0 {
                return None;
            }
            out = out.mul(&g.pow(e / 3));
        }
        Some(out)
    }
}

/// Factorization `lead * ∏ f_i^{e_i}` with monic irreducible `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpFactorization {
    pub lead: u64,
    pub factors: Vec<(FpPoly, u32)>,
}

impl FpFactorization {
    pub fn product(&self, p: u64) -> FpPoly {
        let mut r = FpPoly::constant(p, self.lead);
        for (f, e) in &self.factors {
            r = r.mul(&f.pow(*e));
        }
        r
    }
}

/// Squarefree decomposition of a monic polynomial (Yun, with `p`-th roots).
fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    let df = f.derivative();
    if df.is_zero() {
        // f(t) = g(t^p)
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let g = FpPoly::new(p, f.c.iter().step_by(p as usize).copied().collect());
        for (h, e) in squarefree_decomposition(&g) {
            out.push((h, e * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while w.degree() != Some(0) {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if c.degree().unwrap_or(0) > 0 {
        let g = FpPoly::new(p, c.c.iter().step_by(p as usize).copied().collect());
        for (h, e) in squarefree_decomposition(&g) {
            out.push((h, e * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = FpPoly::x(p).rem(&f);
    let mut d = 0;
    let pb = BigInt::from(p);
    while f.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&pb, &f);
        let g = h.sub(&FpPoly::x(p)).gcd(&f);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            f = f.div_exact(&g);
            h = h.rem(&f);
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        let d = f.degree().unwrap();
        out.push((f, d));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d` (odd `p`).
fn equal_degree_split(f: &FpPoly, d: usize, p: u64) -> Vec<FpPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p ^ (n as u64) << 20);
    let e: BigInt = (BigInt::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = a.powmod(&e, f).sub(&FpPoly::one(p));
        let g = b.gcd(f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree_split(&g, d, p);
            out.extend(equal_degree_split(&f.div_exact(&g), d, p));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities.
pub fn factor_poly_fp(q: &FpPoly) -> FpFactorization {
    assert!(!q.is_zero(), "cannot factor the zero polynomial");
    let p = q.p;
    let lead = q.lead();
    let mut factors = Vec::new();
    for (g, e) in squarefree_decomposition(&q.monic()) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree_split(&h, d, p) {
                factors.push((irr, e));
            }
        }
    }
    factors.sort_by(|a, b| (a.0.degree(), &a.0.c).cmp(&(b.0.degree(), &b.0.c)));
    FpFactorization { lead, factors }
}

/// Irreducibility certificate: `t^{p^m} ≡ t` and `gcd(t^{p^{m/ℓ}} - t, f) = 1` for primes `ℓ | m`.
pub fn is_irreducible(f: &FpPoly) -> bool {
    let p = f.p;
    let m = match f.degree() {
        Some(0) | None => return false,
        Some(m) => m,
    };
    let f = f.monic();
    let x = FpPoly::x(p);
    let frob = |k: usize| {
        let mut h = x.clone();
        for _ in 0..k {
            h = h.powmod(&BigInt::from(p), &f);
        }
        h
    };
    if frob(m).sub(&x).rem(&f) != FpPoly::zero(p) {
        return false;
    }
    let mut n = m;
    let mut ell = 2;
    while n > 1 {
        if n % ell == 0 {
            while n % ell == 0 {
                n /= ell;
            }
            if frob(m / ell).sub(&x).gcd(&f).degree() != Some(0) {
                return false;
            }
        }
        ell += 1;
    }
    true
}
