//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, parse_rational, rational_cube_root, rational_sqrt, BigRational};
use crate::error::{Error, Result};

/// Coefficients in ascending degree; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// `c * t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &RationalPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    /// `self(t^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(v)
    }

    /// Taylor coefficients about `a`: the coefficients of `self(t + a)`.
    pub fn taylor_shift(&self, a: &BigRational) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let add = &c[j + 1] * a;
                c[j] += add;
            }
        }
        Self::new(c)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &RationalPoly) -> Result<(RationalPoly, RationalPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        let mut qv = vec![BigRational::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            qv[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(qv), Self::new(r)))
    }

    /// Exact quotient; fails when the division leaves a remainder.
    pub fn div_exact(&self, d: &RationalPoly) -> Result<RationalPoly> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Parse("inexact polynomial division".into()))
        }
    }

    /// Monic gcd (zero when both inputs vanish).
    pub fn gcd(&self, other: &RationalPoly) -> RationalPoly {
        let (mut a, mut b) = (self.primitive_int(), other.primitive_int());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.primitive_int();
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &RationalPoly) -> (RationalPoly, RationalPoly, RationalPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
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
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Writes `self = c * P` with `P` a primitive integer polynomial with positive
    /// leading coefficient, returning `(c, P coefficients)`.
    pub fn content_and_primitive(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let l = self.denominator_lcm();
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (BigRational::new(g, l), prim)
    }

    /// Same polynomial scaled to be primitive in `Z[t]` (keeps gcd computations small).
    fn primitive_int(&self) -> RationalPoly {
        if self.is_zero() {
            return self.clone();
        }
        Self::from_bigints(&self.content_and_primitive().1)
    }

    /// Integer coefficient vector, if every coefficient is integral.
    pub fn to_integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect()
    }

    /// Exact `n`-th root for `n` in {2, 3}, by a power-series recursion on the
    /// reversed polynomial followed by an exact re-check.
    pub fn nth_root(&self, n: u32) -> Option<RationalPoly> {
        assert!(n == 2 || n == 3);
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d = self.degree().unwrap();
        // Strip a power of t first so the reversed series has a nonzero constant term.
        let low = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if !d.is_multiple_of(n as usize) || low % n as usize != 0 {
            return None;
        }
        let lead = self.lead();
        let c0 = if n == 3 { rational_cube_root(&lead)? } else { rational_sqrt(&lead)? };
        let m = (d - low) / n as usize;
        // reversed coefficients of self / t^low
        let rev: Vec<BigRational> = self.coeffs[low..].iter().rev().cloned().collect();
        let mut root = vec![c0.clone()];
        let denom = if n == 3 { &c0 * &c0 * BigRational::from_integer(3.into()) } else { &c0 * BigRational::from_integer(2.into()) };
        for k in 1..=m {
            root.push(BigRational::zero());
            let series = RationalPoly::new(root.clone()).pow(n);
            let e = series.coeff(k);
            root[k] = (rev.get(k).cloned().unwrap_or_else(BigRational::zero) - e) / &denom;
        }
        root.reverse();
        let mut full = vec![BigRational::zero(); low / n as usize];
        full.extend(root);
        let cand = RationalPoly::new(full);
        if &cand.pow(n) == self {
            Some(cand)
        } else {
            None
        }
    }

    /// `c` with `c^3 = self`, or a typed failure.
    pub fn cube_root(&self) -> Result<RationalPoly> {
        self.nth_root(3).ok_or_else(|| Error::NotACube(self.to_string()))
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`,
    /// `None` meaning infinite, via a Sturm sequence of the squarefree part.
    pub fn count_real_roots(&self, lo: Option<&BigRational>, hi: Option<&BigRational>) -> usize {
        if self.is_constant() {
            return 0;
        }
        let g = self.gcd(&self.derivative());
        let sq = self.divrem(&g).unwrap().0;
        let mut seq = vec![sq.primitive_int(), sq.derivative().primitive_int()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].divrem(&seq[n - 1]).unwrap().1;
            if r.is_zero() {
                break;
            }
            // positive rescaling keeps the Sturm property
            let (c, p) = r.content_and_primitive();
            let p = RationalPoly::from_bigints(&p);
            seq.push(if c.is_negative() { p } else { -p });
        }
        let sign_changes = |x: Option<&BigRational>, at_plus: bool| -> usize {
            let signs: Vec<i32> = seq
                .iter()
                .map(|p| {
                    let v = match x {
                        Some(x) => p.eval(x),
                        None => {
                            let d = p.degree().unwrap_or(0);
                            let l = p.lead();
                            if at_plus || d % 2 == 0 {
                                l
                            } else {
                                -l
                            }
                        }
                    };
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let a = sign_changes(lo, false);
        let b = sign_changes(hi, true);
        a.saturating_sub(b)
    }

    /// Ascending decimal coefficient strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(v: &[S]) -> Result<Self> {
        Ok(Self::new(v.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<_>>()?))
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        RationalPoly::from_strings(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = format_rational(c);
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let s = s.trim_start_matches('-');
            match k {
                0 => write!(f, "{s}")?,
                1 => write!(f, "{s}*t")?,
                _ => write!(f, "{s}*t^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl<'a> Add<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn add(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn sub(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a RationalPoly> for &'a RationalPoly {
    type Output = RationalPoly;
    fn mul(self, o: &RationalPoly) -> RationalPoly {
        if self.is_zero() || o.is_zero() {
            return RationalPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RationalPoly::new(v)
    }
}

impl Neg for RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        -(self.clone())
    }
}
