//! Integer factorization: hints, trial division, Miller–Rabin and Pollard–Brent.
//!
//! Factorization is allowed to give up: whatever cannot be split within the
//! effort budget is returned as a composite cofactor.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::{BigInt, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::modular::{mul_mod_u64, pow_mod_u64};
use crate::error::{Error, Result};

/// Fixed Miller–Rabin bases; deterministic below 3.3·10²⁴.
pub const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
/// Number of extra pseudo-random bases used above the deterministic range.
pub const MR_EXTRA_ROUNDS: usize = 16;

/// Budget for [`factor_integer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEffort {
    /// Trial division runs over all primes up to this bound.
    pub trial_bound: u64,
    /// Pollard–Brent iterations per attempt.
    pub rho_iterations: u64,
    /// Number of polynomial constants tried per composite.
    pub rho_attempts: u32,
}

impl Default for FactorEffort {
    fn default() -> Self {
        FactorEffort { trial_bound: 1_000_000, rho_iterations: 2_000_000, rho_attempts: 4 }
    }
}

impl FactorEffort {
    /// Trial division only.
    pub fn trial_only(bound: u64) -> Self {
        FactorEffort { trial_bound: bound, rho_iterations: 0, rho_attempts: 0 }
    }
}

/// Known prime factors supplied by the user, keyed by the integer they belong to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorHints {
    lines: BTreeMap<BigInt, Vec<BigInt>>,
}

impl FactorHints {
    /// Parses lines `<n> <p1> <p2> ...`; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(|w| {
                w.parse::<BigInt>().map_err(|_| Error::Parse(format!("hints line {}: bad integer {w:?}", no + 1)))
            });
            let n = it.next().unwrap()?.abs();
            let ps = it.collect::<Result<Vec<_>>>()?;
            lines.insert(n, ps);
        }
        Ok(FactorHints { lines })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn insert(&mut self, n: BigInt, primes: Vec<BigInt>) {
        self.lines.insert(n.abs(), primes);
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Every hinted prime, regardless of which integer it was listed for.
    fn all_primes(&self) -> impl Iterator<Item = &BigInt> {
        self.lines.values().flatten()
    }
}

/// `sign * ∏ p^e * cofactor`; `cofactor == 1` exactly when the factorization is complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
    pub cofactor: BigInt,
}

impl FactoredInteger {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Re-multiplies the factorization.
    pub fn value(&self) -> BigInt {
        let mut v = self.cofactor.clone();
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    pub fn exponent(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    /// Writes `|n| = s² · core` with `core` squarefree over the listed primes;
    /// the cofactor (if any) is multiplied into `core` unchanged.
    pub fn square_split(&self) -> (BigInt, BigInt) {
        let mut s = BigInt::one();
        let mut core = self.cofactor.clone();
        for (p, e) in &self.factors {
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= p;
            }
        }
        (s, core)
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(1_000_000))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut is = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if is[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
    }
    out
}

fn trial_primes(bound: u64) -> Vec<u32> {
    if bound <= 1_000_000 {
        let ps = small_primes();
        let k = ps.partition_point(|&p| (p as u64) <= bound);
        ps[..k].to_vec()
    } else {
        primes_up_to(bound)
    }
}

fn mr_u64(n: u64, a: u64) -> bool {
    if a.is_multiple_of(n) {
        return true;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn mr_big(n: &BigInt, a: &BigInt) -> bool {
    let one = BigInt::one();
    let nm1: BigInt = n - 1u32;
    let a = a.mod_floor(n);
    if a.is_zero() {
        return true;
    }
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Miller–Rabin with the fixed bases, plus seeded random bases for large inputs.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &MR_BASES {
        if n == &BigInt::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    if let Some(m) = n.to_u64() {
        return MR_BASES.iter().all(|&a| mr_u64(m, a));
    }
    if !MR_BASES.iter().all(|&a| mr_big(n, &BigInt::from(a))) {
        return false;
    }
    if n.bits() < 82 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n.bits());
    let two = BigInt::from(2);
    let hi: BigInt = n - 2u32;
    (0..MR_EXTRA_ROUNDS).all(|_| mr_big(n, &rng.gen_bigint_range(&two, &hi)))
}

fn rho_u64(n: u64, c: u64, iterations: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut x;
    let mut g = 1u64;
    let mut ys = y;
    let mut spent = 0u64;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..128.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += 128;
            spent += 128;
        }
        r *= 2;
        if g != 1 || spent > iterations {
            break;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g > 1 && g < n).then_some(g)
}

fn rho_big(n: &BigInt, c: u64, iterations: u64) -> Option<BigInt> {
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut y = BigInt::from(2);
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut spent = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..128.min(r - k) {
                y = f(&y);
                q = q * (&x - &y).abs() % n;
            }
            g = q.gcd(n);
            k += 128;
            spent += 128;
        }
        r *= 2;
        if spent > iterations {
            break;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (!g.is_one() && &g != n).then_some(g)
}

/// One nontrivial divisor of a composite, within budget.
fn split(n: &BigInt, effort: &FactorEffort) -> Option<BigInt> {
    for k in [2u32, 3, 5, 7] {
        let r = n.nth_root(k);
        if &r.pow(k) == n {
            return Some(r);
        }
    }
    for attempt in 0..effort.rho_attempts {
        let c = 1 + attempt as u64 * 2;
        let d = match n.to_u64() {
            Some(m) => rho_u64(m, c, effort.rho_iterations).map(BigInt::from),
            None => rho_big(n, c, effort.rho_iterations),
        };
        if d.is_some() {
            return d;
        }
    }
    None
}

/// Factors `n` as far as the effort allows.
pub fn factor_integer(n: &BigInt, hints: Option<&FactorHints>, effort: &FactorEffort) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::FactorZero);
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut m = n.abs();
    let mut found: BTreeMap<BigInt, u32> = BTreeMap::new();
    let strip = |m: &mut BigInt, p: &BigInt, found: &mut BTreeMap<BigInt, u32>| {
        while (&*m % p).is_zero() {
            *m /= p;
            *found.entry(p.clone()).or_insert(0) += 1;
        }
    };
    if let Some(h) = hints {
        for p in h.all_primes() {
            if p > &BigInt::one() && is_probable_prime(p) {
                strip(&mut m, p, &mut found);
            }
        }
    }
    for p in trial_primes(effort.trial_bound) {
        if m.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        if (&m % p).is_zero() {
            strip(&mut m, &pb, &mut found);
        }
    }
    let mut cofactor = BigInt::one();
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            *found.entry(c).or_insert(0) += 1;
            continue;
        }
        // small composites below the trial bound squared are impossible here,
        // except when trial division stopped early
        match split(&c, effort) {
            Some(d) => {
                let e = &c / &d;
                stack.push(d);
                stack.push(e);
            }
            None => cofactor *= c,
        }
    }
    Ok(FactoredInteger { sign, factors: found.into_iter().collect(), cofactor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn examples() {
        let e = FactorEffort::default();
        let f = factor_integer(&b(96), None, &e).unwrap();
        assert_eq!(f.factors, vec![(b(2), 5), (b(3), 1)]);
        let f = factor_integer(&b(11764900), None, &e).unwrap();
        assert_eq!(f.factors, vec![(b(2), 2), (b(5), 2), (b(7), 6)]);
        let mut h = FactorHints::default();
        h.insert(b(11398625), vec![b(1861)]);
        let f = factor_integer(&b(11398625), Some(&h), &e).unwrap();
        assert_eq!(f.factors, vec![(b(5), 3), (b(7), 2), (b(1861), 1)]);
        assert!(factor_integer(&b(0), None, &e).is_err());
        let f = factor_integer(&b(-8), None, &e).unwrap();
        assert_eq!((f.sign, f.square_split()), (-1, (b(2), b(2))));
    }

    #[test]
    fn rho_splits_semiprimes() {
        // 1000003 * 1000033 and a 20-digit semiprime beyond u64 squares
        let e = FactorEffort::default();
        let n = b(1000003) * b(1000033);
        let f = factor_integer(&n, None, &e).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.factors, vec![(b(1000003), 1), (b(1000033), 1)]);
        let p: BigInt = "10000000019".parse().unwrap();
        let q: BigInt = "100000000003".parse().unwrap();
        let f = factor_integer(&(&p * &q * &q), None, &e).unwrap();
        assert_eq!(f.factors, vec![(p, 1), (q, 2)]);
    }

    #[test]
    fn partial_when_budget_is_tiny() {
        let p: BigInt = "1000000000039".parse().unwrap();
        let q: BigInt = "1000000000061".parse().unwrap();
        let n = &p * &q * 12;
        let f = factor_integer(&n, None, &FactorEffort::trial_only(1000)).unwrap();
        assert!(!f.is_complete());
        assert_eq!(f.cofactor, &p * &q);
        assert_eq!(f.value(), n);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&b(2)));
        assert!(is_probable_prime(&b(1861)));
        assert!(!is_probable_prime(&b(561)));
        assert!(!is_probable_prime(&b(3215031751)));
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * &m127)));
    }

    #[test]
    fn hints_parse() {
        let h = FactorHints::parse("# comment\n11398625 1861\n\n").unwrap();
        assert_eq!(h.lines.len(), 1);
        assert!(FactorHints::parse("12 x").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn factorization_remultiplies(n in any::<i64>().prop_filter("nonzero", |n| *n != 0), k in 1u64..1000) {
            let n = BigInt::from(n) * BigInt::from(k);
            let f = factor_integer(&n, None, &FactorEffort::default()).unwrap();
            prop_assert_eq!(f.value(), n);
            prop_assert!(f.factors.iter().all(|(p, _)| is_probable_prime(p)));
        }

        #[test]
        fn partial_factorization_remultiplies(n in any::<u64>().prop_filter("nonzero", |n| *n != 0)) {
            let n = BigInt::from(n) * BigInt::from(n | 1);
            let f = factor_integer(&n, None, &FactorEffort::trial_only(100)).unwrap();
            prop_assert_eq!(f.value(), n);
        }
    }
}
