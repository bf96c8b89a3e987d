//! Modular square roots, the Kronecker symbol and CRT.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Least nonnegative residue.
pub fn modp(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::NotInvertible(a.to_string(), m.to_string()));
    }
    Ok(e.x.mod_floor(m))
}

/// Square root modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod_p(a: &BigInt, p: &BigInt) -> Result<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Ok(a);
    }
    if p == &BigInt::from(2) {
        return Ok(a);
    }
    let one = BigInt::one();
    let pm1: BigInt = p - 1u32;
    if a.modpow(&(&pm1 >> 1), p) != one {
        return Err(Error::NonResidue(a.to_string(), p.to_string()));
    }
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 >> 1), p) == one {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while t != one {
        let mut i = 0u32;
        let mut tt = t.clone();
        while tt != one {
            tt = &tt * &tt % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        r = r * &b % p;
        c = &b * &b % p;
        t = t * &c % p;
        m = i;
    }
    Ok(r)
}

/// Kronecker symbol `(a / n)` for arbitrary integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1i32;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    // factor out twos of n using (a/2)
    let mut v = 0u32;
    while n.is_even() {
        n >>= 1;
        v += 1;
    }
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.mod_floor(&BigInt::from(8));
            if r == BigInt::from(3) || r == BigInt::from(5) {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a / n), n odd positive
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&BigInt::from(8));
            if r == BigInt::from(3) || r == BigInt::from(5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&BigInt::from(4)) == BigInt::from(3) && n.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Combines congruences `x ≡ r_i (mod m_i)` with pairwise-coprime moduli into
/// `(x, M)` with `0 ≤ x < M`.
pub fn crt_combine(pairs: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in pairs {
        if !m.gcd(mi).is_one() {
            return Err(Error::CrtNotCoprime);
        }
        // x + m*k ≡ r (mod mi)
        let k = ((r - &x).mod_floor(mi) * mod_inverse(&m, mi)?).mod_floor(mi);
        x += &m * k;
        m *= mi;
        x = x.mod_floor(&m);
    }
    Ok((x, m))
}

/// `a^e mod m` on machine words.
pub fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn sqrt_examples() {
        let s = sqrt_mod_p(&b(2), &b(7)).unwrap();
        assert!(s == b(3) || s == b(4));
        assert!(sqrt_mod_p(&b(3), &b(7)).is_err());
        // p ≡ 1 mod 8 exercises the Tonelli–Shanks loop
        let p = b(17);
        for a in 1..17 {
            if let Ok(r) = sqrt_mod_p(&b(a), &p) {
                assert_eq!((&r * &r) % &p, b(a));
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(&b(-8), &b(3)), 1);
        assert_eq!(kronecker(&b(5), &b(2)), -1);
        assert_eq!(kronecker(&b(-7), &b(2)), 1);
        assert_eq!(kronecker(&b(12), &b(2)), 0);
        assert_eq!(kronecker(&b(-23), &b(3)), 1);
        assert_eq!(kronecker(&b(-1), &b(-1)), -1);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 101] {
            for a in -50i64..50 {
                let e = b(a).mod_floor(&b(p)).modpow(&b((p - 1) / 2), &b(p));
                let expect = if e.is_zero() { 0 } else if e.is_one() { 1 } else { -1 };
                assert_eq!(kronecker(&b(a), &b(p)), expect, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn crt_examples() {
        let (x, m) = crt_combine(&[(b(1), b(8)), (b(0), b(125))]).unwrap();
        assert_eq!((x, m), (b(625), b(1000)));
        // oracle: brute-force search over 0..1000
        let brute = (0..1000).find(|x| x % 8 == 1 && x % 125 == 0).unwrap();
        assert_eq!(brute, 625);
        assert_eq!(crt_combine(&[(b(0), b(8)), (b(0), b(125))]).unwrap(), (b(0), b(1000)));
        assert!(crt_combine(&[(b(1), b(4)), (b(1), b(6))]).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(&b(3), &b(7)).unwrap(), b(5));
        assert!(mod_inverse(&b(6), &b(9)).is_err());
        assert_eq!(BigInt::from(pow_mod_u64(3, 200, 101)), b(3).modpow(&b(200), &b(101)));
    }
}
