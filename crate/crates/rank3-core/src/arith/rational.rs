//! Helpers around `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type BigRational = num_rational::BigRational;

/// Builds the rational `n / d` from machine integers.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"-12"`, `"7/3"` or `"-7/3"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Decimal rendering `n` or `n/d`.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `ord_p` of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// `ord_p(num) - ord_p(den)`; zero has no finite valuation.
pub fn rational_valuation(x: &BigRational, p: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    Ok(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// Naive height `max(|num|, den)`.
pub fn height(x: &BigRational) -> BigInt {
    let n = x.numer().abs();
    let d = x.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

/// Exact integer cube root if `n` is a perfect cube.
pub fn int_cube_root(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    if &(&r * &r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact integer square root if `n` is a perfect square.
pub fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational cube root.
pub fn rational_cube_root(x: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(int_cube_root(x.numer())?, int_cube_root(x.denom())?))
}

/// Exact rational square root.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(int_sqrt(x.numer())?, int_sqrt(x.denom())?))
}

/// `x^e` for a possibly negative exponent.
pub fn rational_pow(x: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(rational_valuation(&qi(12), &BigInt::from(2)).unwrap(), 2);
        assert_eq!(rational_valuation(&q(9, 25), &BigInt::from(5)).unwrap(), -2);
        assert!(rational_valuation(&qi(0), &BigInt::from(5)).is_err());
    }

    #[test]
    fn parse_and_format() {
        let x = parse_rational("-14/4").unwrap();
        assert_eq!(x, q(-7, 2));
        assert_eq!(format_rational(&x), "-7/2");
        assert_eq!(format_rational(&parse_rational("20").unwrap()), "20");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn roots_and_height() {
        assert_eq!(rational_cube_root(&q(-27, 8)), Some(q(-3, 2)));
        assert_eq!(rational_cube_root(&q(2, 1)), None);
        assert_eq!(rational_sqrt(&q(49, 4)), Some(q(7, 2)));
        assert_eq!(height(&q(-186, 11)), BigInt::from(186));
        assert_eq!(rational_pow(&q(2, 3), -2), q(9, 4));
    }
}
