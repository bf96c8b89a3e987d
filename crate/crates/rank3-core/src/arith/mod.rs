//! Exact arithmetic: rationals, dense polynomials over `Q` and `F_p`,
//! integer factorization and a small modular toolkit.

pub mod factor;
pub mod fp;
pub mod modular;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use factor::{factor_integer, is_probable_prime, FactorEffort, FactorHints, FactoredInteger};
pub use fp::FpPoly;
pub use modular::{crt_combine, kronecker, mod_inverse, sqrt_mod_p};
pub use poly::RationalPoly;
pub use ratfunc::RatFunc;
pub use rational::{height, parse_rational, rational_valuation, BigRational};
