//! Exact rational, polynomial, and rational-function arithmetic, with the
//! sign decision procedures every symbolic verdict in the crate rests on.

mod poly;
mod ratfun;

pub use poly::Polynomial;
pub use ratfun::{ForallVerdict, Limit, RationalFunction, Sign};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar: normalized, positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or plain `p` in decimal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidConstruction(format!("bad rational `{}`", s)))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::InvalidConstruction(format!("bad rational `{}`", s)))?,
        None => BigInt::from(1),
    };
    if d.is_zero() {
        return Err(Error::InvalidConstruction(format!(
            "zero denominator in `{}`",
            s
        )));
    }
    Ok(Rational::new(n, d))
}
