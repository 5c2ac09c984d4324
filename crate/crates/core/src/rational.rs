//! Exact rational helpers. Every quantitative result in the crate is a
//! [`Rational`]; dyadic values come from the fixed metric.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^(-k)`.
pub fn dyadic(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a rational: {text:?}"));
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() || d.is_negative() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Renders `p/q` in lowest terms, or `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
