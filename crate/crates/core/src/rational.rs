//! Exact rationals for depths, thicknesses and places.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"n/d"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Formats as `"n/d"`, or `"n"` for integers.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `p/(p-1)`.
pub fn p_over_p_minus_one(p: u32) -> Rational {
    ratio(p as i64, p as i64 - 1)
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

/// Converts an integral rational to `i64`.
pub fn to_i64(r: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}
