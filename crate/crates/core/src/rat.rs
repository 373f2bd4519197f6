//! Arbitrary-precision rationals and small helpers on top of them.
//!
//! All coefficients in this crate are [`Rat`] values: exact fractions in
//! lowest terms with positive denominator, as maintained by `num-rational`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Format as `num/den`, always including the denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den` or a bare integer `num`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let err = || Error::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n = BigInt::from_str(s.trim()).map_err(|_| err())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Exact square root of a non-negative rational square.
///
/// Returns the positive root; errors when the argument is negative or not
/// the square of a rational.
pub fn sqrt_rat(r: &Rat) -> Result<Rat> {
    if r.is_negative() {
        return Err(Error::SqrtNonSquareLead(format_rat(r)));
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Ok(Rat::new(sn, sd))
    } else {
        Err(Error::SqrtNonSquareLead(format_rat(r)))
    }
}
