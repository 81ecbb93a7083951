//! Small helpers around arbitrary-precision rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_uint(n: &BigUint) -> Rational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

pub fn uint_ratio(num: &BigUint, den: &BigUint) -> Rational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; no decimal points.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_biguint(s: &str) -> Result<BigUint> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a nonnegative integer: {s:?}")))
}

/// Canonical `p/q` string (denominator omitted when 1).
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both sides down to keep the quotient representable
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift_n = (nb - 60).max(0) as usize;
            let shift_d = (db - 60).max(0) as usize;
            let n = (r.numer().abs() >> shift_n).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
            let v = n / d * 2f64.powi((shift_n as i64 - shift_d as i64).clamp(-2000, 2000) as i32);
            if r.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}

/// Exact rational from a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidParameter(format!("non-finite value {x}")))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn lcm_u64(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / a.gcd(&b)).checked_mul(b)
}

/// Rational enclosure of pi, good to 30 digits.
pub fn pi_bounds() -> (Rational, Rational) {
    let num: BigInt = "314159265358979323846264338327".parse().unwrap();
    let den = BigInt::from(10u8).pow(29);
    let lo = BigRational::new(num.clone(), den.clone());
    let hi = BigRational::new(num + 1, den);
    (lo, hi)
}

/// Decides `lhs <= coeff * pi` exactly, or `None` when the enclosure cannot tell.
pub fn le_multiple_of_pi(lhs: &Rational, coeff: &Rational) -> Option<bool> {
    let (lo, hi) = pi_bounds();
    let (a, b) = if coeff.is_negative() {
        (coeff * &hi, coeff * &lo)
    } else {
        (coeff * &lo, coeff * &hi)
    };
    if lhs <= &a {
        Some(true)
    } else if lhs > &b {
        Some(false)
    } else {
        None
    }
}

/// Lowest common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
