//! Exact rationals and the scaled-integer fast path used by lattice scans.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Largest magnitude allowed for a scaled entry. Sums of up to 64 such
/// entries cannot overflow an `i64`.
const SCALED_LIMIT: i64 = 1 << 56;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Division);
    }
    Ok(Rational::new(num, den))
}

/// `n` for integers, `n/d` otherwise.
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A list of rationals rescaled by a common denominator into machine
/// integers: `values[i] / den` is the original entry.
#[derive(Clone, Debug)]
pub struct Scaled {
    pub values: Vec<i64>,
    pub den: BigInt,
}

impl Scaled {
    /// Returns `None` when some scaled entry does not fit the fast path.
    pub fn from_rationals(values: &[Rational]) -> Option<Scaled> {
        let mut den = BigInt::one();
        for v in values {
            if !v.denom().is_one() {
                den = den.lcm(v.denom());
                if den.bits() > 62 {
                    return None;
                }
            }
        }
        let mut out = Vec::with_capacity(values.len());
        for v in values {
            let s = v.numer() * (&den / v.denom());
            let s = s.to_i64()?;
            if s.abs() > SCALED_LIMIT {
                return None;
            }
            out.push(s);
        }
        Some(Scaled { values: out, den })
    }

    pub fn to_rational(&self, scaled: i64) -> Rational {
        Rational::new(BigInt::from(scaled), self.den.clone())
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
