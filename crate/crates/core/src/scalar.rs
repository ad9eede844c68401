//! Scalar kinds shared by every module: exact rationals and `f64`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Arithmetic needed by the generic matrix and metric code.
///
/// Comparisons through [`Scalar::le_tol`] are exact for rationals and use an
/// absolute tolerance for floats.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn half(&self) -> Self;
    fn is_finite(&self) -> bool;
    /// Absolute slack used when comparing derived quantities.
    fn tolerance() -> Self;

    fn le_tol(&self, other: &Self) -> bool {
        self.clone() <= other.clone() + Self::tolerance()
    }

    fn eq_tol(&self, other: &Self) -> bool {
        self.le_tol(other) && other.le_tol(self)
    }

    fn is_zero_tol(&self) -> bool {
        self.eq_tol(&Self::zero())
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn half(&self) -> Self {
        self / Rational::from_integer(BigInt::from(2))
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn tolerance() -> Self {
        Rational::zero()
    }
}

/// Absolute tolerance for float comparisons in the log domain.
pub const FLOAT_ABS_TOL: f64 = 1e-9;

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn half(&self) -> Self {
        self * 0.5
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn tolerance() -> Self {
        FLOAT_ABS_TOL
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact conversion of a finite float (every finite `f64` is a dyadic rational).
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Domain(format!("non-finite value {v}")))
}

/// Canonical `"p/q"` text: lowest terms, positive denominator, `/1` kept.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// `base^exp` for an integer exponent; `0^0 = 1`, `0^negative` is a domain error.
pub fn pow_int(base: &Rational, exp: i64) -> Result<Rational> {
    if exp == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        if exp < 0 {
            return Err(Error::Domain("zero base with negative exponent".into()));
        }
        return Ok(Rational::zero());
    }
    let mag = exp.unsigned_abs();
    let mag = u32::try_from(mag).map_err(|_| Error::Capability(format!("exponent {exp} too large")))?;
    let p = num_traits::pow::Pow::pow(base, mag);
    Ok(if exp < 0 { p.recip() } else { p })
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use serde::Serializer;

    use super::{format_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(format_rational))
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 2/-4 ").unwrap(), rat(-1, 2));
        assert_eq!(format_rational(&rat(2, -4)), "-1/2");
        assert_eq!(format_rational(&int(5)), "5/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn pow_conventions() {
        assert_eq!(pow_int(&int(0), 0).unwrap(), int(1));
        assert_eq!(pow_int(&int(0), 3).unwrap(), int(0));
        assert!(pow_int(&int(0), -1).is_err());
        assert_eq!(pow_int(&int(2), -3).unwrap(), rat(1, 8));
    }

    #[test]
    fn floats_convert_exactly() {
        assert_eq!(from_f64(0.375).unwrap(), rat(3, 8));
        assert!(from_f64(f64::NAN).is_err());
    }
}
