//! Optimal bounding constants at `n = 3` and numerical checks around them.
//!
//! A barycentric point `(a, b, c)` stands for the ratio
//! `a * alpha^{23|1} + b * alpha^{13|2} + c * alpha^{12|3}`.

mod lemma;
mod n3;
mod sup;
mod tp;

pub use lemma::{hard_lemma_check, HardLemmaCheck, HardLemmaQuantities};
pub use n3::{theorem_c, verify_n3, N3Grid};
pub use sup::{estimate_sup, SupConfig, SupEstimate};
pub use tp::{fp_delta3, fp_delta3_lp};

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{triangular, FullRatio};
use crate::scalar::{Rational, Scalar};

/// Accepted deviation of `a + b + c` from 1 for float input.
pub const BARYCENTRIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarycentricRatio {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BarycentricRatio {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if [a, b, c].iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain(format!(
                "barycentric coordinates must be nonnegative, got ({a}, {b}, {c})"
            )));
        }
        if (a + b + c - 1.0).abs() > BARYCENTRIC_TOL {
            return Err(Error::Domain(format!(
                "barycentric coordinates sum to {}, expected 1",
                a + b + c
            )));
        }
        Ok(Self { a, b, c })
    }

    /// Exact input: the sum must be exactly 1.
    pub fn from_rationals(a: &Rational, b: &Rational, c: &Rational) -> Result<Self> {
        if a.is_negative() || b.is_negative() || c.is_negative() {
            return Err(Error::Domain("barycentric coordinates must be nonnegative".into()));
        }
        let sum = a + b + c;
        if sum != Rational::from_integer(1.into()) {
            return Err(Error::Domain(format!("barycentric coordinates sum to {sum}, expected 1")));
        }
        Ok(Self {
            a: Scalar::to_f64(a),
            b: Scalar::to_f64(b),
            c: Scalar::to_f64(c),
        })
    }

    /// `a^2 + b^2 + c^2 - 2ab - 2ac - 2bc`; nonpositive exactly on and inside
    /// the inscribed circle.
    pub fn discriminant(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        a * a + b * b + c * c - 2.0 * (a * b + a * c + b * c)
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// The exponent vector on `n = 3`; coordinates must be exactly representable.
    pub fn to_ratio(&self) -> Result<FullRatio> {
        let [a, b, c] = self.coords().map(crate::scalar::from_f64);
        let (a, b, c) = (a?, b?, c?);
        let r = triangular(2, 3, 1, 3)?
            .scaled(&a)
            .add(&triangular(1, 3, 2, 3)?.scaled(&b))?
            .add(&triangular(1, 2, 3, 3)?.scaled(&c))?;
        Ok(r)
    }
}
