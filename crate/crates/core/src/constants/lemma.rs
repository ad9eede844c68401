use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

/// The three quadratic forms of the cubic lemma.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct HardLemmaQuantities {
    #[serde(with = "crate::scalar::serde_rational")]
    pub X: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub Y: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub Z: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardLemmaCheck {
    pub quantities: HardLemmaQuantities,
    /// `X, Y, Z >= 0`.
    pub applicable: bool,
    /// `applicable` implies `XYZ < 32 x1 x2 x3 y1 y2 y3`.
    pub holds: bool,
}

fn form(v: &[Rational; 3]) -> Rational {
    let [a, b, c] = v;
    int(2) * (a * b + a * c + b * c) - a * a - b * b - c * c
}

/// Exact check of `XYZ < 32 prod(x) prod(y)` for positive `x`, `y`.
pub fn hard_lemma_check(x: &[Rational; 3], y: &[Rational; 3]) -> Result<HardLemmaCheck> {
    if x.iter().chain(y).any(|v| !v.is_positive()) {
        return Err(Error::Domain("all six inputs must be positive".into()));
    }
    let z = &x[0] * (&y[1] + &y[2] - &y[0]) + &x[1] * (&y[0] + &y[2] - &y[1]) + &x[2] * (&y[0] + &y[1] - &y[2]);
    let q = HardLemmaQuantities {
        X: form(x),
        Y: form(y),
        Z: z,
    };
    let applicable = !(q.X.is_negative() || q.Y.is_negative() || q.Z.is_negative());
    let holds = !applicable || {
        let lhs = &q.X * &q.Y * &q.Z;
        let rhs = int(32) * &x[0] * &x[1] * &x[2] * &y[0] * &y[1] * &y[2];
        lhs < rhs
    };
    Ok(HardLemmaCheck {
        quantities: q,
        applicable,
        holds,
    })
}
