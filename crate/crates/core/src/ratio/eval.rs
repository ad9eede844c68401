use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::FullRatio;
use crate::error::{Error, Result};
use crate::lorentzian::{AnyMatrix, SymMatrix};
use crate::scalar::{pow_int, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    /// Present when the matrix is rational and every exponent is an integer.
    #[serde(with = "crate::scalar::serde_rational::option")]
    pub exact: Option<Rational>,
    pub value: f64,
    /// Some entry was `0` with exponent `0`, read as `0^0 = 1`.
    pub zero_pow_zero: bool,
}

fn check_size(r: &FullRatio, n: usize) -> Result<()> {
    if r.n() != n {
        return Err(Error::Structural(format!(
            "ratio has n = {}, matrix has n = {n}",
            r.n()
        )));
    }
    Ok(())
}

/// `prod_{i <= j} p_ij^{alpha_ij}`, exact whenever possible.
pub fn evaluate(r: &FullRatio, m: &AnyMatrix) -> Result<Evaluation> {
    check_size(r, m.n())?;
    match m {
        AnyMatrix::Rational(m) if r.is_integral() => evaluate_exact(r, m),
        _ => evaluate_f64(r, &m.to_f64()),
    }
}

fn evaluate_exact(r: &FullRatio, m: &SymMatrix<Rational>) -> Result<Evaluation> {
    let n = m.n();
    let mut num = Rational::one();
    let mut den = Rational::one();
    let mut zero_pow_zero = false;
    for i in 0..n {
        for j in i..n {
            let e = r.exponent(i, j);
            let base = m.get(i, j);
            if e.is_zero() {
                zero_pow_zero |= base.is_zero();
                continue;
            }
            let k = e
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Capability(format!("exponent {e} too large")))?;
            if k > 0 {
                num *= pow_int(base, k)?;
            } else {
                den *= pow_int(base, -k)?;
            }
        }
    }
    if den.is_zero() {
        return Err(Error::Domain("zero entry raised to a negative exponent".into()));
    }
    let exact = num / den;
    Ok(Evaluation {
        value: Scalar::to_f64(&exact),
        exact: Some(exact),
        zero_pow_zero,
    })
}

/// Float evaluation through a sum of logarithms; entries must be nonnegative.
pub fn evaluate_f64(r: &FullRatio, m: &SymMatrix<f64>) -> Result<Evaluation> {
    check_size(r, m.n())?;
    let n = m.n();
    let mut log_sum = 0.0;
    let mut zero_factor = false;
    let mut zero_pow_zero = false;
    for i in 0..n {
        for j in i..n {
            let e = r.exponent(i, j);
            let base = *m.get(i, j);
            if base < 0.0 {
                return Err(Error::Domain(format!(
                    "negative entry at ({}, {}) in float evaluation",
                    i + 1,
                    j + 1
                )));
            }
            if e.is_zero() {
                zero_pow_zero |= base == 0.0;
                continue;
            }
            if base == 0.0 {
                if e.is_negative() {
                    return Err(Error::Domain("zero entry raised to a negative exponent".into()));
                }
                zero_factor = true;
                continue;
            }
            log_sum += Scalar::to_f64(e) * base.ln();
        }
    }
    Ok(Evaluation {
        exact: None,
        value: if zero_factor { 0.0 } else { log_sum.exp() },
        zero_pow_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentzian::{scale, witness_pentagonal};
    use crate::ratio::{alexandrov_fenchel, pentagonal, triangular};
    use crate::scalar::{int, rat};

    #[test]
    fn pentagonal_on_witness() {
        let m = witness_pentagonal(&int(1)).unwrap();
        let v = evaluate(&pentagonal(1, 2, 3, 4, 5, 5).unwrap(), &m.clone().into()).unwrap();
        assert_eq!(v.exact, Some(rat(32, 9)));
        // p11 = 0 carries exponent 0
        assert!(v.zero_pow_zero);
        let f = evaluate_f64(&pentagonal(1, 2, 3, 4, 5, 5).unwrap(), &m.to_f64()).unwrap();
        assert!((f.value - 32.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn simple_values() {
        let ones = SymMatrix::from_upper(3, |_, _| int(1));
        let v = evaluate(&triangular(1, 2, 3, 3).unwrap(), &ones.into()).unwrap();
        assert_eq!(v.exact, Some(int(1)));
        let m = SymMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(1)]]).unwrap();
        let v = evaluate(&alexandrov_fenchel(1, 2, 2).unwrap(), &m.into()).unwrap();
        assert_eq!(v.exact, Some(rat(1, 4)));
    }

    #[test]
    fn scale_invariance() {
        let m = witness_pentagonal(&rat(1, 3)).unwrap();
        let s = scale(&m, &[int(2), rat(1, 5), int(7), rat(3, 2), int(1)]).unwrap();
        let r = pentagonal(1, 2, 3, 4, 5, 5).unwrap();
        assert_eq!(
            evaluate(&r, &m.into()).unwrap().exact,
            evaluate(&r, &s.into()).unwrap().exact
        );
    }

    #[test]
    fn zero_base_negative_exponent() {
        let m = SymMatrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        let r = alexandrov_fenchel(1, 2, 2).unwrap();
        assert!(matches!(evaluate(&r, &m.clone().into()), Err(Error::Domain(_))));
        assert!(matches!(evaluate_f64(&r, &m.to_f64()), Err(Error::Domain(_))));
    }
}
