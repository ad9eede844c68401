use nalgebra::DMatrix;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::{AnyMatrix, SymMatrix};
use crate::linalg;
use crate::scalar::Rational;

/// Inertia of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EigenSignature {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
    pub rank: usize,
}

impl EigenSignature {
    fn new(n_pos: usize, n_neg: usize, n_zero: usize) -> Self {
        Self {
            n_pos,
            n_neg,
            n_zero,
            rank: n_pos + n_neg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LorentzianReport {
    pub lorentzian: bool,
    pub signature: EigenSignature,
}

/// Clears denominators: the result is `D * m` with `D` the lcm of all denominators.
pub(crate) fn integer_rows(m: &SymMatrix<Rational>) -> Vec<Vec<BigInt>> {
    let lcm = m
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    m.rows()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect()
}

/// Exact inertia from the characteristic polynomial.
///
/// A real symmetric matrix has a real-rooted characteristic polynomial, so
/// Descartes' count of sign changes (zeros skipped) is exactly the number of
/// positive eigenvalues; trailing zero coefficients give the zero multiplicity.
pub fn signature_exact(m: &SymMatrix<Rational>) -> EigenSignature {
    let n = m.n();
    let coeffs = linalg::charpoly(&integer_rows(m));
    let n_zero = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
    let mut changes = 0;
    let mut last = Sign::NoSign;
    for c in &coeffs {
        let s = c.sign();
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            changes += 1;
        }
        last = s;
    }
    EigenSignature::new(changes, n - changes - n_zero, n_zero)
}

/// Relative zero threshold for float eigenvalues.
pub const EIGEN_ZERO_REL: f64 = 1e-9;

/// Inertia from a symmetric eigensolver; `|lambda| <= 1e-9 * max(1, ||M||_2)` counts as zero.
pub fn signature_float(m: &SymMatrix<f64>) -> EigenSignature {
    let n = m.n();
    let dm = DMatrix::from_row_slice(n, n, m.entries());
    let eig = dm.symmetric_eigenvalues();
    let norm = eig.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let thresh = EIGEN_ZERO_REL * norm.max(1.0);
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for &l in eig.iter() {
        if l.abs() <= thresh {
            zero += 1;
        } else if l > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    EigenSignature::new(pos, neg, zero)
}

pub fn is_lorentzian_exact(m: &SymMatrix<Rational>) -> LorentzianReport {
    let signature = signature_exact(m);
    let nonneg = m.entries().iter().all(|v| !v.is_negative());
    LorentzianReport {
        lorentzian: nonneg && signature.n_pos <= 1,
        signature,
    }
}

pub fn is_lorentzian_float(m: &SymMatrix<f64>) -> LorentzianReport {
    let signature = signature_float(m);
    let nonneg = m.entries().iter().all(|v| *v >= 0.0);
    LorentzianReport {
        lorentzian: nonneg && signature.n_pos <= 1,
        signature,
    }
}

/// Lorentzian test: exact for rational matrices, thresholded for float matrices.
pub fn is_lorentzian(m: &AnyMatrix) -> LorentzianReport {
    match m {
        AnyMatrix::Rational(m) => is_lorentzian_exact(m),
        AnyMatrix::Float(m) => is_lorentzian_float(m),
    }
}
