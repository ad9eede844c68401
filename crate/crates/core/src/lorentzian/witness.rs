use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{AnyMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::scalar::{int, pow_int, Rational, Scalar};

/// Nonnegative vectors `a`, `b` parametrising the Hessian of `(a.x)(b.x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank2Params<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
}

impl<T: Scalar> Rank2Params<T> {
    pub fn new(a: Vec<T>, b: Vec<T>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Structural(format!(
                "length mismatch: a has {}, b has {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_empty() {
            return Err(Error::Structural("empty parameter vectors".into()));
        }
        if a.iter().chain(b.iter()).any(|v| *v < T::zero() || !v.is_finite()) {
            return Err(Error::Domain("rank-2 parameters must be finite and nonnegative".into()));
        }
        Ok(Self { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
}

/// Hessian of `(sum a_i x_i)(sum b_i x_i)`: `p_ij = a_i b_j + a_j b_i`.
pub fn rank2_hessian<T: Scalar>(params: &Rank2Params<T>) -> SymMatrix<T> {
    let (a, b) = (&params.a, &params.b);
    SymMatrix::from_upper(params.n(), |i, j| {
        a[i].clone() * b[j].clone() + a[j].clone() * b[i].clone()
    })
}

/// The rank-3 Lorentzian family `M(t)` on which the pentagonal ratio equals
/// `16(1+t)/(2+t)^2`.
pub fn witness_pentagonal(t: &Rational) -> Result<SymMatrix<Rational>> {
    if t.is_negative() {
        return Err(Error::Domain("t must be nonnegative".into()));
    }
    let t = t.clone();
    let z = Rational::zero;
    let o = || int(1);
    let two = || int(2);
    let rows = vec![
        vec![z(), o(), o(), t.clone(), two() + &t],
        vec![o(), z(), o(), two(), two()],
        vec![o(), o(), z(), two() + &t, t.clone()],
        vec![t.clone(), two(), two() + &t, int(4) * &t, int(4) + int(4) * &t],
        vec![two() + &t, two(), t.clone(), int(4) + int(4) * &t, int(4) * &t],
    ];
    SymMatrix::from_rows(rows)
}

/// The equality witness for the pentagonal bound `8^p` on `Delta_5(T_p)`.
///
/// Entries are `2^{p/2}` and `1`; the matrix is exact when `p/2` is an
/// integer and a float matrix otherwise.
pub fn witness_tp(p: &Rational) -> Result<AnyMatrix> {
    if !p.is_positive() {
        return Err(Error::Domain("p must be positive".into()));
    }
    let half = p / int(2);
    if half.denom().is_one() {
        let k = half
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Capability("p too large".into()))?;
        let s = pow_int(&int(2), k)?;
        Ok(AnyMatrix::Rational(tp_matrix(s, int(1))))
    } else {
        let s = 2f64.powf(Scalar::to_f64(&half));
        if !s.is_finite() {
            return Err(Error::Capability("2^(p/2) overflows f64".into()));
        }
        Ok(AnyMatrix::Float(tp_matrix(s, 1.0)))
    }
}

fn tp_matrix<T: Scalar>(s: T, one: T) -> SymMatrix<T> {
    SymMatrix::from_upper(5, |i, j| {
        let a = i < 3;
        let b = j < 3;
        if a != b {
            one.clone()
        } else if a && i == j {
            T::zero()
        } else {
            s.clone()
        }
    })
}

/// `[[e, 2-e, 1], [2-e, e, 1], [1, 1, 1]]`: Lorentzian of rank 2 for
/// `0 < e <= 1`, with triangular ratio `p12 p33 / (p13 p23) = 2 - e`.
pub fn witness_triangular(eps: &Rational) -> Result<SymMatrix<Rational>> {
    if !eps.is_positive() || *eps > int(1) {
        return Err(Error::Domain("epsilon must lie in (0, 1]".into()));
    }
    let off = int(2) - eps;
    SymMatrix::from_rows(vec![
        vec![eps.clone(), off.clone(), int(1)],
        vec![off, eps.clone(), int(1)],
        vec![int(1), int(1), int(1)],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentzian::{is_lorentzian_exact, rank_exact};
    use crate::scalar::rat;

    #[test]
    fn hessian_examples() {
        let p = Rank2Params::new(vec![int(1); 3], vec![int(1); 3]).unwrap();
        let m = rank2_hessian(&p);
        assert!(m.entries().iter().all(|v| *v == int(2)));
        assert!(is_lorentzian_exact(&m).lorentzian);

        let p = Rank2Params::new(vec![int(1), int(0)], vec![int(0), int(1)]).unwrap();
        assert_eq!(
            rank2_hessian(&p).rows(),
            vec![vec![int(0), int(1)], vec![int(1), int(0)]]
        );
        assert!(matches!(
            Rank2Params::new(vec![int(1)], vec![int(1), int(2)]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn pentagonal_witness_shape() {
        let m = witness_pentagonal(&int(0)).unwrap();
        assert_eq!(m.rows()[0], vec![int(0), int(1), int(1), int(0), int(2)]);
        for t in [int(0), rat(1, 2), int(1), int(2), int(10)] {
            let m = witness_pentagonal(&t).unwrap();
            let r = is_lorentzian_exact(&m);
            assert!(r.lorentzian, "t = {t}");
            assert_eq!(r.signature.rank, 3);
            assert_eq!(rank_exact(&m), 3);
        }
        assert!(witness_pentagonal(&int(-1)).is_err());
    }

    #[test]
    fn tp_witness() {
        let AnyMatrix::Rational(m) = witness_tp(&int(2)).unwrap() else {
            panic!("p = 2 should be exact");
        };
        assert_eq!(*m.get(0, 1), int(2));
        assert_eq!(*m.get(0, 3), int(1));
        assert_eq!(*m.get(3, 4), int(2));
        assert_eq!(*m.get(0, 0), int(0));
        assert!(matches!(witness_tp(&int(1)).unwrap(), AnyMatrix::Float(_)));
        assert!(witness_tp(&int(0)).is_err());
    }

    #[test]
    fn triangular_witness_is_lorentzian() {
        for e in [rat(1, 1000), rat(1, 10), int(1)] {
            let m = witness_triangular(&e).unwrap();
            assert!(is_lorentzian_exact(&m).lorentzian);
        }
    }
}
