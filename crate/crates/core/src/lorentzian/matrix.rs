use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// A symmetric `n x n` matrix, stored densely in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Structural("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Self::from_flat(n, entries)
    }

    pub fn from_flat(n: usize, entries: Vec<T>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::Structural(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite entry at ({}, {})",
                pos / n + 1,
                pos % n + 1
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::Structural(format!(
                        "matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from the upper triangle; `f(i, j)` is called with `i <= j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[j * n + i] = v.clone();
                entries[i * n + j] = v;
            }
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| *v >= T::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|v| *v > T::zero())
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.n).all(|i| *self.get(i, i) == T::one())
    }

    /// Simultaneous row/column permutation: result `(i, j)` is `self(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Structural("permutation length mismatch".into()));
        }
        Ok(Self::from_upper(self.n, |i, j| self.get(perm[i], perm[j]).clone()))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SymMatrix<U> {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        self.map(|v| v.to_f64())
    }
}

/// A matrix whose scalar kind is decided at runtime (e.g. by a JSON file).
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Rational(SymMatrix<Rational>),
    Float(SymMatrix<f64>),
}

impl AnyMatrix {
    pub fn n(&self) -> usize {
        match self {
            AnyMatrix::Rational(m) => m.n(),
            AnyMatrix::Float(m) => m.n(),
        }
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        match self {
            AnyMatrix::Rational(m) => m.to_f64(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&SymMatrix<Rational>> {
        match self {
            AnyMatrix::Rational(m) => Some(m),
            AnyMatrix::Float(_) => None,
        }
    }
}

impl From<SymMatrix<Rational>> for AnyMatrix {
    fn from(m: SymMatrix<Rational>) -> Self {
        AnyMatrix::Rational(m)
    }
}

impl From<SymMatrix<f64>> for AnyMatrix {
    fn from(m: SymMatrix<f64>) -> Self {
        AnyMatrix::Float(m)
    }
}

/// The scaling action `(c_i c_j p_ij)`.
pub fn scale<T: Scalar>(m: &SymMatrix<T>, c: &[T]) -> Result<SymMatrix<T>> {
    if c.len() != m.n() {
        return Err(Error::Structural(format!(
            "scaling vector has length {}, matrix has size {}",
            c.len(),
            m.n()
        )));
    }

    if let Some(i) = c.iter().position(|v| *v <= T::zero()) {
        return Err(Error::Domain(format!("scaling factor c_{} is not positive", i + 1)));
    }

    Ok(SymMatrix::from_upper(m.n(), |i, j| {
        c[i].clone() * c[j].clone() * m.get(i, j).clone()
    }))
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn rank_exact(m: &SymMatrix<Rational>) -> usize {
    let rows = crate::lorentzian::spectrum::integer_rows(m);
    crate::linalg::bareiss_rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    fn ones(n: usize) -> SymMatrix<Rational> {
        SymMatrix::from_upper(n, |_, _| int(1))
    }

    #[test]
    fn rejects_asymmetric_and_ragged() {
        let e = SymMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(1)]]);
        assert!(matches!(e, Err(Error::Structural(_))));
        let e = SymMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2)]]);
        assert!(matches!(e, Err(Error::Structural(_))));
    }

    #[test]
    fn rejects_nan() {
        let e = SymMatrix::from_rows(vec![vec![f64::NAN]]);
        assert!(matches!(e, Err(Error::Domain(_))));
    }

    #[test]
    fn scale_examples() {
        let m = ones(3);
        assert_eq!(scale(&m, &[int(1), int(1), int(1)]).unwrap(), m);
        let s = scale(&m, &[int(2), int(1), int(1)]).unwrap();
        assert_eq!(
            s.rows(),
            vec![
                vec![int(4), int(2), int(2)],
                vec![int(2), int(1), int(1)],
                vec![int(2), int(1), int(1)]
            ]
        );
        assert!(matches!(scale(&m, &[int(0), int(1), int(1)]), Err(Error::Domain(_))));
    }

    #[test]
    fn rank_of_ones() {
        assert_eq!(rank_exact(&ones(4)), 1);
    }
}
