//! Log-domain metrics `d_ij = log p_ij`: the `Delta_n(T_p)` conditions,
//! hyperbolicity, tree metrics, Gromov's tree approximation and cut
//! decompositions of trees.

mod gromov;
mod hyperbolic;
mod tree;

pub use gromov::{ceil_log2, gromov_tree_approx, metric_repair, tree_approx_report, TreeApproxReport};
pub use hyperbolic::{
    delta_tp_violation, four_point_check, four_point_violation, hyperbolicity_delta, in_delta_tp,
};
pub use tree::{
    cut_decomposition, random_tree, tree_metric, tree_reconstruct, CutDecomposition, CutTerm,
    PhyloTree, TreeEdge,
};

use crate::cutcone::{pair_count, pair_index};
use crate::error::{Error, Result};
use crate::lorentzian::SymMatrix;
use crate::scalar::{from_f64, Rational, Scalar};

/// A symmetric, pair-indexed function with zero diagonal and nonnegative values.
///
/// The triangle inequality is not required: logs of normalized Lorentzian
/// matrices can exceed it by up to `2 log 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMetric<T> {
    n: usize,
    d: Vec<T>,
}

impl<T: Scalar> LogMetric<T> {
    pub fn new(n: usize, d: Vec<T>) -> Result<Self> {
        if n == 0 || d.len() != pair_count(n) {
            return Err(Error::Structural(format!(
                "expected {} pair values for n = {n}, got {}",
                pair_count(n),
                d.len()
            )));
        }
        if let Some(k) = d.iter().position(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::Domain(format!(
                "metric value {:?} at pair index {k} is negative or not finite",
                d[k]
            )));
        }
        Ok(Self { n, d })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let d = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::new(n, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.d
    }

    /// `d(i, j)`, zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            T::zero()
        } else {
            self.d[pair_index(self.n, i, j)].clone()
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<LogMetric<U>> {
        LogMetric::new(self.n, self.d.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> LogMetric<f64> {
        LogMetric {
            n: self.n,
            d: self.d.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Largest coordinatewise difference `max (self - other)`.
    pub fn max_gap(&self, other: &Self) -> T {
        self.d
            .iter()
            .zip(&other.d)
            .fold(T::zero(), |acc, (a, b)| T::max_of(acc, a.clone() - b.clone()))
    }

    /// `self <= other` coordinatewise (with the scalar's tolerance).
    pub fn le(&self, other: &Self) -> bool {
        self.d.iter().zip(&other.d).all(|(a, b)| a.le_tol(b))
    }
}

impl LogMetric<f64> {
    /// Exact rational copy of a float metric.
    pub fn to_rational(&self) -> Result<LogMetric<Rational>> {
        LogMetric::new(self.n, self.d.iter().map(|&v| from_f64(v)).collect::<Result<_>>()?)
    }

    /// Logs of the normalization `p_ij / sqrt(p_ii p_jj)` of a matrix with
    /// positive entries. Values below zero by at most `1e-12` (rounding) are
    /// clamped to zero.
    pub fn from_matrix(m: &SymMatrix<f64>) -> Result<Self> {
        let n = m.n();
        if !m.is_positive() {
            return Err(Error::Domain("log metric needs a matrix with positive entries".into()));
        }
        let mut d = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in (i + 1)..n {
                let v = m.get(i, j).ln() - 0.5 * (m.get(i, i).ln() + m.get(j, j).ln());
                if v < -1e-12 {
                    return Err(Error::Domain(format!(
                        "p_{0}{1}^2 < p_{0}{0} p_{1}{1}: the normalized matrix has an entry below 1",
                        i + 1,
                        j + 1
                    )));
                }
                d.push(v.max(0.0));
            }
        }
        Self::new(n, d)
    }
}
