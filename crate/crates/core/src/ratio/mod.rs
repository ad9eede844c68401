//! Exponent vectors `alpha` of ratios `prod p_ij^{alpha_ij}`: construction,
//! evaluation, boundedness certificates, normalisation and decomposition
//! into primitive ratios.

mod bounded;
mod decompose;
mod eval;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use bounded::{is_bounded, normalize_ratio, BoundednessCertificate};
pub use decompose::decompose;
pub use eval::{evaluate, evaluate_f64, Evaluation};

use crate::cutcone::{cut_dot, pair_count, pair_index, FacetNormal};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

/// Off-diagonal exponents `(alpha_ij)_{i<j}` in pair order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ReducedRatio {
    pub n: usize,
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub coords: Vec<Rational>,
}

impl ReducedRatio {
    pub fn new(n: usize, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != pair_count(n) {
            return Err(Error::Structural(format!(
                "expected {} pair exponents for n = {n}, got {}",
                pair_count(n),
                coords.len()
            )));
        }
        Ok(Self { n, coords })
    }

    pub fn from_integers(n: usize, coords: &[i64]) -> Result<Self> {
        Self::new(n, coords.iter().map(|&v| int(v)).collect())
    }

    pub fn from_facet(f: &FacetNormal) -> Self {
        Self {
            n: f.n,
            coords: f.coords.iter().map(|&v| int(v)).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.coords[pair_index(self.n, i, j)]
    }

    pub fn sum(&self) -> Rational {
        self.coords.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot_cut(&self, subset: u64) -> Rational {
        cut_dot(self.n, &self.coords, subset)
    }

    /// Integer coordinates, if every coordinate is integral and fits in `i64`.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        Self {
            n: self.n,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }
}

/// Exponents including the diagonal, balanced so that the ratio is invariant
/// under the scaling action: `2 alpha_ii = -sum_{j != i} alpha_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FullRatio {
    n: usize,
    #[serde(with = "crate::scalar::serde_rational::vec")]
    offdiag: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational::vec")]
    diag: Vec<Rational>,
}

impl FullRatio {
    pub fn new(n: usize, offdiag: Vec<Rational>, diag: Vec<Rational>) -> Result<Self> {
        let reduced = ReducedRatio::new(n, offdiag)?;
        if diag.len() != n {
            return Err(Error::Structural(format!(
                "expected {n} diagonal exponents, got {}",
                diag.len()
            )));
        }
        let expected = balanced_diagonal(&reduced);
        if let Some(i) = (0..n).find(|&i| diag[i] != expected[i]) {
            return Err(Error::Domain(format!(
                "diagonal exponent {} at index {} breaks the balance 2 a_ii = -sum_j a_ij (expected {})",
                diag[i],
                i + 1,
                expected[i]
            )));
        }
        Ok(Self {
            n,
            offdiag: reduced.coords,
            diag,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offdiag(&self) -> &[Rational] {
        &self.offdiag
    }

    pub fn diag(&self) -> &[Rational] {
        &self.diag
    }

    /// Exponent of `p_ij` (`i == j` allowed), 0-based.
    pub fn exponent(&self, i: usize, j: usize) -> &Rational {
        if i == j {
            &self.diag[i]
        } else {
            &self.offdiag[pair_index(self.n, i, j)]
        }
    }

    /// The projection forgetting the diagonal.
    pub fn reduced(&self) -> ReducedRatio {
        ReducedRatio {
            n: self.n,
            coords: self.offdiag.clone(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.offdiag.iter().chain(&self.diag).all(|c| c.is_integer())
    }

    pub fn diag_sum(&self) -> Rational {
        self.diag.iter().sum()
    }

    pub fn add(&self, other: &FullRatio) -> Result<FullRatio> {
        if self.n != other.n {
            return Err(Error::Structural("ratios of different sizes".into()));
        }
        Ok(FullRatio {
            n: self.n,
            offdiag: self.offdiag.iter().zip(&other.offdiag).map(|(a, b)| a + b).collect(),
            diag: self.diag.iter().zip(&other.diag).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scaled(&self, k: &Rational) -> FullRatio {
        FullRatio {
            n: self.n,
            offdiag: self.offdiag.iter().map(|c| c * k).collect(),
            diag: self.diag.iter().map(|c| c * k).collect(),
        }
    }
}

fn balanced_diagonal(r: &ReducedRatio) -> Vec<Rational> {
    (0..r.n)
        .map(|i| {
            let s: Rational = (0..r.n).filter(|&j| j != i).map(|j| r.get(i, j)).sum();
            -s / int(2)
        })
        .collect()
}

/// Reconstructs `alpha_ii` from the balance identity.
pub fn complete_diagonal(r: &ReducedRatio) -> FullRatio {
    FullRatio {
        n: r.n,
        offdiag: r.coords.clone(),
        diag: balanced_diagonal(r),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    /// `alpha^{ij} = e_ii + e_jj - 2 e_ij`.
    AlexandrovFenchel,
    /// `alpha^{ij|k} = e_ij + e_kk - e_ik - e_jk`.
    Triangular,
    /// `alpha^{ijk|lm} = e_ij + e_ik + e_jk + e_ll + e_lm + e_mm - e_il - e_jl - e_kl - e_im - e_jm - e_km`.
    Pentagonal,
}

impl RatioKind {
    pub fn arity(self) -> usize {
        match self {
            RatioKind::AlexandrovFenchel => 2,
            RatioKind::Triangular => 3,
            RatioKind::Pentagonal => 5,
        }
    }
}

/// Sums signed unit terms `e_ab` literally; `e_aa` lands on the diagonal.
struct TermSum {
    n: usize,
    offdiag: Vec<Rational>,
    diag: Vec<Rational>,
}

impl TermSum {
    fn new(n: usize) -> Self {
        Self {
            n,
            offdiag: vec![Rational::zero(); pair_count(n)],
            diag: vec![Rational::zero(); n],
        }
    }

    fn add(&mut self, a: usize, b: usize, sign: i64) {
        let slot = if a == b {
            &mut self.diag[a]
        } else {
            &mut self.offdiag[pair_index(self.n, a, b)]
        };
        *slot += int(sign);
    }
}

/// A named ratio from 1-based indices: `[i, j]`, `[i, j, k]` for `ij|k`, or
/// `[i, j, k, l, m]` for `ijk|lm`. Repeated indices give the degenerate forms.
pub fn named_ratio(kind: RatioKind, indices: &[usize], n: usize) -> Result<FullRatio> {
    if indices.len() != kind.arity() {
        return Err(Error::Domain(format!(
            "{kind:?} ratio takes {} indices, got {}",
            kind.arity(),
            indices.len()
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&x| x == 0 || x > n) {
        return Err(Error::Domain(format!("index {bad} outside [1, {n}]")));
    }
    let ix: Vec<usize> = indices.iter().map(|&x| x - 1).collect();
    let mut t = TermSum::new(n);
    match kind {
        RatioKind::AlexandrovFenchel => {
            let (i, j) = (ix[0], ix[1]);
            t.add(i, i, 1);
            t.add(j, j, 1);
            t.add(i, j, -2);
        }
        RatioKind::Triangular => {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            t.add(i, j, 1);
            t.add(k, k, 1);
            t.add(i, k, -1);
            t.add(j, k, -1);
        }
        RatioKind::Pentagonal => {
            let (top, bottom) = (&ix[..3], &ix[3..]);
            for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                t.add(top[x], top[y], 1);
            }
            let (l, m) = (bottom[0], bottom[1]);
            t.add(l, l, 1);
            t.add(l, m, 1);
            t.add(m, m, 1);
            for &a in top {
                for &b in bottom {
                    t.add(a, b, -1);
                }
            }
        }
    }
    if t.offdiag.iter().chain(&t.diag).all(Zero::is_zero) {
        return Err(Error::Domain(format!(
            "indices {indices:?} collapse the {kind:?} ratio to zero"
        )));
    }
    FullRatio::new(n, t.offdiag, t.diag)
        .map_err(|e| Error::InvariantViolation(format!("named ratio is unbalanced: {e}")))
}

pub fn alexandrov_fenchel(i: usize, j: usize, n: usize) -> Result<FullRatio> {
    named_ratio(RatioKind::AlexandrovFenchel, &[i, j], n)
}

pub fn triangular(i: usize, j: usize, k: usize, n: usize) -> Result<FullRatio> {
    named_ratio(RatioKind::Triangular, &[i, j, k], n)
}

pub fn pentagonal(i: usize, j: usize, k: usize, l: usize, m: usize, n: usize) -> Result<FullRatio> {
    named_ratio(RatioKind::Pentagonal, &[i, j, k, l, m], n)
}
