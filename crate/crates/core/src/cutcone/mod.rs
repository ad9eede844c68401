//! Cut vectors, the cut cone, and its facets.
//!
//! Pair-indexed vectors use the lexicographic order `(1,2), (1,3), ...,
//! (n-1,n)`. Subsets are bitmasks over 0-based vertices; the canonical
//! representative of a cut never contains vertex 1 (bit 0).

mod dd;
mod hypermetric;
mod orbit;

use std::ops::Add;

use num_traits::Zero;
use serde::Serialize;

pub use dd::{enumerate_facets, enumerate_facets_with, extreme_rays, AdjacencyTest, DdConfig};
pub use hypermetric::{hypermetric_ratio, HypermetricRatio};
pub use orbit::{canonical_form, orbit_classify, pair_permutation, permutations, Orbit, OrbitReport};

use crate::error::{Error, Result};

/// Largest `n` for which cut vectors are listed explicitly.
pub const MAX_RAYS_N: usize = 8;
/// Largest `n` for which all canonical cuts are scanned when checking a ratio.
pub const MAX_SCAN_N: usize = 20;

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{i, j}` (0-based, `i != j`) in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)`, `i < j`, 0-based, in coordinate order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect()
}

/// 1-based `"i,j"` labels, the keys used by the JSON formats.
pub fn pair_labels(n: usize) -> Vec<String> {
    pairs(n)
        .into_iter()
        .map(|(i, j)| format!("{},{}", i + 1, j + 1))
        .collect()
}

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Complement-normalises a subset so that it excludes vertex 1.
pub fn canonical_subset(n: usize, subset: u64) -> u64 {
    if subset & 1 == 1 {
        full_mask(n) & !subset
    } else {
        subset
    }
}

/// Iterator over the `2^{n-1} - 1` canonical nonempty proper subsets.
pub fn canonical_subsets(n: usize) -> impl Iterator<Item = u64> {
    let count: u64 = if n == 0 { 0 } else { (1u64 << (n - 1)) - 1 };
    (1..=count).map(|k| k << 1)
}

/// 1-based element list of a subset mask.
pub fn subset_elements(subset: u64) -> Vec<usize> {
    (0..64).filter(|b| subset >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn subset_from_elements(n: usize, elements: &[usize]) -> Result<u64> {
    let mut mask = 0u64;
    for &e in elements {
        if e == 0 || e > n {
            return Err(Error::Structural(format!("element {e} outside [1, {n}]")));
        }
        mask |= 1 << (e - 1);
    }
    Ok(mask)
}

/// `sum_{i in S, j not in S} coords[(i, j)]`, i.e. the inner product with `delta(S)`.
pub fn cut_dot<T>(n: usize, coords: &[T], subset: u64) -> T
where
    T: Clone + Zero + Add<Output = T>,
{
    let mut acc = T::zero();
    for i in 0..n {
        let in_i = subset >> i & 1 == 1;
        for j in (i + 1)..n {
            if in_i != (subset >> j & 1 == 1) {
                acc = acc + coords[pair_index(n, i, j)].clone();
            }
        }
    }
    acc
}

/// The cut vector `delta(S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CutVector {
    pub n: usize,
    pub subset: u64,
    pub coords: Vec<u8>,
}

impl CutVector {
    /// `delta(emptyset) = delta([n]) = 0` does not generate a ray.
    pub fn is_generator(&self) -> bool {
        self.subset != 0
    }

    pub fn elements(&self) -> Vec<usize> {
        subset_elements(self.subset)
    }
}

pub fn cut_vector(n: usize, subset: u64) -> Result<CutVector> {
    if n == 0 || n > 64 || subset & !full_mask(n) != 0 {
        return Err(Error::Structural(format!("subset {subset:#b} is not contained in [{n}]")));
    }
    let subset = canonical_subset(n, subset);
    let coords = pairs(n)
        .into_iter()
        .map(|(i, j)| u8::from((subset >> i & 1) != (subset >> j & 1)))
        .collect();
    Ok(CutVector { n, subset, coords })
}

/// The canonical nonzero cut vectors, which generate the extreme rays of `Cut_n`.
pub fn cut_cone_rays(n: usize) -> Result<Vec<CutVector>> {
    if !(2..=MAX_RAYS_N).contains(&n) {
        return Err(Error::Capability(format!(
            "cut cone rays are listed for 2 <= n <= {MAX_RAYS_N}, got {n}"
        )));
    }
    canonical_subsets(n).map(|s| cut_vector(n, s)).collect()
}

/// A primitive integer facet normal of `Cut_n`, oriented so that
/// `alpha . delta(S) <= 0` on the whole cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FacetNormal {
    pub n: usize,
    pub coords: Vec<i64>,
}

impl FacetNormal {
    pub fn new(n: usize, coords: Vec<i64>) -> Result<Self> {
        if coords.len() != pair_count(n) {
            return Err(Error::Structural(format!(
                "expected {} pair coordinates for n = {n}, got {}",
                pair_count(n),
                coords.len()
            )));
        }
        Ok(Self { n, coords })
    }

    pub fn dot_cut(&self, subset: u64) -> i64 {
        cut_dot(self.n, &self.coords, subset)
    }

    /// Canonical subsets on which the inequality is tight.
    pub fn tight_subsets(&self) -> Vec<u64> {
        canonical_subsets(self.n).filter(|&s| self.dot_cut(s) == 0).collect()
    }

    /// Valid on the cone and tight on cut vectors spanning a hyperplane.
    pub fn is_facet(&self) -> bool {
        if canonical_subsets(self.n).any(|s| self.dot_cut(s) > 0) {
            return false;
        }
        let tight: Vec<Vec<i64>> = self
            .tight_subsets()
            .into_iter()
            .map(|s| {
                cut_vector(self.n, s)
                    .map(|c| c.coords.into_iter().map(i64::from).collect())
                    .unwrap_or_default()
            })
            .collect();
        crate::linalg::rank_i64(&tight) + 1 == pair_count(self.n)
    }
}
