use serde::Serialize;

use super::{canonical_subsets, cut_dot, pairs, MAX_SCAN_N};
use crate::error::{Error, Result};

/// The pair vector `(h_i h_j)_{i<j}` of a hypermetric inequality.
///
/// Not necessarily primitive, so it is kept apart from `FacetNormal`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypermetricRatio {
    pub n: usize,
    pub h: Vec<i64>,
    pub coords: Vec<i64>,
}

/// Builds `(h_i h_j)` for integer `h` with `sum h = 1` and checks it against every cut.
pub fn hypermetric_ratio(h: &[i64]) -> Result<HypermetricRatio> {
    let n = h.len();
    if n < 2 {
        return Err(Error::Structural("need at least two weights".into()));
    }
    if n > MAX_SCAN_N {
        return Err(Error::Capability(format!("hypermetric check supports n <= {MAX_SCAN_N}")));
    }
    let sum: i128 = h.iter().map(|&v| v as i128).sum();
    if sum != 1 {
        return Err(Error::Domain(format!("weights sum to {sum}, expected 1")));
    }
    let coords = pairs(n)
        .into_iter()
        .map(|(i, j)| {
            h[i].checked_mul(h[j])
                .ok_or_else(|| Error::Capability("weight product overflows".into()))
        })
        .collect::<Result<Vec<i64>>>()?;
    // alpha . delta(S) = h(S) (1 - h(S)) <= 0 for integral h(S)
    if let Some(s) = canonical_subsets(n).find(|&s| cut_dot(n, &coords, s) > 0) {
        return Err(Error::InvariantViolation(format!(
            "hypermetric vector is positive on the cut {s:#b}"
        )));
    }
    Ok(HypermetricRatio {
        n,
        h: h.to_vec(),
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_pentagon() {
        assert_eq!(hypermetric_ratio(&[1, 1, -1]).unwrap().coords, vec![1, -1, -1]);
        let p = hypermetric_ratio(&[1, 1, 1, -1, -1]).unwrap();
        // pairs 12 13 14 15 23 24 25 34 35 45
        assert_eq!(p.coords, vec![1, 1, -1, -1, 1, -1, -1, -1, -1, 1]);
    }

    #[test]
    fn bad_sum() {
        assert!(matches!(hypermetric_ratio(&[1, 1, 1]), Err(Error::Domain(_))));
    }
}
