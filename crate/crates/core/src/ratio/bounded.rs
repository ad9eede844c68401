use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::ReducedRatio;
use crate::cutcone::{subset_elements, MAX_SCAN_N};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Result of checking `alpha . delta(S) <= 0` on every canonical cut.
///
/// Subsets are 1-based element lists in canonical form (vertex 1 excluded).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundednessCertificate {
    pub bounded: bool,
    pub violating_subset: Option<Vec<usize>>,
    pub tight_subsets: Vec<Vec<usize>>,
}

/// Boundedness of a reduced ratio, decided exactly against all `2^{n-1} - 1` cuts.
pub fn is_bounded(r: &ReducedRatio) -> Result<BoundednessCertificate> {
    let n = r.n;
    if !(2..=MAX_SCAN_N).contains(&n) {
        return Err(Error::Capability(format!(
            "boundedness is checked for 2 <= n <= {MAX_SCAN_N}, got {n}"
        )));
    }
    let count = (1u64 << (n - 1)) - 1;
    let signs: Vec<(u64, i8)> = (1..=count)
        .into_par_iter()
        .map(|k| {
            let s = k << 1;
            let v = r.dot_cut(s);
            let sign = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            (s, sign)
        })
        .collect();
    let violating_subset = signs
        .iter()
        .find(|&&(_, sign)| sign > 0)
        .map(|&(s, _)| subset_elements(s));
    let tight_subsets = signs
        .iter()
        .filter(|&&(_, sign)| sign == 0)
        .map(|&(s, _)| subset_elements(s))
        .collect();
    Ok(BoundednessCertificate {
        bounded: violating_subset.is_none(),
        violating_subset,
        tight_subsets,
    })
}

/// Rescales a nonzero bounded ratio to coordinate sum `-1`.
pub fn normalize_ratio(r: &ReducedRatio) -> Result<ReducedRatio> {
    if r.is_zero() {
        return Err(Error::Domain("the zero ratio cannot be normalized".into()));
    }
    let sum = r.sum();
    if sum.is_negative() {
        return Ok(r.scaled(&(-Rational::from_integer(1.into()) / sum)));
    }
    let bounded = r.n <= MAX_SCAN_N && is_bounded(r)?.bounded;
    if bounded {
        return Err(Error::InvariantViolation(format!(
            "nonzero bounded ratio with coordinate sum {sum} >= 0"
        )));
    }
    Err(Error::Domain(format!(
        "coordinate sum {sum} is not negative; the ratio is unbounded"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::pentagonal;
    use crate::scalar::int;

    #[test]
    fn triangle_certificate() {
        let r = ReducedRatio::from_integers(3, &[-1, -1, 1]).unwrap();
        let c = is_bounded(&r).unwrap();
        assert!(c.bounded);
        assert_eq!(c.tight_subsets, vec![vec![2], vec![3]]);
        assert_eq!(c.violating_subset, None);
    }

    #[test]
    fn unbounded_certificate() {
        let r = ReducedRatio::from_integers(3, &[1, 0, 0]).unwrap();
        let c = is_bounded(&r).unwrap();
        assert!(!c.bounded);
        assert_eq!(c.violating_subset, Some(vec![2]));
    }

    #[test]
    fn pentagonal_bounded() {
        let r = pentagonal(1, 2, 3, 4, 5, 5).unwrap().reduced();
        assert!(is_bounded(&r).unwrap().bounded);
        let nr = normalize_ratio(&r).unwrap();
        assert_eq!(nr, r.scaled(&Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn normalize_cases() {
        let t = ReducedRatio::from_integers(3, &[1, -1, -1]).unwrap();
        assert_eq!(normalize_ratio(&t).unwrap(), t);
        assert_eq!(normalize_ratio(&t.scaled(&int(5))).unwrap(), t);
        let zero = ReducedRatio::from_integers(3, &[0, 0, 0]).unwrap();
        assert!(matches!(normalize_ratio(&zero), Err(Error::Domain(_))));
        let up = ReducedRatio::from_integers(3, &[1, 0, 0]).unwrap();
        assert!(matches!(normalize_ratio(&up), Err(Error::Domain(_))));
    }
}
