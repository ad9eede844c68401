//! Exact polynomial expansion of ratios under the rank-2 substitution
//! `p_ij = a_i b_j + a_j b_i`, and the check that the bounded-ratio
//! difference has only nonnegative coefficients.

mod poly;

pub use poly::{format_monomial, poly_from_entry, IntPoly, SerialPoly, SerialTerm, MAX_POLY_N};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{is_bounded, FullRatio};

#[derive(Debug, Clone, PartialEq)]
pub struct SubfreeReport {
    /// Every coefficient of `difference` is nonnegative.
    pub holds: bool,
    pub negative_terms: Vec<(Vec<u32>, BigInt)>,
    pub term_count: usize,
    /// `sum alpha_ii`.
    pub diag_sum: i64,
    /// `sum alpha_ii < 0`: the power of two multiplies the positive side
    /// instead, giving `N - 2^{-s} P`.
    pub rearranged: bool,
    /// `2^s N - P` (or the rearranged form), `N` and `P` the products over
    /// negative and positive exponents.
    pub difference: IntPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SerialNegativeTerm {
    pub exps: Vec<u32>,
    pub monomial: String,
    pub coef: String,
}

impl SubfreeReport {
    pub fn serial_negative_terms(&self) -> Vec<SerialNegativeTerm> {
        let n = self.difference.n();
        self.negative_terms
            .iter()
            .map(|(exps, c)| SerialNegativeTerm {
                monomial: format_monomial(n, exps),
                exps: exps.clone(),
                coef: c.to_string(),
            })
            .collect()
    }
}

/// Exponents of `r` over `i <= j` as `(i, j, e)`, 1-based, zero entries skipped.
fn integral_exponents(r: &FullRatio) -> Result<Vec<(usize, usize, i64)>> {
    let n = r.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let e = r.exponent(i, j);
            if e.is_zero() {
                continue;
            }
            if !e.is_integer() {
                return Err(Error::Domain(format!(
                    "exponent {e} at ({}, {}) is not an integer",
                    i + 1,
                    j + 1
                )));
            }
            let k = e
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Capability(format!("exponent {e} too large")))?;
            out.push((i + 1, j + 1, k));
        }
    }
    Ok(out)
}

fn product(n: usize, factors: impl Iterator<Item = (usize, usize, u32)>) -> Result<IntPoly> {
    let mut acc = IntPoly::one(n)?;
    for (i, j, e) in factors {
        let f = poly_from_entry(i, j, n)?;
        for _ in 0..e {
            acc = acc.mul(&f)?;
        }
    }
    Ok(acc)
}

/// Expands `2^{sum alpha_ii} prod p_ij^{-alpha_ij} (alpha < 0) - prod p_ij^{alpha_ij} (alpha > 0)`
/// and reports the sign of every coefficient.
pub fn subfree_check(r: &FullRatio) -> Result<SubfreeReport> {
    let n = r.n();
    let exps = integral_exponents(r)?;
    let cert = is_bounded(&r.reduced())?;
    if !cert.bounded {
        return Err(Error::Domain(format!(
            "ratio is unbounded (positive on the cut {:?})",
            cert.violating_subset.unwrap_or_default()
        )));
    }
    let diag_sum: i64 = exps.iter().filter(|(i, j, _)| i == j).map(|(_, _, e)| e).sum();
    let to_u32 = |e: i64| {
        u32::try_from(e.unsigned_abs()).map_err(|_| Error::Capability(format!("exponent {e} too large")))
    };
    // negative side first keeps intermediate term counts small
    let neg_factors = exps
        .iter()
        .filter(|(_, _, e)| *e < 0)
        .map(|&(i, j, e)| to_u32(e).map(|e| (i, j, e)))
        .collect::<Result<Vec<_>>>()?;
    let pos_factors = exps
        .iter()
        .filter(|(_, _, e)| *e > 0)
        .map(|&(i, j, e)| to_u32(e).map(|e| (i, j, e)))
        .collect::<Result<Vec<_>>>()?;
    let neg = product(n, neg_factors.into_iter())?;
    let pos = product(n, pos_factors.into_iter())?;
    let two_pow = BigInt::from(1) << to_u32(diag_sum)?;
    let rearranged = diag_sum < 0;
    let difference = if rearranged {
        neg.sub(&pos.scale(&two_pow))?
    } else {
        neg.scale(&two_pow).sub(&pos)?
    };
    let negative_terms = difference.negative_terms();
    Ok(SubfreeReport {
        holds: negative_terms.is_empty(),
        term_count: difference.term_count(),
        negative_terms,
        diag_sum,
        rearranged,
        difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutcone::enumerate_facets;
    use crate::ratio::{complete_diagonal, pentagonal, triangular, ReducedRatio};
    use crate::scalar::int;

    #[test]
    fn triangular_difference() {
        let r = triangular(2, 3, 1, 3).unwrap();
        let rep = subfree_check(&r).unwrap();
        assert!(rep.holds && !rep.rearranged);
        assert_eq!(rep.diag_sum, 1);
        assert_eq!(rep.difference.to_string(), "2*a1^2*b2*b3 + 2*a2*a3*b1^2");
    }

    #[test]
    fn pentagonal_holds() {
        let rep = subfree_check(&pentagonal(1, 2, 3, 4, 5, 5).unwrap()).unwrap();
        assert!(rep.holds);
        assert!(rep.term_count > 0);
    }

    #[test]
    fn zero_ratio() {
        let r = complete_diagonal(&ReducedRatio::from_integers(3, &[0, 0, 0]).unwrap());
        let rep = subfree_check(&r).unwrap();
        assert!(rep.holds && rep.difference.is_zero() && rep.term_count == 0);
    }

    #[test]
    fn rejects_fractional_and_unbounded() {
        let half = triangular(1, 2, 3, 3).unwrap().scaled(&crate::scalar::rat(1, 2));
        assert!(matches!(subfree_check(&half), Err(Error::Domain(_))));
        let neg = triangular(1, 2, 3, 3).unwrap().scaled(&int(-1));
        assert!(matches!(subfree_check(&neg), Err(Error::Domain(_))));
    }

    #[test]
    fn facets_up_to_five() {
        for n in 3..=5 {
            for f in enumerate_facets(n).unwrap() {
                let r = complete_diagonal(&ReducedRatio::from_facet(&f));
                assert!(subfree_check(&r).unwrap().holds, "n={n} {:?}", f.coords);
            }
        }
    }
}
