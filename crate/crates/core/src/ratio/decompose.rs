use std::collections::HashSet;

use super::{is_bounded, FullRatio};
use crate::cutcone::{canonical_subsets, cut_dot, pair_count, FacetNormal};
use crate::error::{Error, Result};

struct Search<'a> {
    n: usize,
    basis: &'a [Vec<i64>],
    cuts: Vec<u64>,
    failed: HashSet<(Vec<i64>, usize)>,
    picks: Vec<usize>,
}

impl Search<'_> {
    fn bounded(&self, v: &[i64]) -> bool {
        self.cuts.iter().all(|&s| cut_dot(self.n, v, s) <= 0)
    }

    /// Depth-first over nondecreasing basis indices; every residual stays in the
    /// dual cone, so it is a bounded ratio with coordinate sum `<= -1` unless zero.
    fn run(&mut self, residual: Vec<i64>, start: usize, budget: i64) -> bool {
        if residual.iter().all(|&x| x == 0) {
            return true;
        }
        if budget <= 0 || self.failed.contains(&(residual.clone(), start)) {
            return false;
        }
        for idx in start..self.basis.len() {
            let next: Vec<i64> = residual
                .iter()
                .zip(&self.basis[idx])
                .map(|(a, b)| a - b)
                .collect();
            if !self.bounded(&next) {
                continue;
            }
            self.picks.push(idx);
            if self.run(next, idx, budget - 1) {
                return true;
            }
            self.picks.pop();
        }
        self.failed.insert((residual, start));
        false
    }
}

/// Writes an integral bounded ratio as a nonnegative integer combination of
/// `basis` ratios (facet normals, compared through their reduced parts).
///
/// Returns `(basis index, coefficient)` pairs, or `None` if no combination
/// with at most `sum |alpha_ij|` terms exists.
pub fn decompose(r: &FullRatio, basis: &[FacetNormal]) -> Result<Option<Vec<(usize, u64)>>> {
    let n = r.n();
    if !r.is_integral() {
        return Err(Error::Domain("decomposition needs integral exponents".into()));
    }
    let reduced = r.reduced();
    if !is_bounded(&reduced)?.bounded {
        return Err(Error::Domain("ratio is unbounded".into()));
    }
    if let Some(b) = basis.iter().find(|b| b.n != n || b.coords.len() != pair_count(n)) {
        return Err(Error::Structural(format!(
            "basis element of size n = {} for a ratio with n = {n}",
            b.n
        )));
    }
    let target = reduced
        .to_integers()
        .ok_or_else(|| Error::Capability("exponents exceed the 64-bit range".into()))?;
    let budget: i64 = target.iter().map(|x| x.abs()).sum();
    let coords: Vec<Vec<i64>> = basis.iter().map(|b| b.coords.clone()).collect();
    let mut search = Search {
        n,
        basis: &coords,
        cuts: canonical_subsets(n).collect(),
        failed: HashSet::new(),
        picks: Vec::new(),
    };
    if !search.run(target, 0, budget) {
        return Ok(None);
    }
    let mut out: Vec<(usize, u64)> = Vec::new();
    for idx in search.picks {
        match out.last_mut() {
            Some((last, c)) if *last == idx => *c += 1,
            _ => out.push((idx, 1)),
        }
    }
    Ok(Some(out))
}
