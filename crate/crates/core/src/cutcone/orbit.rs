use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{pair_count, pair_index, pairs, FacetNormal};
use crate::error::{Error, Result};

/// Largest `n` for which canonical forms are computed by scanning all of `S_n`.
pub const MAX_ORBIT_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: FacetNormal,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub orbits: Vec<Orbit>,
    pub total: usize,
}

impl OrbitReport {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Where each pair coordinate goes under the vertex permutation `perm`.
pub fn pair_permutation(n: usize, perm: &[usize]) -> Vec<usize> {
    pairs(n)
        .into_iter()
        .map(|(i, j)| pair_index(n, perm[i], perm[j]))
        .collect()
}

fn apply(coords: &[i64], map: &[usize], out: &mut [i64]) {
    for (k, &t) in map.iter().enumerate() {
        out[t] = coords[k];
    }
}

fn canonical_with(coords: &[i64], maps: &[Vec<usize>]) -> Vec<i64> {
    let mut best = coords.to_vec();
    let mut buf = vec![0; coords.len()];
    for map in maps {
        apply(coords, map, &mut buf);
        if buf < best {
            best.copy_from_slice(&buf);
        }
    }
    best
}

fn all_maps(n: usize) -> Result<Vec<Vec<usize>>> {
    if n > MAX_ORBIT_N {
        return Err(Error::Capability(format!(
            "orbit canonical forms are supported for n <= {MAX_ORBIT_N}, got {n}"
        )));
    }
    Ok(permutations(n)
        .iter()
        .map(|p| pair_permutation(n, p))
        .collect())
}

/// Lexicographic minimum of the `S_n`-orbit of a pair-indexed vector.
pub fn canonical_form(n: usize, coords: &[i64]) -> Result<Vec<i64>> {
    if coords.len() != pair_count(n) {
        return Err(Error::Structural(format!(
            "expected {} pair coordinates for n = {n}",
            pair_count(n)
        )));
    }
    Ok(canonical_with(coords, &all_maps(n)?))
}

/// Groups facet normals into `S_n`-orbits; orbits are sorted by representative.
pub fn orbit_classify(n: usize, normals: &[FacetNormal]) -> Result<OrbitReport> {
    if let Some(bad) = normals.iter().find(|f| f.n != n || f.coords.len() != pair_count(n)) {
        return Err(Error::Structural(format!(
            "normal of size n = {} in a list for n = {n}",
            bad.n
        )));
    }
    let maps = all_maps(n)?;
    let canon: Vec<Vec<i64>> = normals
        .par_iter()
        .map(|f| canonical_with(&f.coords, &maps))
        .collect();
    let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for c in canon {
        *counts.entry(c).or_default() += 1;
    }
    let orbits = counts
        .into_iter()
        .map(|(coords, size)| Orbit {
            representative: FacetNormal { n, coords },
            size,
        })
        .collect();
    Ok(OrbitReport {
        orbits,
        total: normals.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count_and_order() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
        assert_eq!(permutations(5).len(), 120);
    }

    #[test]
    fn transposition_action() {
        // swapping vertices 1 and 3 at n=3 exchanges pairs 12 and 23
        let map = pair_permutation(3, &[2, 1, 0]);
        let mut out = vec![0; 3];
        apply(&[1, -1, -1], &map, &mut out);
        assert_eq!(out, vec![-1, -1, 1]);
    }

    #[test]
    fn triangles_form_one_orbit() {
        let normals: Vec<FacetNormal> = [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
            .iter()
            .map(|c| FacetNormal::new(3, c.to_vec()).unwrap())
            .collect();
        let r = orbit_classify(3, &normals).unwrap();
        assert_eq!(r.total, 3);
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].representative.coords, vec![-1, -1, 1]);
    }

    #[test]
    fn mixed_sizes_rejected() {
        let normals = vec![
            FacetNormal::new(3, vec![1, -1, -1]).unwrap(),
            FacetNormal::new(4, vec![0; 6]).unwrap(),
        ];
        assert!(matches!(orbit_classify(3, &normals), Err(Error::Structural(_))));
    }
}
