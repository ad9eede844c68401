//! Double description: extreme rays of a pointed cone `{x : A x <= 0}`.
//!
//! Rays are kept as primitive integer vectors (an exact representation of
//! rational rays up to positive scaling). Intermediate products use `i128`
//! and any coefficient that leaves the `i64` range aborts with a capability
//! error instead of wrapping.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{canonical_subsets, cut_vector, pair_count, FacetNormal};
use crate::error::{EnumerationProgress, Error, Result};
use crate::linalg::rank_i64;
use crate::scalar::Rational;

/// Environment variable holding the memory cap for enumeration, in MiB.
pub const RESOURCE_LIMIT_ENV: &str = "LR_RESOURCE_LIMIT_MB";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdjacencyTest {
    /// No third ray is tight on every constraint the pair shares.
    #[default]
    Combinatorial,
    /// The shared tight constraints have rank `d - 2`.
    Algebraic,
}

#[derive(Debug, Clone, Default)]
pub struct DdConfig {
    pub adjacency: AdjacencyTest,
    pub max_rays: Option<usize>,
    pub memory_limit_mb: Option<u64>,
}

impl DdConfig {
    /// Default configuration with the memory cap taken from `LR_RESOURCE_LIMIT_MB`.
    pub fn from_env() -> Self {
        let memory_limit_mb = std::env::var(RESOURCE_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok());
        Self {
            memory_limit_mb,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
struct Ray {
    v: Vec<i64>,
    /// Bit `k` set iff constraint row `k` (already inserted) is tight.
    zeros: u128,
}

fn dot(row: &[i64], v: &[i64]) -> i128 {
    row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn primitive_i128(v: Vec<i128>) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    let g = if g == 0 { 1 } else { g };
    v.into_iter()
        .map(|x| {
            i64::try_from(x / g)
                .map_err(|_| Error::Capability("ray coefficient exceeds the 64-bit range".into()))
        })
        .collect()
}

/// Rays of the simplicial cone cut out by `basis` rows: `B r_k = -e_k`.
fn simplicial_rays(rows: &[Vec<i64>], basis: &[usize]) -> Result<Vec<Ray>> {
    let d = basis.len();
    // Gauss-Jordan on [B | I] over the rationals.
    let mut m: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .map(|(r, &b)| {
            let mut row: Vec<Rational> = rows[b]
                .iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect();
            row.extend((0..d).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Structural("basis rows are dependent".into()))?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * d {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    let all_basis: u128 = basis.iter().fold(0, |acc, &b| acc | 1u128 << b);
    (0..d)
        .map(|k| {
            let col: Vec<Rational> = (0..d).map(|r| -m[r][d + k].clone()).collect();
            let lcm = col
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = col.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let v = ints
                .iter()
                .map(|x| {
                    (x / &g).to_i64().ok_or_else(|| {
                        Error::Capability("ray coefficient exceeds the 64-bit range".into())
                    })
                })
                .collect::<Result<Vec<i64>>>()?;
            Ok(Ray {
                v,
                zeros: all_basis & !(1u128 << basis[k]),
            })
        })
        .collect()
}

fn ray_bytes(d: usize) -> u64 {
    (d * std::mem::size_of::<i64>() + std::mem::size_of::<Ray>()) as u64
}

/// Extreme rays of `{x : row . x <= 0 for every row}`, sorted lexicographically.
///
/// The rows must span the ambient space (pointed cone) and number at most 128.
pub fn extreme_rays(rows: &[Vec<i64>], config: &DdConfig) -> Result<Vec<Vec<i64>>> {
    let Some(d) = rows.first().map(Vec::len) else {
        return Err(Error::Structural("no constraints given".into()));
    };
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Structural("constraint rows differ in length".into()));
    }
    if rows.len() > 128 {
        return Err(Error::Capability(format!(
            "at most 128 constraints supported, got {}",
            rows.len()
        )));
    }
    if d == 0 {
        return Ok(Vec::new());
    }

    let mut basis = Vec::with_capacity(d);
    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(d);
    for (k, row) in rows.iter().enumerate() {
        chosen.push(row.clone());
        if rank_i64(&chosen) == chosen.len() {
            basis.push(k);
            if basis.len() == d {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    if basis.len() < d {
        return Err(Error::Structural(format!(
            "constraints have rank {} < {d}; the cone is not pointed",
            basis.len()
        )));
    }

    let mut rays = simplicial_rays(rows, &basis)?;
    let mut remaining: Vec<usize> = (0..rows.len()).filter(|k| !basis.contains(k)).collect();
    let total = rows.len();
    let mut processed = d;

    while !remaining.is_empty() {
        // dynamic ordering: the constraint with the fewest tight rays goes next
        let (pos_in_remaining, &h) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &k)| {
                let zeros = rays.par_iter().filter(|r| dot(&rows[k], &r.v) == 0).count();
                (zeros, k)
            })
            .expect("remaining is nonempty");
        remaining.remove(pos_in_remaining);
        let row = &rows[h];
        let bit = 1u128 << h;

        let vals: Vec<i128> = rays.par_iter().map(|r| dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();

        let new_rays: Vec<Ray> = {
            let rays_ref = &rays;
            let vals_ref = &vals;
            let neg_ref = &neg;
            pos.par_iter()
                .map(|&p| -> Result<Vec<Ray>> {
                    let mut out = Vec::new();
                    for &q in neg_ref {
                        let common = rays_ref[p].zeros & rays_ref[q].zeros;
                        if (common.count_ones() as usize) + 2 < d {
                            continue;
                        }
                        let adjacent = match config.adjacency {
                            AdjacencyTest::Combinatorial => !rays_ref.iter().enumerate().any(|(r, ray)| {
                                r != p && r != q && ray.zeros & common == common
                            }),
                            AdjacencyTest::Algebraic => {
                                let tight: Vec<Vec<i64>> = (0..total)
                                    .filter(|&k| common >> k & 1 == 1)
                                    .map(|k| rows[k].clone())
                                    .collect();
                                rank_i64(&tight) + 2 == d
                            }
                        };
                        if !adjacent {
                            continue;
                        }
                        let ap = vals_ref[p];
                        let aq = vals_ref[q];
                        let combo: Vec<i128> = rays_ref[p]
                            .v
                            .iter()
                            .zip(&rays_ref[q].v)
                            .map(|(&xp, &xq)| {
                                ap.checked_mul(xq as i128)
                                    .zip(aq.checked_mul(xp as i128))
                                    .and_then(|(a, b)| a.checked_sub(b))
                                    .ok_or_else(|| {
                                        Error::Capability("ray combination overflowed".into())
                                    })
                            })
                            .collect::<Result<_>>()?;
                        out.push(Ray {
                            v: primitive_i128(combo)?,
                            zeros: common | bit,
                        });
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<Vec<Ray>>>>()?
                .into_iter()
                .flatten()
                .collect()
        };

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() - pos.len() + new_rays.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            match vals[i].signum() {
                0 => {
                    r.zeros |= bit;
                    next.push(r);
                }
                -1 => next.push(r),
                _ => {}
            }
        }
        next.extend(new_rays);
        rays = next;
        processed += 1;

        let progress = || EnumerationProgress {
            inequalities_processed: processed,
            inequalities_total: total,
            rays: rays.len(),
        };
        if let Some(max) = config.max_rays {
            if rays.len() > max {
                return Err(Error::ResourceLimit {
                    message: format!("intermediate ray count {} exceeds the cap {max}", rays.len()),
                    progress: progress(),
                });
            }
        }
        if let Some(mb) = config.memory_limit_mb {
            let bytes = rays.len() as u64 * ray_bytes(d);
            if bytes > mb.saturating_mul(1 << 20) {
                return Err(Error::ResourceLimit {
                    message: format!("ray storage ({bytes} bytes) exceeds {mb} MiB"),
                    progress: progress(),
                });
            }
        }
    }

    let mut out: Vec<Vec<i64>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Facet normals of `Cut_n`, i.e. the primitive bounded ratios, sorted lexicographically.
pub fn enumerate_facets(n: usize) -> Result<Vec<FacetNormal>> {
    enumerate_facets_with(n, &DdConfig::from_env())
}

pub fn enumerate_facets_with(n: usize, config: &DdConfig) -> Result<Vec<FacetNormal>> {
    if !(3..=7).contains(&n) {
        return Err(Error::Capability(format!(
            "facet enumeration supports 3 <= n <= 7, got {n}"
        )));
    }
    let rows: Vec<Vec<i64>> = canonical_subsets(n)
        .map(|s| {
            cut_vector(n, s).map(|c| c.coords.into_iter().map(i64::from).collect())
        })
        .collect::<Result<_>>()?;
    debug_assert!(rows.iter().all(|r: &Vec<i64>| r.len() == pair_count(n)));
    extreme_rays(&rows, config)?
        .into_iter()
        .map(|coords| FacetNormal::new(n, coords))
        .collect()
}
