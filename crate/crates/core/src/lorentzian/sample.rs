use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::SymMatrix;
use super::witness::{rank2_hessian, Rank2Params};
use crate::error::{Error, Result};
use crate::rng::SeedStream;
use crate::scalar::{from_f64, Rational};

/// Distribution of the entries of `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rank2Distribution {
    /// `exp(U)` with `U` uniform on `[-half_width, half_width]`.
    LogUniform { half_width: f64 },
    /// Uniform on `[lo, hi]` with `0 < lo < hi`.
    Uniform { lo: f64, hi: f64 },
}

impl Default for Rank2Distribution {
    fn default() -> Self {
        Rank2Distribution::LogUniform { half_width: 3.0 }
    }
}

impl Rank2Distribution {
    fn validate(&self) -> Result<()> {
        match *self {
            Rank2Distribution::LogUniform { half_width } if half_width > 0.0 && half_width < 300.0 => Ok(()),
            Rank2Distribution::Uniform { lo, hi } if lo > 0.0 && hi > lo && hi.is_finite() => Ok(()),
            _ => Err(Error::Domain(format!("invalid sampling distribution {self:?}"))),
        }
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            Rank2Distribution::LogUniform { half_width } => {
                rng.random_range(-half_width..=half_width).exp()
            }
            Rank2Distribution::Uniform { lo, hi } => rng.random_range(lo..=hi),
        }
    }
}

/// Draws positive rank-2 parameters; the floats are converted to rationals exactly.
pub fn sample_rank2_params<R: Rng>(
    n: usize,
    dist: &Rank2Distribution,
    rng: &mut R,
) -> Result<Rank2Params<Rational>> {
    if n < 2 {
        return Err(Error::Domain("rank-2 sampling needs n >= 2".into()));
    }
    dist.validate()?;
    let mut draw = |_| from_f64(dist.draw(rng));
    let a = (0..n).map(&mut draw).collect::<Result<Vec<_>>>()?;
    let b = (0..n).map(&mut draw).collect::<Result<Vec<_>>>()?;
    Rank2Params::new(a, b)
}

/// A seeded rank-2 Lorentzian matrix with positive entries.
pub fn sample_rank2(n: usize, seed: u64, dist: &Rank2Distribution) -> Result<SymMatrix<Rational>> {
    let mut rng = SeedStream::new(seed).rng(0);
    Ok(rank2_hessian(&sample_rank2_params(n, dist, &mut rng)?))
}

/// A Lorentzian matrix of generic rank: `u u^T - s G G^T` with `s > 0`
/// chosen so every entry stays nonnegative.
///
/// Exact rational arithmetic throughout, so at most one eigenvalue is positive
/// by construction.
pub fn sample_lorentzian<R: Rng>(n: usize, rng: &mut R) -> Result<SymMatrix<Rational>> {
    if n < 1 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let dist = Rank2Distribution::default();
    let u: Vec<Rational> = (0..n).map(|_| from_f64(dist.draw(rng))).collect::<Result<_>>()?;
    let k = rng.random_range(1..=n);
    let g: Vec<Vec<Rational>> = (0..n)
        .map(|_| {
            (0..k)
                .map(|_| from_f64(rng.random_range(-1.0..=1.0)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let ggt = SymMatrix::from_upper(n, |i, j| {
        g[i].iter().zip(&g[j]).fold(Rational::from_integer(0.into()), |acc, (x, y)| acc + x * y)
    });
    // largest s keeping u_i u_j - s (GG^T)_ij >= 0
    let mut s_max: Option<Rational> = None;
    for i in 0..n {
        for j in i..n {
            let b = ggt.get(i, j);
            if *b > Rational::from_integer(0.into()) {
                let bound = &u[i] * &u[j] / b;
                s_max = Some(match s_max {
                    Some(s) if s <= bound => s,
                    _ => bound,
                });
            }
        }
    }
    let frac = from_f64(rng.random_range(0.05..=1.0))?;
    let s = match s_max {
        Some(s) => s * frac,
        None => frac,
    };
    Ok(SymMatrix::from_upper(n, |i, j| {
        &u[i] * &u[j] - &s * ggt.get(i, j)
    }))
}
