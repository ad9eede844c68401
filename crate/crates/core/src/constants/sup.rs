use rayon::prelude::*;

use crate::cutcone::permutations;
use crate::error::{Error, Result};
use crate::lorentzian::{
    rank2_hessian, sample_rank2_params, witness_pentagonal, witness_triangular, AnyMatrix, Rank2Distribution,
    SymMatrix,
};
use crate::ratio::{evaluate, is_bounded, FullRatio};
use crate::rng::SeedStream;
use crate::scalar::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupConfig {
    pub iterations: usize,
    pub seed: u64,
    pub distribution: Rank2Distribution,
}

impl Default for SupConfig {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            seed: 0,
            distribution: Rank2Distribution::default(),
        }
    }
}

/// Best value seen; a lower bound on the optimal constant, never a claim of optimality.
#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    pub empirical_sup: f64,
    /// Exact value at the argmax when the ratio is integral.
    pub exact: Option<Rational>,
    pub argmax: SymMatrix<Rational>,
    /// Which sample or witness produced the argmax.
    pub source: String,
    pub evaluated: usize,
}

struct Candidate {
    value: f64,
    exact: Option<Rational>,
    matrix: SymMatrix<Rational>,
    source: String,
    order: (u8, usize),
}

impl Candidate {
    /// Larger value wins; ties go to the earlier candidate so results do not
    /// depend on the reduction order.
    fn better(self, other: Candidate) -> Candidate {
        let ord = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => self.value.total_cmp(&other.value),
        };
        match ord.then_with(|| other.order.cmp(&self.order)) {
            std::cmp::Ordering::Less => other,
            _ => self,
        }
    }
}

fn try_candidate(r: &FullRatio, m: SymMatrix<Rational>, source: String, order: (u8, usize)) -> Option<Candidate> {
    let e = evaluate(r, &AnyMatrix::Rational(m.clone())).ok()?;
    e.value.is_finite().then_some(Candidate {
        value: e.value,
        exact: e.exact,
        matrix: m,
        source,
        order,
    })
}

/// Deterministic witness families, tried under every relabelling of the indices.
fn witness_matrices(n: usize) -> Vec<(SymMatrix<Rational>, String)> {
    let family: Vec<(SymMatrix<Rational>, String)> = match n {
        3 => (0..=4)
            .map(|k| {
                let eps = rat(1, 10i64.pow(k));
                (witness_triangular(&eps).expect("eps in (0, 1]"), format!("triangular witness eps={eps}"))
            })
            .collect(),
        5 => (0..=4)
            .map(|k| {
                let t = rat(1, 10i64.pow(k));
                (witness_pentagonal(&t).expect("t >= 0"), format!("pentagonal witness t={t}"))
            })
            .collect(),
        _ => Vec::new(),
    };
    let perms = if family.is_empty() { Vec::new() } else { permutations(n) };
    let mut out = Vec::new();
    for (m, name) in &family {
        for p in &perms {
            let label: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
            out.push((
                m.permuted(p).expect("permutation of matching size"),
                format!("{name} perm=[{}]", label.join(",")),
            ));
        }
    }
    out
}

/// Maximises the ratio over seeded rank-2 samples and the witness families.
pub fn estimate_sup(r: &FullRatio, config: &SupConfig) -> Result<SupEstimate> {
    let cert = is_bounded(&r.reduced())?;
    if !cert.bounded {
        return Err(Error::Domain(format!(
            "ratio is unbounded (positive on the cut {:?})",
            cert.violating_subset.unwrap_or_default()
        )));
    }
    let n = r.n();
    let stream = SeedStream::new(config.seed);
    // validate the distribution once so sample errors below are impossible
    sample_rank2_params(n, &config.distribution, &mut stream.rng(u64::MAX))?;
    let sampled = (0..config.iterations)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = stream.rng(k as u64);
            let params = sample_rank2_params(n, &config.distribution, &mut rng).ok()?;
            try_candidate(r, rank2_hessian(&params), format!("rank-2 sample {k}"), (1, k))
        })
        .reduce_with(Candidate::better);
    let witnesses = witness_matrices(n)
        .into_iter()
        .enumerate()
        .filter_map(|(k, (m, s))| try_candidate(r, m, s, (0, k)))
        .reduce(Candidate::better);
    let best = match (sampled, witnesses) {
        (Some(a), Some(b)) => a.better(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::Domain("no sample produced a finite value".into()));
        }
    };
    Ok(SupEstimate {
        empirical_sup: best.value,
        exact: best.exact,
        argmax: best.matrix,
        source: best.source,
        evaluated: config.iterations + witness_matrices(n).len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{pentagonal, triangular};
    use crate::scalar::int;

    fn cfg(iterations: usize) -> SupConfig {
        SupConfig {
            iterations,
            seed: 11,
            ..SupConfig::default()
        }
    }

    #[test]
    fn pentagonal_sweep_reaches_four() {
        let r = pentagonal(1, 2, 3, 4, 5, 5).unwrap();
        let e = estimate_sup(&r, &cfg(200)).unwrap();
        assert!(e.empirical_sup > 3.9999 && e.empirical_sup <= 4.0, "{}", e.empirical_sup);
        assert!(e.exact.unwrap() <= int(4));
        assert!(e.source.starts_with("pentagonal witness"));
    }

    #[test]
    fn triangular_stays_below_two() {
        let r = triangular(1, 2, 3, 3).unwrap();
        let e = estimate_sup(&r, &cfg(500)).unwrap();
        assert!(e.exact.clone().unwrap() <= int(2));
        assert!(e.empirical_sup > 1.999);
    }

    #[test]
    fn normalized_pentagonal() {
        let r = pentagonal(1, 2, 3, 4, 5, 5).unwrap().scaled(&rat(1, 2));
        let e = estimate_sup(&r, &cfg(200)).unwrap();
        assert!(e.exact.is_none());
        assert!(e.empirical_sup <= 2.0 + 1e-12 && e.empirical_sup > 1.9999);
    }

    #[test]
    fn deterministic_and_rejects_unbounded() {
        let r = triangular(1, 2, 3, 4).unwrap();
        let a = estimate_sup(&r, &cfg(300)).unwrap();
        let b = estimate_sup(&r, &cfg(300)).unwrap();
        assert_eq!(a, b);
        assert!(matches!(estimate_sup(&r.scaled(&int(-1)), &cfg(10)), Err(Error::Domain(_))));
    }
}
