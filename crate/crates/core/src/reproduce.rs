//! The acceptance suite: every checkable number, run from one seed.
//!
//! Each criterion returns a pass/fail outcome with a one-line detail; the
//! CLI (`reproduce --all`) and the `acceptance` test target both run it.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{
    fp_delta3, fp_delta3_lp, hard_lemma_check, theorem_c, verify_n3, BarycentricRatio, N3Grid,
};
use crate::cutcone::{
    cut_vector, enumerate_facets, hypermetric_ratio, orbit_classify, pair_count, FacetNormal,
};
use crate::error::{Error, Result};
use crate::linalg::rank_i64;
use crate::lorentzian::{
    is_lorentzian_exact, rank2_hessian, sample_lorentzian, sample_rank2_params, witness_pentagonal,
    witness_tp, AnyMatrix, Rank2Distribution, SymMatrix,
};
use crate::metric::{
    four_point_check, gromov_tree_approx, hyperbolicity_delta, in_delta_tp, random_tree, LogMetric,
};
use crate::ratio::{
    alexandrov_fenchel, complete_diagonal, decompose, evaluate, is_bounded, pentagonal, triangular,
    ReducedRatio,
};
use crate::rng::SeedStream;
use crate::scalar::{from_f64, int, rat, Rational, Scalar};
use crate::subfree::{subfree_check, IntPoly};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// `(id, name)` of every criterion, in order.
pub const CRITERIA: [(u8, &str); 9] = [
    (1, "facet and orbit counts of the cut cone, n = 3..6"),
    (2, "pentagonal ratio bounded by 4 and attained in the limit"),
    (3, "closed-form n = 3 constants agree with numerical optimisation"),
    (4, "facets and hypermetrics are bounded ratios; AF decompositions"),
    (5, "inclusion chain T0 in Lorentzian in T2"),
    (6, "Gromov tree approximation"),
    (7, "cubic lemma XYZ < 32 x1x2x3 y1y2y3"),
    (8, "subtraction-free expansions of facets"),
    (9, "T_p witness and the piecewise T_p constants at n = 3"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {}: {} -- {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_ms
        )
    }
}

/// Sample counts; [`Scale::full`] is the acceptance contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    pub pentagonal_samples: usize,
    pub barycentric_points: usize,
    pub hypermetric_samples: usize,
    pub t2_samples: usize,
    pub tree_samples: usize,
    pub gromov_samples: usize,
    pub lemma_samples: usize,
    pub tp_points: usize,
}

impl Scale {
    pub fn full() -> Self {
        Self {
            pentagonal_samples: 100_000,
            barycentric_points: 100,
            hypermetric_samples: 1_000,
            t2_samples: 10_000,
            tree_samples: 1_000,
            gromov_samples: 1_000,
            lemma_samples: 100_000,
            tp_points: 100,
        }
    }

    /// A reduced run for smoke tests; not the acceptance contract.
    pub fn quick() -> Self {
        Self {
            pentagonal_samples: 500,
            barycentric_points: 5,
            hypermetric_samples: 50,
            t2_samples: 200,
            tree_samples: 50,
            gromov_samples: 50,
            lemma_samples: 1_000,
            tp_points: 20,
        }
    }
}

type Check = Result<(bool, String)>;

pub fn run_criterion(id: u8, seed: u64, scale: &Scale) -> Result<CriterionOutcome> {
    let (_, name) = *CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .ok_or_else(|| Error::Domain(format!("no criterion {id}; valid ids are 1..=9")))?;
    let stream = SeedStream::new(seed).split(u64::from(id));
    let start = Instant::now();
    let result = match id {
        1 => facet_counts(),
        2 => pentagonal_bound(&stream, scale),
        3 => n3_constants(&stream, scale),
        4 => duality(&stream, scale),
        5 => inclusion_chain(&stream, scale),
        6 => tree_approximation(&stream, scale),
        7 => cubic_lemma(&stream, scale),
        8 => subtraction_free(),
        _ => tp_constants(&stream, scale),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let limit = time_limit(id);
    let (passed, detail) = match limit {
        Some(l) if elapsed > l => (false, format!("{detail}; exceeded the {} s budget", l.as_secs())),
        _ => (passed, detail),
    };
    Ok(CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
    })
}

fn time_limit(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(60)),
        2 | 3 => Some(Duration::from_secs(120)),
        8 => Some(Duration::from_secs(300)),
        _ => None,
    }
}

pub fn run_all(seed: u64, scale: &Scale) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, seed, scale).expect("criterion ids are valid"))
        .collect()
}

fn facet_counts() -> Check {
    let expected = [(3, 3, 1), (4, 12, 1), (5, 40, 2), (6, 210, 4)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, facets, orbits) in expected {
        let f = enumerate_facets(n)?;
        let r = orbit_classify(n, &f)?;
        let mut sizes = r.sizes();
        sizes.sort_unstable();
        ok &= f.len() == facets && r.orbits.len() == orbits;
        if n == 5 {
            ok &= sizes == [10, 30];
        }
        parts.push(format!("n={n}: {} facets / {} orbits {:?}", f.len(), r.orbits.len(), sizes));
    }
    Ok((ok, parts.join("; ")))
}

fn pentagonal_bound(stream: &SeedStream, scale: &Scale) -> Check {
    let r = pentagonal(1, 2, 3, 4, 5, 5)?;
    let dist = Rank2Distribution::default();
    let four = int(4);
    let worst = (0..scale.pentagonal_samples)
        .into_par_iter()
        .map(|k| -> Result<Rational> {
            let params = sample_rank2_params(5, &dist, &mut stream.rng(k as u64))?;
            let m = AnyMatrix::Rational(rank2_hessian(&params));
            evaluate(&r, &m)?
                .exact
                .ok_or_else(|| Error::InvariantViolation("integral ratio evaluated inexactly".into()))
        })
        .try_reduce(|| int(0), |a, b| Ok(if a >= b { a } else { b }))?;
    let mut best_witness = 0.0f64;
    let mut formula_ok = true;
    for k in 1..=4 {
        let t = rat(1, 10i64.pow(k));
        let m = witness_pentagonal(&t)?;
        let v = evaluate(&r, &AnyMatrix::Rational(m))?
            .exact
            .ok_or_else(|| Error::InvariantViolation("witness evaluated inexactly".into()))?;
        // 16 (1 + t) / (2 + t)^2
        let expect = int(16) * (int(1) + &t) / ((int(2) + &t) * (int(2) + &t));
        formula_ok &= v == expect && v < four;
        best_witness = best_witness.max(Scalar::to_f64(&v));
    }
    let ok = worst <= four && best_witness >= 3.9999 && formula_ok;
    Ok((
        ok,
        format!(
            "max over {} samples = {:.6} (<= 4: {}), witness sweep max = {best_witness:.8}, closed form matches: {formula_ok}",
            scale.pentagonal_samples,
            Scalar::to_f64(&worst),
            worst <= four
        ),
    ))
}

fn random_barycentric<R: Rng>(rng: &mut R) -> Result<BarycentricRatio> {
    // uniform on the simplex via normalized exponentials
    let e: [f64; 3] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let s = e[0] + e[1] + e[2];
    let (a, b) = (e[0] / s, e[1] / s);
    BarycentricRatio::new(a, b, (1.0 - a - b).max(0.0))
}

fn n3_constants(stream: &SeedStream, scale: &Scale) -> Check {
    let third = 1.0 / 3.0;
    let specials: Vec<(BarycentricRatio, f64)> = [
        ((1.0, 0.0, 0.0), 2.0),
        ((0.0, 1.0, 0.0), 2.0),
        ((0.0, 0.0, 1.0), 2.0),
        ((0.5, 0.5, 0.0), 1.0),
        ((0.5, 0.0, 0.5), 1.0),
        ((0.0, 0.5, 0.5), 1.0),
        ((third, third, 1.0 - 2.0 * third), 1.0),
    ]
    .into_iter()
    .map(|((a, b, c), v)| BarycentricRatio::new(a, b, c).map(|q| (q, v)))
    .collect::<Result<_>>()?;
    let mut points: Vec<BarycentricRatio> = specials.iter().map(|(q, _)| *q).collect();
    for k in 0..scale.barycentric_points {
        points.push(random_barycentric(&mut stream.rng(k as u64))?);
    }
    let grid = N3Grid::default();
    let max_diff = points
        .iter()
        .map(|q| (theorem_c(q) - verify_n3(q, grid)).abs())
        .fold(0.0, f64::max);
    let specials_ok = specials.iter().all(|(q, v)| theorem_c(q) == *v);
    Ok((
        max_diff <= 1e-6 && specials_ok,
        format!(
            "{} points, max |closed form - optimiser| = {max_diff:.2e}, special values exact: {specials_ok}",
            points.len()
        ),
    ))
}

fn duality(stream: &SeedStream, scale: &Scale) -> Check {
    let mut facets_ok = true;
    let mut checked = 0;
    for n in 3..=6 {
        for f in enumerate_facets(n)? {
            let cert = is_bounded(&ReducedRatio::from_facet(&f))?;
            let tight: Vec<Vec<i64>> = cert
                .tight_subsets
                .iter()
                .map(|s| {
                    let mask = s.iter().fold(0u64, |m, &e| m | 1 << (e - 1));
                    cut_vector(n, mask).map(|c| c.coords.iter().map(|&x| i64::from(x)).collect())
                })
                .collect::<Result<_>>()?;
            facets_ok &= cert.bounded && !tight.is_empty() && rank_i64(&tight) + 1 == pair_count(n);
            checked += 1;
        }
    }
    let mut hyper_ok = true;
    for k in 0..scale.hypermetric_samples {
        let mut rng = stream.rng(k as u64);
        let n = rng.random_range(3..=10);
        let mut h: Vec<i64> = (0..n - 1).map(|_| rng.random_range(-3..=3)).collect();
        h.push(1 - h.iter().sum::<i64>());
        let hr = hypermetric_ratio(&h)?;
        hyper_ok &= is_bounded(&ReducedRatio::from_integers(n, &hr.coords)?)?.bounded;
    }
    let basis = enumerate_facets(3)?;
    let find = |coords: [i64; 3]| basis.iter().position(|f| f.coords == coords);
    // alpha^{23|1} = [-1,-1,1], alpha^{13|2} = [-1,1,-1], alpha^{12|3} = [1,-1,-1]
    let (t1, t2, t3) = (find([-1, -1, 1]), find([-1, 1, -1]), find([1, -1, -1]));
    let normalise = |mut v: Vec<(usize, u64)>| {
        v.sort_unstable();
        v
    };
    let d12 = decompose(&alexandrov_fenchel(1, 2, 3)?, &basis)?.map(normalise);
    let d13 = decompose(&alexandrov_fenchel(1, 3, 3)?, &basis)?.map(normalise);
    let want12 = t1.zip(t2).map(|(a, b)| normalise(vec![(a, 1), (b, 1)]));
    let want13 = t1.zip(t3).map(|(a, b)| normalise(vec![(a, 1), (b, 1)]));
    let dec_ok = d12.is_some() && d12 == want12 && d13.is_some() && d13 == want13;
    Ok((
        facets_ok && hyper_ok && dec_ok,
        format!(
            "{checked} facets bounded with full-rank tight sets: {facets_ok}; {} hypermetrics bounded: {hyper_ok}; AF decompositions exact: {dec_ok}",
            scale.hypermetric_samples
        ),
    ))
}

/// `exp` of a random tree metric, built exactly from multiplicative edge
/// weights `>= 1`: `p_ij` is the product of the weights on the path.
fn exp_tree_matrix<R: Rng>(n: usize, rng: &mut R) -> Result<SymMatrix<Rational>> {
    let tree = random_tree(n, rng, |r| {
        if r.random_bool(0.15) {
            int(1)
        } else {
            int(1) + rat(r.random_range(1..=40), r.random_range(1..=8))
        }
    })?;
    let mut rows = vec![vec![int(1); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = tree
                .path_edges(i, j)
                .into_iter()
                .fold(int(1), |acc, e| acc * &tree.edges()[e].len);
            rows[i][j] = w.clone();
            rows[j][i] = w;
        }
    }
    SymMatrix::from_rows(rows)
}

fn inclusion_chain(stream: &SeedStream, scale: &Scale) -> Check {
    let dist = Rank2Distribution::default();
    let two = int(2);
    let t2 = stream.split(1);
    let t2_fail = (0..scale.t2_samples)
        .into_par_iter()
        .map(|k| -> Result<usize> {
            let mut rng = t2.rng(k as u64);
            let n = rng.random_range(3..=7);
            let m = rank2_hessian(&sample_rank2_params(n, &dist, &mut rng)?);
            Ok(usize::from(!in_delta_tp(&AnyMatrix::Rational(m), &two)?))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let trees = stream.split(2);
    let tree_fail = (0..scale.tree_samples)
        .into_par_iter()
        .map(|k| -> Result<usize> {
            let mut rng = trees.rng(k as u64);
            let n = rng.random_range(2..=7);
            let m = exp_tree_matrix(n, &mut rng)?;
            Ok(usize::from(!is_lorentzian_exact(&m).lorentzian))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok((
        t2_fail == 0 && tree_fail == 0,
        format!(
            "rank-2 samples outside T2: {t2_fail}/{}; exponentiated tree metrics not Lorentzian: {tree_fail}/{}",
            scale.t2_samples, scale.tree_samples
        ),
    ))
}

/// A random normalized Lorentzian log-metric, converted exactly to rationals.
fn random_log_metric<R: Rng>(n: usize, rng: &mut R) -> Result<LogMetric<Rational>> {
    loop {
        let m = if rng.random_bool(0.5) {
            rank2_hessian(&sample_rank2_params(n, &Rank2Distribution::default(), rng)?)
        } else {
            sample_lorentzian(n, rng)?
        };
        if m.is_positive() {
            return LogMetric::from_matrix(&m.to_f64())?.to_rational();
        }
    }
}

fn tree_approximation(stream: &SeedStream, scale: &Scale) -> Check {
    let outcomes = (0..scale.gromov_samples)
        .into_par_iter()
        .map(|k| -> Result<(bool, bool, bool, f64)> {
            let mut rng = stream.rng(k as u64);
            let n = rng.random_range(3..=8);
            let d = random_log_metric(n, &mut rng)?;
            let approx = gromov_tree_approx(&d, 0)?;
            let delta = hyperbolicity_delta(&d);
            let bound = delta * int(2 * i64::from(crate::metric::ceil_log2(n)));
            let gap = d.max_gap(&approx);
            let slack = Scalar::to_f64(&(gap.clone() - bound.clone()));
            Ok((four_point_check(&approx), approx.le(&d), gap <= bound, slack))
        })
        .collect::<Result<Vec<_>>>()?;
    let tree_fail = outcomes.iter().filter(|o| !o.0).count();
    let below_fail = outcomes.iter().filter(|o| !o.1).count();
    let bound_fail = outcomes.iter().filter(|o| !o.2).count();
    let worst = outcomes.iter().map(|o| o.3).fold(f64::NEG_INFINITY, f64::max);
    Ok((
        tree_fail + below_fail + bound_fail == 0,
        format!(
            "{} metrics: four-point failures {tree_fail}, d' > d {below_fail}, gap above 2 delta ceil(log2 n) {bound_fail} (max gap - bound = {worst:.3e})",
            outcomes.len()
        ),
    ))
}

/// Positive rationals `x` with `X >= 0`: squares of the sides of a random triangle.
fn triangle_squares<R: Rng>(rng: &mut R) -> Result<[Rational; 3]> {
    let s1 = from_f64(rng.random_range(0.01..1.0))?;
    let s2 = from_f64(rng.random_range(0.01..1.0))?;
    let lo = crate::scalar::abs(&(&s1 - &s2));
    let hi = &s1 + &s2;
    let u = from_f64(rng.random_range(0.0..1.0))?;
    let s3 = &lo + (&hi - &lo) * u;
    if s3 <= int(0) {
        return triangle_squares(rng);
    }
    Ok([&s1 * &s1, &s2 * &s2, &s3 * &s3])
}

fn cubic_lemma(stream: &SeedStream, scale: &Scale) -> Check {
    let target = scale.lemma_samples;
    let chunk = 1_000usize;
    let chunks = target.div_ceil(chunk);
    let per_chunk = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<(usize, usize, usize)> {
            let mut rng = stream.rng(c as u64);
            let want = chunk.min(target - c * chunk);
            let (mut applicable, mut violations, mut draws) = (0, 0, 0);
            while applicable < want {
                draws += 1;
                if draws > 1_000 * chunk {
                    return Err(Error::InvariantViolation("sampler found too few applicable tuples".into()));
                }
                let (x, y) = if rng.random_bool(0.5) {
                    (triangle_squares(&mut rng)?, triangle_squares(&mut rng)?)
                } else {
                    let mut draw = || from_f64(rng.random_range(0.01..1.0));
                    ([draw()?, draw()?, draw()?], [draw()?, draw()?, draw()?])
                };
                let r = hard_lemma_check(&x, &y)?;
                if r.applicable {
                    applicable += 1;
                    violations += usize::from(!r.holds);
                }
            }
            Ok((applicable, violations, draws))
        })
        .collect::<Result<Vec<_>>>()?;
    let applicable: usize = per_chunk.iter().map(|c| c.0).sum();
    let violations: usize = per_chunk.iter().map(|c| c.1).sum();
    let draws: usize = per_chunk.iter().map(|c| c.2).sum();
    let paper = hard_lemma_check(&[int(6), int(1), int(1)], &[int(1), int(1), int(6)])?;
    let paper_ok = !paper.applicable && paper.quantities.X == int(-12);
    Ok((
        violations == 0 && applicable >= target && paper_ok,
        format!(
            "{applicable} applicable tuples ({draws} draws), violations {violations}; (6,1,1,1,1,6) inapplicable with X = {}: {paper_ok}",
            paper.quantities.X
        ),
    ))
}

fn subtraction_free() -> Check {
    let mut list: Vec<(usize, FacetNormal)> = Vec::new();
    for n in 3..=5 {
        list.extend(enumerate_facets(n)?.into_iter().map(|f| (n, f)));
    }
    let n6 = enumerate_facets(6)?;
    let reps = orbit_classify(6, &n6)?;
    list.extend(reps.orbits.into_iter().map(|o| (6, o.representative)));
    let failures = list
        .par_iter()
        .map(|(_, f)| -> Result<usize> {
            let r = complete_diagonal(&ReducedRatio::from_facet(f));
            Ok(usize::from(!subfree_check(&r)?.holds))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    // 2 a1^2 b2 b3 + 2 a2 a3 b1^2
    let expected = IntPoly::from_terms(
        3,
        &[
            (vec![2, 0, 0, 0, 1, 1], BigInt::from(2)),
            (vec![0, 1, 1, 2, 0, 0], BigInt::from(2)),
        ],
    )?;
    let tri = subfree_check(&triangular(2, 3, 1, 3)?)?;
    let identity = tri.difference == expected;
    Ok((
        failures == 0 && identity,
        format!(
            "{} facets/representatives checked, failures {failures}; triangular difference = {}: {identity}",
            list.len(),
            tri.difference
        ),
    ))
}

fn tp_constants(stream: &SeedStream, scale: &Scale) -> Check {
    let two = int(2);
    let w = witness_tp(&two)?;
    let value = evaluate(&pentagonal(1, 2, 3, 4, 5, 5)?, &w)?.exact;
    let in_t2 = in_delta_tp(&w, &two)?;
    let witness_ok = value == Some(int(64)) && in_t2;
    let mut worst = 0.0f64;
    for k in 0..scale.tp_points {
        let mut rng = stream.rng(k as u64);
        let [a, b, c] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        let p = rng.random_range(0.0..4.0);
        let (f, g) = (fp_delta3(a, b, c, p)?, fp_delta3_lp(a, b, c, p)?);
        worst = worst.max((f - g).abs() / f.max(1.0));
    }
    Ok((
        witness_ok && worst <= 1e-9,
        format!(
            "witness pentagonal ratio = {}, in T2: {in_t2}; max relative gap formula vs LP over {} points = {worst:.2e}",
            value.map_or("n/a".into(), |v| v.to_string()),
            scale.tp_points
        ),
    ))
}
