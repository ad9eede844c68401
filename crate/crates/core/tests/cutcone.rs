use lratio_core::cutcone::{
    canonical_subsets, cut_dot, cut_vector, enumerate_facets, full_mask, hypermetric_ratio,
    orbit_classify, pair_count,
};
use lratio_core::linalg::rank_i64;
use lratio_core::rng::SeedStream;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn facets_are_valid_and_tight_on_a_spanning_set() {
    for n in 3..=6 {
        let facets = enumerate_facets(n).unwrap();
        let cuts: Vec<_> = canonical_subsets(n).map(|s| cut_vector(n, s).unwrap()).collect();
        assert_eq!(cuts.len(), (1 << (n - 1)) - 1);
        for f in &facets {
            let mut tight = Vec::new();
            for c in &cuts {
                let dot: i64 = f.coords.iter().zip(&c.coords).map(|(a, &b)| a * i64::from(b)).sum();
                assert!(dot <= 0, "facet {:?} positive on {:?}", f.coords, c.elements());
                if dot == 0 {
                    tight.push(c.coords.iter().map(|&b| i64::from(b)).collect::<Vec<_>>());
                }
            }
            assert_eq!(rank_i64(&tight), pair_count(n) - 1, "facet {:?}", f.coords);
        }
    }
}

#[test]
fn facet_and_orbit_counts() {
    for (n, facets, orbits) in [(3, 3, 1), (4, 12, 1), (5, 40, 2), (6, 210, 4)] {
        let f = enumerate_facets(n).unwrap();
        assert_eq!(f.len(), facets, "n = {n}");
        let report = orbit_classify(n, &f).unwrap();
        assert_eq!(report.orbits.len(), orbits, "n = {n}");
        assert_eq!(report.total, facets);
        assert_eq!(report.sizes().iter().sum::<usize>(), facets);
    }
}

#[test]
fn orbit_report_ignores_input_order() {
    let mut facets = enumerate_facets(6).unwrap();
    let reference = orbit_classify(6, &facets).unwrap();
    let mut rng = SeedStream::new(3).rng(0);
    for _ in 0..5 {
        facets.shuffle(&mut rng);
        assert_eq!(orbit_classify(6, &facets).unwrap(), reference);
    }
}

#[test]
fn random_hypermetric_vectors_validate() {
    let mut rng = SeedStream::new(11).rng(0);
    let mut done = 0;
    while done < 1_000 {
        let n = rng.random_range(2..=7);
        let mut h: Vec<i64> = (0..n - 1).map(|_| rng.random_range(-5..=5)).collect();
        let last = 1 - h.iter().sum::<i64>();
        if last.abs() > 5 {
            continue;
        }
        h.push(last);
        let r = hypermetric_ratio(&h).unwrap();
        // independent check: alpha . delta(S) = h(S)(1 - h(S))
        for s in canonical_subsets(n) {
            let hs: i64 = (0..n).filter(|&i| s >> i & 1 == 1).map(|i| h[i]).sum();
            assert_eq!(cut_dot(n, &r.coords, s), hs * (1 - hs));
        }
        done += 1;
    }
}

proptest! {
    #[test]
    fn cut_vectors_are_complement_symmetric(n in 2usize..=12, raw in any::<u64>()) {
        let s = raw & full_mask(n);
        let c = full_mask(n) & !s;
        prop_assert_eq!(cut_vector(n, s).unwrap(), cut_vector(n, c).unwrap());
    }
}
