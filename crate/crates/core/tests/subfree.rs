use lratio_core::cutcone::{enumerate_facets, orbit_classify};
use lratio_core::lorentzian::{rank2_hessian, AnyMatrix, Rank2Params};
use lratio_core::ratio::{complete_diagonal, evaluate, pentagonal, triangular, FullRatio, ReducedRatio};
use lratio_core::rng::SeedStream;
use lratio_core::scalar::{int, pow_int, rat};
use lratio_core::subfree::{subfree_check, IntPoly};
use lratio_core::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::Rng;

fn facet_ratio(f: &lratio_core::cutcone::FacetNormal) -> FullRatio {
    complete_diagonal(&ReducedRatio::from_facet(f))
}

#[test]
fn facets_expand_subtraction_free() {
    for n in 3..=5 {
        for f in enumerate_facets(n).unwrap() {
            assert!(subfree_check(&facet_ratio(&f)).unwrap().holds, "{:?}", f.coords);
        }
    }
    let facets = enumerate_facets(6).unwrap();
    let orbits = orbit_classify(6, &facets).unwrap();
    assert_eq!(orbits.orbits.len(), 4);
    for o in &orbits.orbits {
        assert!(subfree_check(&facet_ratio(&o.representative)).unwrap().holds);
    }
}

/// `2^s N - P` (or `N - 2^{-s} P`) with `P / N` taken from `evaluate`.
fn oracle(r: &FullRatio, a: &[Rational], b: &[Rational]) -> Rational {
    let n = r.n();
    let m = rank2_hessian(&Rank2Params::new(a.to_vec(), b.to_vec()).unwrap());
    let mut neg = Rational::one();
    for i in 0..n {
        for j in i..n {
            let e = r.exponent(i, j);
            if e.is_negative() {
                let k: i64 = (-e).to_integer().try_into().unwrap();
                neg *= pow_int(m.get(i, j), k).unwrap();
            }
        }
    }
    let value = evaluate(r, &AnyMatrix::Rational(m)).unwrap().exact.unwrap();
    let s: i64 = r.diag_sum().to_integer().try_into().unwrap();
    if s >= 0 {
        &neg * (pow_int(&int(2), s).unwrap() - value)
    } else {
        &neg * (Rational::one() - pow_int(&int(2), -s).unwrap() * value)
    }
}

#[test]
fn expanded_difference_matches_direct_evaluation() {
    let mut ratios: Vec<FullRatio> = vec![triangular(1, 2, 3, 3).unwrap(), pentagonal(1, 2, 3, 4, 5, 5).unwrap()];
    ratios.extend(enumerate_facets(4).unwrap().iter().map(facet_ratio));
    let mut rng = SeedStream::new(13).rng(0);
    for r in &ratios {
        let report = subfree_check(r).unwrap();
        for _ in 0..100 {
            let mut draw = || rat(rng.random_range(1..=50), rng.random_range(1..=50));
            let a: Vec<Rational> = (0..r.n()).map(|_| draw()).collect();
            let b: Vec<Rational> = (0..r.n()).map(|_| draw()).collect();
            let expanded = report.difference.eval(&a, &b).unwrap();
            assert_eq!(expanded, oracle(r, &a, &b));
            if report.holds {
                assert!(!expanded.is_negative());
            }
        }
    }
}

fn poly(n: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=3, 2 * n), -20i64..=20), 0..=6).prop_map(move |terms| {
        let terms: Vec<(Vec<u32>, BigInt)> = terms.into_iter().map(|(e, c)| (e, BigInt::from(c))).collect();
        IntPoly::from_terms(n, &terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polynomials_form_a_ring((p, q, r) in (1usize..=3).prop_flat_map(|n| (poly(n), poly(n), poly(n)))) {
        let n = p.n();
        prop_assert_eq!(p.add(&q)?.add(&r)?, p.add(&q.add(&r)?)?);
        prop_assert_eq!(p.add(&q)?, q.add(&p)?);
        prop_assert_eq!(p.mul(&q)?.mul(&r)?, p.mul(&q.mul(&r)?)?);
        prop_assert_eq!(p.mul(&q)?, q.mul(&p)?);
        prop_assert_eq!(p.mul(&q.add(&r)?)?, p.mul(&q)?.add(&p.mul(&r)?)?);
        prop_assert_eq!(p.mul(&IntPoly::one(n)?)?, p.clone());
        prop_assert!(p.sub(&p)?.is_zero());
        prop_assert_eq!(p.pow(2)?, p.mul(&p)?);
    }
}
