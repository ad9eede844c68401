use lratio_core::lorentzian::{
    is_lorentzian, is_lorentzian_exact, is_lorentzian_float, rank_exact, sample_lorentzian,
    sample_rank2, scale, signature_exact, signature_float, witness_pentagonal, Rank2Distribution,
    SymMatrix,
};
use lratio_core::rng::SeedStream;
use lratio_core::scalar::{int, rat};
use lratio_core::Rational;
use proptest::prelude::*;
use rayon::prelude::*;

#[test]
fn rank2_samples_are_lorentzian() {
    let dist = Rank2Distribution::default();
    for n in 3..=6u64 {
        let bad = (0..10_000u64)
            .into_par_iter()
            .filter(|&k| {
                let m = sample_rank2(n as usize, 1_000 * n + k, &dist).unwrap();
                !is_lorentzian(&m.into()).lorentzian
            })
            .count();
        assert_eq!(bad, 0, "n = {n}");
    }
}

#[test]
fn exact_and_float_paths_agree() {
    let stream = SeedStream::new(7);
    let dist = Rank2Distribution::Uniform { lo: 0.1, hi: 10.0 };
    let mismatches: Vec<u64> = (0..1_000u64)
        .into_par_iter()
        .filter(|&k| {
            let mut rng = stream.rng(k);
            let n = 3 + (k % 4) as usize;
            let m = if k % 2 == 0 {
                sample_rank2(n, k, &dist).unwrap()
            } else {
                sample_lorentzian(n, &mut rng).unwrap()
            };
            let exact = is_lorentzian_exact(&m);
            let float = is_lorentzian_float(&m.to_f64());
            exact.lorentzian != float.lorentzian || exact.signature.n_pos != float.signature.n_pos
        })
        .collect();
    assert!(mismatches.is_empty(), "{mismatches:?}");
}

#[test]
fn pentagonal_witness_has_rank_three() {
    for t in [int(0), rat(1, 2), int(1), int(2), int(10)] {
        let m = witness_pentagonal(&t).unwrap();
        assert_eq!(rank_exact(&m), 3, "t = {t}");
        assert!(is_lorentzian_exact(&m).lorentzian);
    }
}

fn small_sym(max_n: usize) -> impl Strategy<Value = SymMatrix<Rational>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-9i64..=9, n * (n + 1) / 2).prop_map(move |v| {
            let mut it = v.into_iter();
            SymMatrix::from_upper(n, |_, _| int(it.next().unwrap()))
        })
    })
}

fn positive(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=20, 1i64..=20), n)
        .prop_map(|v| v.into_iter().map(|(p, q)| rat(p, q)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn signature_counts_add_up(m in small_sym(7)) {
        let s = signature_exact(&m);
        prop_assert_eq!(s.n_pos + s.n_neg + s.n_zero, m.n());
        prop_assert_eq!(s.rank, rank_exact(&m));
        let f = signature_float(&m.to_f64());
        prop_assert_eq!(f.n_pos + f.n_neg + f.n_zero, m.n());
    }

    #[test]
    fn scaling_is_a_group_action(
        (m, c, d) in small_sym(6).prop_flat_map(|m| {
            let n = m.n();
            (Just(m), positive(n), positive(n))
        })
    ) {
        let once = scale(&scale(&m, &c).unwrap(), &d).unwrap();
        let cd: Vec<Rational> = c.iter().zip(&d).map(|(x, y)| x * y).collect();
        prop_assert_eq!(once, scale(&m, &cd).unwrap());
    }

    #[test]
    fn scaling_preserves_inertia(
        (m, c) in small_sym(6).prop_flat_map(|m| {
            let n = m.n();
            (Just(m), positive(n))
        })
    ) {
        // congruence by a positive diagonal matrix (Sylvester)
        prop_assert_eq!(signature_exact(&m), signature_exact(&scale(&m, &c).unwrap()));
    }
}
