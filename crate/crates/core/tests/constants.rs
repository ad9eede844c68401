use lratio_core::constants::{
    estimate_sup, fp_delta3, fp_delta3_lp, hard_lemma_check, theorem_c, verify_n3,
    BarycentricRatio, N3Grid, SupConfig,
};
use lratio_core::ratio::{pentagonal, triangular};
use lratio_core::rng::SeedStream;
use lratio_core::scalar::{int, rat};
use lratio_core::Rational;
use proptest::prelude::*;
use rand::Rng;

fn barycentric() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(u, v)| {
        // uniform on the simplex by folding the unit square
        let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
        (u, v, 1.0 - u - v)
    })
}

/// `(a + b + c)^2 - 2 (a^2 + b^2 + c^2)`, the negated discriminant.
fn inside_measure(a: f64, b: f64, c: f64) -> f64 {
    (a + b + c).powi(2) - 2.0 * (a * a + b * b + c * c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn theorem_c_is_symmetric_and_at_least_one((a, b, c) in barycentric()) {
        let Ok(q) = BarycentricRatio::new(a, b, c) else { return Ok(()) };
        let v = theorem_c(&q);
        prop_assert!(v >= 1.0);
        if inside_measure(a, b, c) >= 0.0 {
            prop_assert_eq!(v, 1.0);
        }
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            if let Ok(p) = BarycentricRatio::new(x, y, z) {
                prop_assert!((theorem_c(&p) - v).abs() <= 1e-12 * v);
            }
        }
    }

    #[test]
    fn tp_constant_matches_its_linear_program(
        a in 0.0f64..3.0, b in 0.0f64..3.0, c in 0.0f64..3.0, p in 0.0f64..4.0
    ) {
        let closed = fp_delta3(a, b, c, p).unwrap();
        let lp = fp_delta3_lp(a, b, c, p).unwrap();
        prop_assert!((closed - lp).abs() <= 1e-9 * closed, "{} vs {}", closed, lp);
    }

    #[test]
    fn tp_constant_is_continuous_across_regions(b in 0.0f64..3.0, c in 0.0f64..3.0, p in 0.0f64..4.0) {
        let a = b + c;
        let outer = (a * p).exp2();
        let inner = (p * (a + b + c) / 2.0).exp2();
        prop_assert!((outer - inner).abs() <= 1e-12 * outer);
        for eps in [1e-9, -1e-9] {
            let v = fp_delta3(a + eps, b, c, p).unwrap();
            prop_assert!((v - outer).abs() <= 1e-6 * outer);
        }
    }

    #[test]
    fn cubic_lemma_holds_when_applicable(
        x in prop::array::uniform3(1i64..=60), y in prop::array::uniform3(1i64..=60)
    ) {
        let xs = x.map(int);
        let ys = y.map(int);
        let check = hard_lemma_check(&xs, &ys).unwrap();
        // oracle from the expanded forms
        let [x1, x2, x3] = x.map(i128::from);
        let [y1, y2, y3] = y.map(i128::from);
        let big_x = (x1 + x2 + x3).pow(2) - 2 * (x1 * x1 + x2 * x2 + x3 * x3);
        let big_y = (y1 + y2 + y3).pow(2) - 2 * (y1 * y1 + y2 * y2 + y3 * y3);
        let big_z = (x1 + x2 + x3) * (y1 + y2 + y3) - 2 * (x1 * y1 + x2 * y2 + x3 * y3);
        prop_assert_eq!(&check.quantities.X, &int(big_x as i64));
        prop_assert_eq!(&check.quantities.Y, &int(big_y as i64));
        prop_assert_eq!(&check.quantities.Z, &int(big_z as i64));
        prop_assert_eq!(check.applicable, big_x >= 0 && big_y >= 0 && big_z >= 0);
        if check.applicable {
            prop_assert!(check.holds);
            prop_assert!(big_x * big_y * big_z < 32 * x1 * x2 * x3 * y1 * y2 * y3);
        }
    }
}

#[test]
fn theorem_c_matches_the_optimizer() {
    let third = 1.0 / 3.0;
    let mut points = vec![
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
        (0.5, 0.5, 0.0),
        (0.5, 0.0, 0.5),
        (0.0, 0.5, 0.5),
        (third, third, 1.0 - 2.0 * third),
    ];
    let mut rng = SeedStream::new(5).rng(0);
    while points.len() < 107 {
        let (u, v): (f64, f64) = (rng.random(), rng.random());
        if u + v <= 1.0 {
            points.push((u, v, 1.0 - u - v));
        }
    }
    for (a, b, c) in points {
        let q = BarycentricRatio::new(a, b, c).unwrap();
        let closed = theorem_c(&q);
        let scanned = verify_n3(&q, N3Grid::default());
        assert!((closed - scanned).abs() <= 1e-6, "({a}, {b}, {c}): {closed} vs {scanned}");
    }
}

#[test]
fn empirical_sups_respect_the_bounds() {
    let config = SupConfig {
        iterations: 100_000,
        seed: 9,
        ..SupConfig::default()
    };
    let tri = estimate_sup(&triangular(1, 2, 3, 3).unwrap(), &config).unwrap();
    assert!(tri.empirical_sup <= 2.0, "{}", tri.empirical_sup);
    assert!(tri.exact.as_ref().is_none_or(|e| *e <= int(2)));
    let pent = estimate_sup(&pentagonal(1, 2, 3, 4, 5, 5).unwrap(), &config).unwrap();
    assert!(pent.empirical_sup <= 4.0, "{}", pent.empirical_sup);
    assert!(pent.exact.as_ref().is_none_or(|e| *e <= int(4)));
    // the witness family comes within 1e-4 of the bound
    assert!(pent.empirical_sup > 4.0 - 1e-4);
}

#[test]
fn barycentric_ratio_expands_to_named_ratios() {
    let q = BarycentricRatio::from_rationals(&rat(1, 2), &rat(3, 8), &rat(1, 8)).unwrap();
    let r = q.to_ratio().unwrap();
    let expect = |i, j| -> Rational { r.exponent(i, j).clone() };
    // a alpha^{23|1} + b alpha^{13|2} + c alpha^{12|3}
    assert_eq!(expect(1, 2), rat(1, 2) - rat(3, 8) - rat(1, 8));
    assert_eq!(expect(0, 1), rat(1, 8) - rat(1, 2) - rat(3, 8));
    assert_eq!(expect(0, 0), rat(1, 2));
    assert!(BarycentricRatio::from_rationals(&rat(1, 2), &rat(1, 2), &rat(1, 2)).is_err());
}
