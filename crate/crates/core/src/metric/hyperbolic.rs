use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LogMetric;
use crate::error::{Error, Result};
use crate::lorentzian::{AnyMatrix, SymMatrix};
use crate::scalar::{int, pow_int, Rational, Scalar};

/// Relative slack for float comparisons of matrix products.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Every 4-multiset `i <= j <= k <= l` of `0..n`.
fn multisets(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |i| {
        (i..n).flat_map(move |j| (j..n).flat_map(move |k| (k..n).map(move |l| [i, j, k, l])))
    })
}

/// The three pair sums `d_ij + d_kl`, `d_ik + d_jl`, `d_il + d_jk`, sorted descending.
fn pair_sums<T: Scalar>(d: &LogMetric<T>, [i, j, k, l]: [usize; 4]) -> [T; 3] {
    let mut s = [
        d.get(i, j) + d.get(k, l),
        d.get(i, k) + d.get(j, l),
        d.get(i, l) + d.get(j, k),
    ];
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite metric values"));
    s
}

/// Smallest `delta` with `d_ij + d_kl <= max(d_ik + d_jl, d_il + d_jk) + 2 delta`
/// for all `i, j, k, l` (repeats allowed, so triangle defects count too).
pub fn hyperbolicity_delta<T: Scalar>(d: &LogMetric<T>) -> T {
    multisets(d.n()).fold(T::zero(), |acc, q| {
        let [a, b, _] = pair_sums(d, q);
        T::max_of(acc, (a - b).half())
    })
}

/// A 4-tuple (0-based) breaking the four-point condition, if any.
pub fn four_point_violation<T: Scalar>(d: &LogMetric<T>) -> Option<[usize; 4]> {
    multisets(d.n()).find(|&q| {
        let [a, b, _] = pair_sums(d, q);
        !a.le_tol(&b)
    })
}

/// Four-point condition over all 4-tuples with repeats; with the values
/// nonnegative this is exactly the tree-metric condition.
pub fn four_point_check<T: Scalar>(d: &LogMetric<T>) -> bool {
    four_point_violation(d).is_none()
}

fn products<T: Scalar>(m: &SymMatrix<T>, [i, j, k, l]: [usize; 4]) -> [T; 3] {
    let g = |a: usize, b: usize| m.get(a, b).clone();
    let mut s = [g(i, j) * g(k, l), g(i, k) * g(j, l), g(i, l) * g(j, k)];
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite matrix entries"));
    s
}

enum ExactRule {
    Tie,
    SquareRoot,
    Power(u32),
}

fn exact_rule(p: &Rational) -> Option<ExactRule> {
    if p.is_zero() {
        return Some(ExactRule::Tie);
    }
    if *p == int(2) {
        return Some(ExactRule::SquareRoot);
    }
    if p.numer().is_one() {
        return p.denom().to_u32().map(ExactRule::Power);
    }
    None
}

fn exact_holds(rule: &ExactRule, [a, b, c]: &[Rational; 3]) -> Result<bool> {
    Ok(match rule {
        ExactRule::Tie => a == b,
        // sqrt(a) <= sqrt(b) + sqrt(c)  iff  a - b - c <= 0 or (a - b - c)^2 <= 4bc
        ExactRule::SquareRoot => {
            let e = a - b - c;
            !e.is_positive() || &e * &e <= int(4) * b * c
        }
        ExactRule::Power(m) => {
            let m = i64::from(*m);
            pow_int(a, m)? <= pow_int(b, m)? + pow_int(c, m)?
        }
    })
}

fn float_holds(p: f64, [a, b, c]: [f64; 3]) -> bool {
    if p == 0.0 {
        return a <= b * (1.0 + FLOAT_REL_TOL);
    }
    if a == 0.0 {
        return true;
    }
    if b == 0.0 {
        return false;
    }
    let t = 1.0 / p;
    let (la, lb, lc) = (t * a.ln(), t * b.ln(), t * c.ln());
    // log(b^t + c^t) with b >= c
    let lse = if c == 0.0 { lb } else { lb + (lc - lb).exp().ln_1p() };
    la <= lse + FLOAT_REL_TOL
}

/// A 4-multiset (0-based) where the `Delta(T_p)` condition fails, if any.
pub fn delta_tp_violation(m: &AnyMatrix, p: &Rational) -> Result<Option<[usize; 4]>> {
    if p.is_negative() {
        return Err(Error::Domain("p must be nonnegative".into()));
    }
    let nonneg = match m {
        AnyMatrix::Rational(m) => m.is_nonnegative(),
        AnyMatrix::Float(m) => m.is_nonnegative(),
    };
    if !nonneg {
        return Err(Error::Domain("Delta(T_p) membership needs nonnegative entries".into()));
    }
    let n = m.n();
    if let (AnyMatrix::Rational(m), Some(rule)) = (m, exact_rule(p)) {
        for q in multisets(n) {
            if !exact_holds(&rule, &products(m, q))? {
                return Ok(Some(q));
            }
        }
        return Ok(None);
    }
    let mf = m.to_f64();
    let pf = Scalar::to_f64(p);
    Ok(multisets(n).find(|&q| !float_holds(pf, products(&mf, q))))
}

/// Membership in `Delta_n(T_p)`: for every 4-multiset the largest of the three
/// products, raised to `1/p`, is at most the sum of the other two (`p > 0`),
/// or the maximum is attained twice (`p = 0`).
///
/// Exact for rational matrices when `p` is `0`, `2`, or `1/m`; otherwise the
/// comparison runs in floats with relative slack `1e-9`.
pub fn in_delta_tp(m: &AnyMatrix, p: &Rational) -> Result<bool> {
    Ok(delta_tp_violation(m, p)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentzian::{witness_pentagonal, witness_tp};
    use crate::scalar::rat;

    #[test]
    fn multiset_count() {
        // C(n + 3, 4)
        assert_eq!(multisets(4).count(), 35);
    }

    #[test]
    fn star_metric() {
        let d = LogMetric::from_fn(5, |_, _| int(2)).unwrap();
        assert_eq!(hyperbolicity_delta(&d), int(0));
        assert!(four_point_check(&d));
    }

    #[test]
    fn triangle_defect_counts() {
        // d_12 = 5 > d_13 + d_23 = 2
        let d = LogMetric::new(3, vec![int(5), int(1), int(1)]).unwrap();
        assert!(!four_point_check(&d));
        assert_eq!(hyperbolicity_delta(&d), rat(3, 2));
    }

    #[test]
    fn square_is_not_a_tree() {
        // 4-cycle with unit edges
        let d = LogMetric::new(4, vec![int(1), int(2), int(1), int(1), int(2), int(1)]).unwrap();
        assert_eq!(four_point_violation(&d).map(|q| q.len()), Some(4));
        assert_eq!(hyperbolicity_delta(&d), int(1));
    }

    #[test]
    fn ones_in_t0() {
        let m = SymMatrix::from_upper(4, |_, _| int(1));
        assert!(in_delta_tp(&m.into(), &int(0)).unwrap());
    }

    #[test]
    fn tp_witness_membership() {
        let w = witness_tp(&int(2)).unwrap();
        assert!(in_delta_tp(&w, &int(2)).unwrap());
        // the bound is attained, so the witness is not in T_1
        assert!(!in_delta_tp(&w, &int(1)).unwrap());
        let wf = AnyMatrix::Float(w.to_f64());
        assert!(in_delta_tp(&wf, &int(2)).unwrap());
    }

    #[test]
    fn pentagonal_witness_in_t2() {
        let m = witness_pentagonal(&int(1)).unwrap();
        assert!(in_delta_tp(&m.into(), &int(2)).unwrap());
    }

    #[test]
    fn exact_and_float_paths_agree() {
        let m = SymMatrix::from_rows(vec![
            vec![int(1), int(3), int(2)],
            vec![int(3), int(1), int(2)],
            vec![int(2), int(2), int(1)],
        ])
        .unwrap();
        for p in [int(0), int(2), rat(1, 2), int(1)] {
            let exact = in_delta_tp(&m.clone().into(), &p).unwrap();
            let float = in_delta_tp(&AnyMatrix::Float(m.to_f64()), &p).unwrap();
            assert_eq!(exact, float, "p = {p}");
        }
        assert!(in_delta_tp(&m.into(), &int(-1)).is_err());
    }
}
