//! Division-free integer linear algebra: Bareiss rank and the Berkowitz
//! characteristic polynomial.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank of an integer matrix by fraction-free Gaussian elimination.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == m {
            break;
        }
        let Some(pivot) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in (rank + 1)..m {
            for c in (col + 1)..cols {
                let v = &rows[rank][col] * &rows[r][c] - &rows[r][col] * &rows[rank][c];
                // exact division is the Bareiss invariant
                rows[r][c] = v / &prev;
            }
            rows[r][col] = BigInt::zero();
        }
        prev = rows[rank][col].clone();
        rank += 1;
    }
    rank
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    bareiss_rank(
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect(),
    )
}

/// Coefficients `[1, c_1, ..., c_n]` of `det(xI - A)`, highest degree first.
///
/// Berkowitz's recurrence over leading principal submatrices; uses only ring
/// operations, so integer input stays integral.
pub fn charpoly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::one()];
    for r in 0..n {
        let diag = &a[r][r];
        // q_m = R A_r^m C for m = 0..r-1, with R = row r, C = column r (first r entries)
        let mut q = Vec::with_capacity(r);
        let mut w: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let dot: BigInt = (0..r).map(|i| &a[r][i] * &w[i]).sum();
            q.push(dot);
            w = (0..r)
                .map(|i| (0..r).map(|k| &a[i][k] * &w[k]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= diag * c;
        }
        for k in 0..r {
            let s: BigInt = (0..=k).map(|i| &coeffs[i] * &q[k - i]).sum();
            next[k + 2] -= s;
        }
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,2]]: x^2 - 4x + 3
        let c = charpoly(&big(&[&[2, 1], &[1, 2]]));
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(-4), BigInt::from(3)]);
        // all-ones 3x3: x^3 - 3x^2
        let c = charpoly(&big(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]));
        assert_eq!(
            c,
            vec![BigInt::from(1), BigInt::from(-3), BigInt::from(0), BigInt::from(0)]
        );
    }

    #[test]
    fn charpoly_matches_determinant_expansion() {
        // det(A) = (-1)^n c_n; trace = -c_1
        let a = big(&[&[1, 2, 3], &[2, 5, 4], &[3, 4, 9]]);
        let c = charpoly(&a);
        assert_eq!(c[1], BigInt::from(-15));
        // det = 1(45-16) - 2(18-12) + 3(8-15) = 29 - 12 - 21 = -4
        assert_eq!(c[3], BigInt::from(4));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(rank_i64(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_i64(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank_i64(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]), 3);
        assert_eq!(rank_i64(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, -1]]), 2);
    }
}
