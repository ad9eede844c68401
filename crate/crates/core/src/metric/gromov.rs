use super::{hyperbolicity_delta, LogMetric};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shortest-path closure: the largest function below `d` satisfying the
/// triangle inequality. Equal to `d` when `d` already is a metric.
pub fn metric_repair<T: Scalar>(d: &LogMetric<T>) -> LogMetric<T> {
    let n = d.n();
    let mut m: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| d.get(i, j)).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = m[i][k].clone() + m[k][j].clone();
                if via < m[i][j] {
                    m[i][j] = via;
                }
            }
        }
    }
    LogMetric::from_fn(n, |i, j| m[i][j].clone()).expect("shortest paths stay nonnegative")
}

/// Tree metric `d' <= d` from Gromov products based at `basepoint` (0-based).
///
/// The input is first replaced by its shortest-path closure, so the products
/// `(x|y)_w` lie in `[0, min(d_xw, d_yw)]`. Their maximin closure over chains
/// (bottleneck paths in a maximum spanning tree) satisfies
/// `(x|z)' >= min((x|y)', (y|z)')`, which makes `d'_xy = d_xw + d_yw - 2 (x|y)'`
/// a tree metric.
pub fn gromov_tree_approx<T: Scalar>(d: &LogMetric<T>, basepoint: usize) -> Result<LogMetric<T>> {
    let n = d.n();
    if basepoint >= n {
        return Err(Error::Domain(format!(
            "basepoint {} outside [1, {n}]",
            basepoint + 1
        )));
    }
    let d = metric_repair(d);
    let w = basepoint;
    let g = |x: usize, y: usize| (d.get(x, w) + d.get(y, w) - d.get(x, y)).half();

    // Prim's algorithm for a maximum spanning tree on weights g.
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<(T, usize)>> = vec![None; n];
    let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = Some((g(0, v), 0));
    }
    for _ in 1..n {
        let (v, (wt, parent)) = (0..n)
            .filter(|&v| !in_tree[v])
            .filter_map(|v| best[v].clone().map(|b| (v, b)))
            .fold(None::<(usize, (T, usize))>, |acc, cur| match acc {
                Some(a) if a.1 .0 >= cur.1 .0 => Some(a),
                _ => Some(cur),
            })
            .expect("graph is complete");
        in_tree[v] = true;
        adj[v].push((parent, wt.clone()));
        adj[parent].push((v, wt));
        for u in 0..n {
            if !in_tree[u] {
                let cand = g(v, u);
                if best[u].as_ref().is_none_or(|(b, _)| cand > *b) {
                    best[u] = Some((cand, v));
                }
            }
        }
    }

    // Bottleneck (minimum edge on the tree path) from every source.
    let mut closure: Vec<Vec<Option<T>>> = vec![vec![None; n]; n];
    for s in 0..n {
        let mut stack = vec![(s, usize::MAX, None::<T>)];
        while let Some((v, from, bottleneck)) = stack.pop() {
            closure[s][v] = bottleneck.clone();
            for (u, wt) in &adj[v] {
                if *u != from {
                    let b = match &bottleneck {
                        Some(b) => T::min_of(b.clone(), wt.clone()),
                        None => wt.clone(),
                    };
                    stack.push((*u, v, Some(b)));
                }
            }
        }
    }

    LogMetric::from_fn(n, |x, y| {
        let gp = closure[x][y].clone().expect("tree spans all points");
        d.get(x, w) + d.get(y, w) - gp.clone() - gp
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeApproxReport<T> {
    pub approx: LogMetric<T>,
    /// 0-based.
    pub basepoint: usize,
    /// The input broke the triangle inequality and was closed under shortest paths.
    pub repaired: bool,
    pub delta: T,
    pub max_gap: T,
    /// `2 delta ceil(log2 n)`.
    pub bound: T,
    pub within_bound: bool,
    pub is_tree: bool,
    pub below_input: bool,
}

pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Runs [`gromov_tree_approx`] and measures it against the input.
pub fn tree_approx_report<T: Scalar>(d: &LogMetric<T>, basepoint: usize) -> Result<TreeApproxReport<T>> {
    let approx = gromov_tree_approx(d, basepoint)?;
    let delta = hyperbolicity_delta(d);
    let max_gap = d.max_gap(&approx);
    let bound = delta.clone() * T::from_i64(2 * i64::from(ceil_log2(d.n())));
    Ok(TreeApproxReport {
        basepoint,
        repaired: metric_repair(d) != *d,
        within_bound: max_gap.le_tol(&bound),
        is_tree: super::four_point_check(&approx),
        below_input: approx.le(d),
        delta,
        max_gap,
        bound,
        approx,
    })
}
