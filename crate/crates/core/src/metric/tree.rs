use std::collections::BTreeMap;

use rand::Rng;

use super::{four_point_violation, LogMetric};
use crate::cutcone::{canonical_subset, cut_vector, subset_elements};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct TreeEdge<T> {
    pub u: usize,
    pub v: usize,
    pub len: T,
}

/// A tree with leaf labels `1..=n` placed on vertices and nonnegative edge lengths.
///
/// `leaves[i]` is the vertex carrying leaf `i + 1`. In canonical form there are
/// no zero-length edges, so several leaves may share a vertex, and every
/// vertex without a leaf has degree at least 3.
#[derive(Debug, Clone, PartialEq)]
pub struct PhyloTree<T> {
    leaves: Vec<usize>,
    node_count: usize,
    edges: Vec<TreeEdge<T>>,
}

impl<T: Scalar> PhyloTree<T> {
    /// Validates shape (connected, acyclic), lengths (nonnegative) and the
    /// degree condition on unlabelled vertices.
    pub fn new(leaves: Vec<usize>, edges: Vec<TreeEdge<T>>) -> Result<Self> {
        if leaves.is_empty() {
            return Err(Error::Structural("a tree needs at least one leaf".into()));
        }
        let node_count = leaves
            .iter()
            .copied()
            .chain(edges.iter().flat_map(|e| [e.u, e.v]))
            .max()
            .map_or(0, |m| m + 1);
        if edges.len() + 1 != node_count {
            return Err(Error::Structural(format!(
                "{} edges on {node_count} vertices cannot form a tree",
                edges.len()
            )));
        }
        if edges.iter().any(|e| e.u == e.v) {
            return Err(Error::Structural("self-loop in tree".into()));
        }
        if let Some(e) = edges.iter().find(|e| e.len < T::zero() || !e.len.is_finite()) {
            return Err(Error::Domain(format!(
                "edge ({}, {}) has negative or non-finite length",
                e.u, e.v
            )));
        }
        let tree = Self {
            leaves,
            node_count,
            edges,
        };
        let adj = tree.adjacency();
        let mut seen = vec![false; node_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Structural("tree is not connected".into()));
        }
        let labelled = tree.labelled();
        if let Some(v) = (0..node_count).find(|&v| !labelled[v] && adj[v].len() < 3) {
            return Err(Error::Structural(format!(
                "unlabelled vertex {v} has degree {} < 3",
                adj[v].len()
            )));
        }
        Ok(tree)
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[TreeEdge<T>] {
        &self.edges
    }

    fn labelled(&self) -> Vec<bool> {
        let mut l = vec![false; self.node_count];
        for &v in &self.leaves {
            l[v] = true;
        }
        l
    }

    /// `adj[v]` lists `(neighbour, edge index)`.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, k));
            adj[e.v].push((e.u, k));
        }
        adj
    }

    /// Edge indices on the path between leaves `a` and `b` (0-based).
    pub fn path_edges(&self, a: usize, b: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let (s, t) = (self.leaves[a], self.leaves[b]);
        let mut via = vec![None; self.node_count];
        let mut stack = vec![s];
        let mut seen = vec![false; self.node_count];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &(u, k) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    via[u] = Some((v, k));
                    stack.push(u);
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = t;
        while let Some((prev, k)) = via[cur] {
            out.push(k);
            cur = prev;
        }
        out.reverse();
        out
    }

    /// Distances from vertex `s` to every vertex.
    fn distances_from(&self, s: usize, adj: &[Vec<(usize, usize)>]) -> Vec<T> {
        let mut dist = vec![T::zero(); self.node_count];
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &(u, k) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    dist[u] = dist[v].clone() + self.edges[k].len.clone();
                    stack.push(u);
                }
            }
        }
        dist
    }

    /// Contracts zero-length edges, removes unlabelled vertices of degree
    /// below 3 (smoothing degree 2) and renumbers vertices deterministically.
    pub fn canonical(&self) -> Self {
        canonicalize(self.leaves.clone(), self.node_count, self.edges.clone())
    }
}

fn canonicalize<T: Scalar>(leaves: Vec<usize>, node_count: usize, edges: Vec<TreeEdge<T>>) -> PhyloTree<T> {
    // contract zero-length edges with a union-find
    let mut parent: Vec<usize> = (0..node_count).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let mut kept: Vec<TreeEdge<T>> = Vec::new();
    for e in &edges {
        if e.len.is_zero_tol() {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a] = b;
        }
    }
    for e in edges {
        if !e.len.is_zero_tol() {
            kept.push(TreeEdge {
                u: find(&mut parent, e.u),
                v: find(&mut parent, e.v),
                len: e.len,
            });
        }
    }
    let mut leaves: Vec<usize> = leaves.into_iter().map(|v| find(&mut parent, v)).collect();

    // adjacency as edge lists keyed by vertex; alive edges tracked by Option
    let mut edges: Vec<Option<TreeEdge<T>>> = kept.into_iter().map(Some).collect();
    let mut labelled = vec![false; node_count];
    for &v in &leaves {
        labelled[v] = true;
    }
    loop {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        for (k, e) in edges.iter().enumerate() {
            if let Some(e) = e {
                incident[e.u].push(k);
                incident[e.v].push(k);
            }
        }
        let target = (0..node_count).find(|&v| !labelled[v] && (incident[v].len() == 1 || incident[v].len() == 2));
        let Some(v) = target else { break };
        if incident[v].len() == 1 {
            edges[incident[v][0]] = None;
            continue;
        }
        let (k1, k2) = (incident[v][0], incident[v][1]);
        let e1 = edges[k1].take().expect("alive");
        let e2 = edges[k2].take().expect("alive");
        let a = if e1.u == v { e1.v } else { e1.u };
        let b = if e2.u == v { e2.v } else { e2.u };
        edges[k1] = Some(TreeEdge {
            u: a,
            v: b,
            len: e1.len + e2.len,
        });
    }
    let edges: Vec<TreeEdge<T>> = edges.into_iter().flatten().collect();

    // renumber: leaf-carrying vertices by smallest label, then the rest by
    // (smallest label below them, depth) in the tree rooted at leaf 1
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (k, e) in edges.iter().enumerate() {
        adj.entry(e.u).or_default().push((e.v, k));
        adj.entry(e.v).or_default().push((e.u, k));
    }
    let root = leaves[0];
    let mut min_label: BTreeMap<usize, usize> = BTreeMap::new();
    for (label, &v) in leaves.iter().enumerate() {
        min_label.entry(v).or_insert(label);
    }
    let mut order = vec![root];
    let mut depth: BTreeMap<usize, usize> = BTreeMap::from([(root, 0)]);
    let mut up: BTreeMap<usize, usize> = BTreeMap::new();
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &(u, _) in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if !depth.contains_key(&u) {
                depth.insert(u, depth[&v] + 1);
                up.insert(u, v);
                order.push(u);
            }
        }
        i += 1;
    }
    let mut below: BTreeMap<usize, usize> = min_label.clone();
    for &v in order.iter().rev() {
        if let (Some(&p), Some(&m)) = (up.get(&v), below.get(&v)) {
            let e = below.entry(p).or_insert(m);
            *e = (*e).min(m);
        }
    }
    let mut labelled_nodes: Vec<usize> = min_label.keys().copied().collect();
    labelled_nodes.sort_by_key(|v| min_label[v]);
    let mut others: Vec<usize> = order.iter().copied().filter(|v| !min_label.contains_key(v)).collect();
    others.sort_by_key(|v| (below.get(v).copied().unwrap_or(usize::MAX), depth[v]));
    let mut new_id: BTreeMap<usize, usize> = BTreeMap::new();
    for v in labelled_nodes.into_iter().chain(others) {
        let id = new_id.len();
        new_id.insert(v, id);
    }
    for v in leaves.iter_mut() {
        *v = new_id[v];
    }
    let mut edges: Vec<TreeEdge<T>> = edges
        .into_iter()
        .map(|e| {
            let (a, b) = (new_id[&e.u], new_id[&e.v]);
            TreeEdge {
                u: a.min(b),
                v: a.max(b),
                len: e.len,
            }
        })
        .collect();
    edges.sort_by_key(|e| (e.u, e.v));
    PhyloTree {
        node_count: new_id.len(),
        leaves,
        edges,
    }
}

/// Pairwise path lengths between leaves.
pub fn tree_metric<T: Scalar>(tree: &PhyloTree<T>) -> LogMetric<T> {
    let adj = tree.adjacency();
    let dist: Vec<Vec<T>> = tree
        .leaves
        .iter()
        .map(|&s| tree.distances_from(s, &adj))
        .collect();
    LogMetric::from_fn(tree.n_leaves(), |i, j| dist[i][tree.leaves[j]].clone())
        .expect("path lengths are nonnegative")
}

/// Working tree for leaf insertion; leaves are vertices `0..n`.
struct Builder<T> {
    edges: Vec<Option<TreeEdge<T>>>,
    nodes: usize,
    n: usize,
}

impl<T: Scalar> Builder<T> {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for (k, e) in self.edges.iter().enumerate() {
            if let Some(e) = e {
                adj[e.u].push((e.v, k));
                adj[e.v].push((e.u, k));
            }
        }
        adj
    }

    /// Vertices and edge indices along the path from `s` to `t`.
    fn path(&self, s: usize, t: usize) -> (Vec<usize>, Vec<usize>) {
        let adj = self.adjacency();
        let mut via = vec![None; self.nodes];
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &(u, k) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    via[u] = Some((v, k));
                    stack.push(u);
                }
            }
        }
        let (mut nodes, mut edges) = (vec![t], Vec::new());
        let mut cur = t;
        while let Some((prev, k)) = via[cur] {
            edges.push(k);
            nodes.push(prev);
            cur = prev;
        }
        nodes.reverse();
        edges.reverse();
        (nodes, edges)
    }

    fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    /// The vertex at distance `a` from `s` on the path to `t`, subdividing an edge if needed.
    fn point_on_path(&mut self, s: usize, t: usize, a: T) -> usize {
        let (nodes, edges) = self.path(s, t);
        let mut cum = T::zero();
        let mut hit = None;
        for (step, &k) in edges.iter().enumerate() {
            let len = self.edges[k].as_ref().expect("alive").len.clone();
            let next = cum.clone() + len.clone();
            let inner = nodes[step];
            if step > 0 && inner >= self.n && cum.eq_tol(&a) {
                return inner;
            }
            if a.le_tol(&next) || step + 1 == edges.len() {
                hit = Some((k, nodes[step], cum, len));
                break;
            }
            cum = next;
        }
        let (k, from, cum, len) = hit.expect("path is nonempty");
        let e = self.edges[k].take().expect("alive");
        let to = if e.u == from { e.v } else { e.u };
        let offset = T::min_of(T::max_of(a - cum, T::zero()), len.clone());
        let x = self.add_node();
        self.edges[k] = Some(TreeEdge {
            u: from,
            v: x,
            len: offset.clone(),
        });
        self.edges.push(Some(TreeEdge {
            u: x,
            v: to,
            len: len - offset,
        }));
        x
    }
}

/// The unique phylogenetic tree (canonical form) realising a tree metric.
pub fn tree_reconstruct<T: Scalar>(d: &LogMetric<T>) -> Result<PhyloTree<T>> {
    if let Some([i, j, k, l]) = four_point_violation(d) {
        return Err(Error::Domain(format!(
            "four-point condition fails on ({}, {}, {}, {})",
            i + 1,
            j + 1,
            k + 1,
            l + 1
        )));
    }
    let n = d.n();
    let mut b = Builder {
        edges: Vec::new(),
        nodes: n,
        n,
    };
    if n >= 2 {
        b.edges.push(Some(TreeEdge {
            u: 0,
            v: 1,
            len: d.get(0, 1),
        }));
    }
    for k in 2..n {
        // the pair minimising (i|j)_k spans the path k attaches to
        let mut best: Option<(T, usize, usize)> = None;
        for i in 0..k {
            for j in (i + 1)..k {
                let pendant = (d.get(i, k) + d.get(j, k) - d.get(i, j)).half();
                if best.as_ref().is_none_or(|(p, _, _)| pendant < *p) {
                    best = Some((pendant, i, j));
                }
            }
        }
        let (pendant, i, j) = best.expect("k >= 2");
        let pendant = T::max_of(pendant, T::zero());
        let a = T::max_of(d.get(i, k) - pendant.clone(), T::zero());
        let x = b.point_on_path(i, j, a);
        b.edges.push(Some(TreeEdge {
            u: x,
            v: k,
            len: pendant,
        }));
    }
    let nodes = b.nodes;
    let edges: Vec<TreeEdge<T>> = b.edges.into_iter().flatten().collect();
    Ok(canonicalize((0..n).collect(), nodes.max(1), edges))
}

/// One cut term `weight * delta(S)`; `subset` is canonical and 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct CutTerm<T> {
    pub subset: Vec<usize>,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutDecomposition<T> {
    pub n: usize,
    pub terms: Vec<CutTerm<T>>,
}

impl<T: Scalar> CutDecomposition<T> {
    /// `sum weight * delta(S)`.
    pub fn to_metric(&self) -> LogMetric<T> {
        let n = self.n;
        let mut d = vec![T::zero(); crate::cutcone::pair_count(n)];
        for t in &self.terms {
            let mask = t.subset.iter().fold(0u64, |m, &e| m | 1 << (e - 1));
            let c = cut_vector(n, mask).expect("subset within [n]");
            for (slot, &bit) in d.iter_mut().zip(&c.coords) {
                if bit == 1 {
                    *slot = slot.clone() + t.weight.clone();
                }
            }
        }
        LogMetric::new(n, d).expect("nonnegative weights")
    }
}

/// `d = sum_e len(e) delta(S(e))`, with `S(e)` the leaves on the side of
/// `root_leaf` (0-based) once `e` is removed. Zero-length edges are dropped.
pub fn cut_decomposition<T: Scalar>(tree: &PhyloTree<T>, root_leaf: usize) -> Result<CutDecomposition<T>> {
    let n = tree.n_leaves();
    if root_leaf >= n {
        return Err(Error::Domain(format!("root leaf {} outside [1, {n}]", root_leaf + 1)));
    }
    if n > 64 {
        return Err(Error::Capability("cut decompositions support at most 64 leaves".into()));
    }
    let adj = tree.adjacency();
    let root = tree.leaves[root_leaf];
    let mut terms = Vec::new();
    for (k, e) in tree.edges.iter().enumerate() {
        if e.len.is_zero_tol() {
            continue;
        }
        let mut seen = vec![false; tree.node_count];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(u, ek) in &adj[v] {
                if ek != k && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        let side = tree
            .leaves
            .iter()
            .enumerate()
            .filter(|&(_, &v)| seen[v])
            .fold(0u64, |m, (label, _)| m | 1 << label);
        let subset = canonical_subset(n, side);
        if subset == 0 {
            continue;
        }
        terms.push(CutTerm {
            subset: subset_elements(subset),
            weight: e.len.clone(),
        });
    }
    Ok(CutDecomposition { n, terms })
}

/// A random tree on `n` leaves: leaves are attached one at a time to a
/// uniformly chosen edge; edge lengths come from `length`. Returned in
/// canonical form.
pub fn random_tree<T: Scalar, R: Rng>(
    n: usize,
    rng: &mut R,
    mut length: impl FnMut(&mut R) -> T,
) -> Result<PhyloTree<T>> {
    if n == 0 {
        return Err(Error::Domain("a tree needs at least one leaf".into()));
    }
    let mut edges: Vec<TreeEdge<T>> = Vec::new();
    let mut nodes = n;
    if n >= 2 {
        edges.push(TreeEdge {
            u: 0,
            v: 1,
            len: length(rng),
        });
    }
    for k in 2..n {
        let pick = rng.random_range(0..edges.len());
        let x = nodes;
        nodes += 1;
        let old_v = edges[pick].v;
        edges[pick].v = x;
        edges[pick].len = length(rng);
        edges.push(TreeEdge {
            u: x,
            v: old_v,
            len: length(rng),
        });
        edges.push(TreeEdge {
            u: x,
            v: k,
            len: length(rng),
        });
    }
    Ok(canonicalize((0..n).collect(), nodes, edges))
}
