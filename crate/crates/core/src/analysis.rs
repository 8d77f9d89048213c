//! Analysis objects over a sequential Pivot trace: queried sets, recursion
//! trees, query paths, expensive extended query paths, and per-instance
//! checks of the combinatorial lemmas that tie them to cut edges.
//!
//! "`u` queries `v`" is read off the trace as `v ∈ Q(u)`, i.e.
//! `v ∈ N(u)` and `π(v) ≤ σ(u)`.

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pivot::{check_budget, prune_trace, sequential_pivot, PivotTrace};
use crate::ranking::Ranking;

/// Cap on paths enumerated by a single count.
pub const PATH_LIMIT: u64 = 10_000_000;

/// Cap on materialized recursion-tree vertices.
pub const TREE_VERTEX_LIMIT: usize = 1_000_000;

#[inline]
fn queries(trace: &PivotTrace, u: usize, v: usize) -> bool {
    trace.pi(v) <= trace.sigma(u) && u != v
}

/// `Q(u)`, sorted by processing index.
pub fn queried_set(trace: &PivotTrace, g: &Graph, u: usize) -> Vec<usize> {
    let mut q: Vec<usize> = g.neighbors(u).filter(|&v| queries(trace, u, v)).collect();
    q.sort_unstable_by_key(|&v| trace.pi(v));
    q
}

/// `dep_size(u) = Σ_{v ∈ Q(u)} (1 + dep_size(v))`, evaluated in increasing
/// `π` (queried nodes always have smaller `π`). Saturates at `u64::MAX`.
pub fn dep_size_all(trace: &PivotTrace, g: &Graph) -> Vec<u64> {
    let n = trace.n();
    let mut by_pi: Vec<usize> = (0..n).collect();
    by_pi.sort_unstable_by_key(|&u| trace.pi(u));
    let mut dep = vec![0u64; n];
    for u in by_pi {
        dep[u] = g
            .neighbors(u)
            .filter(|&v| queries(trace, u, v))
            .fold(0u64, |acc, v| acc.saturating_add(dep[v].saturating_add(1)));
    }
    dep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    /// Endpoints settled at different steps.
    pub cut: bool,
}

/// Unfolding of queried sets from a root. Vertices are indices into
/// `labels`; a graph node may appear many times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionTree {
    pub root: usize,
    pub labels: Vec<usize>,
    pub edges: Vec<TreeEdge>,
}

impl RecursionTree {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cut_count(&self) -> usize {
        self.edges.iter().filter(|e| e.cut).count()
    }

    /// Graph labels of the children of tree vertex `vertex`.
    pub fn children(&self, vertex: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.parent == vertex)
            .map(|e| self.labels[e.child])
            .collect()
    }
}

pub fn recursion_tree(trace: &PivotTrace, g: &Graph, u: usize) -> Result<RecursionTree> {
    let mut tree = RecursionTree {
        root: u,
        labels: vec![u],
        edges: Vec::new(),
    };
    let mut stack = vec![0usize];
    while let Some(vertex) = stack.pop() {
        let x = tree.labels[vertex];
        for y in queried_set(trace, g, x) {
            if tree.labels.len() >= TREE_VERTEX_LIMIT {
                return Err(Error::TreeLimit {
                    limit: TREE_VERTEX_LIMIT,
                });
            }
            let child = tree.labels.len();
            tree.labels.push(y);
            tree.edges.push(TreeEdge {
                parent: vertex,
                child,
                cut: trace.sigma(x) != trace.sigma(y),
            });
            stack.push(child);
        }
    }
    Ok(tree)
}

/// `|Q(a, b)|`: query paths `(a, b, u_2, …)` in which every node after the
/// first queries its predecessor. Zero unless `b` queries `a`.
pub fn count_query_paths(trace: &PivotTrace, g: &Graph, a: usize, b: usize) -> Result<u64> {
    if !g.has_edge(a, b) {
        return Err(Error::MissingEdge(a, b));
    }
    if !queries(trace, b, a) {
        return Ok(0);
    }
    let mut count = 0u64;
    let mut stack = vec![b];
    while let Some(tip) = stack.pop() {
        count += 1;
        if count > PATH_LIMIT {
            return Err(Error::PathLimit { limit: PATH_LIMIT });
        }
        for w in g.neighbors(tip) {
            if queries(trace, w, tip) {
                assert!(trace.pi(w) > trace.pi(tip), "query path must climb in π");
                stack.push(w);
            }
        }
    }
    Ok(count)
}

/// `|X|`: expensive extended query paths over the whole graph.
///
/// A path `(u_0, …, u_L)`, `L ≥ 2`, counts when `(u_0, …, u_{L-1})` is a
/// query path, `π(u_{L-2}) ≤ σ(u_L)`, the first edge is cut
/// (`σ(u_0) < σ(u_1)`) and the last one is not (`σ(u_{L-1}) = σ(u_L)`).
/// The final hop may return to `u_{L-2}`; no other repeat is possible.
pub fn count_expensive_paths(trace: &PivotTrace, g: &Graph) -> Result<u64> {
    let mut total = 0u64;
    let mut visited = 0u64;
    for u0 in 0..trace.n() {
        for u1 in g.neighbors(u0) {
            if trace.sigma(u0) >= trace.sigma(u1) || !queries(trace, u1, u0) {
                continue;
            }
            // (second-to-last, last) node of each query path prefix.
            let mut stack = vec![(u0, u1)];
            while let Some((prev, tip)) = stack.pop() {
                visited += 1;
                if visited > PATH_LIMIT {
                    return Err(Error::PathLimit { limit: PATH_LIMIT });
                }
                for x in g.neighbors(tip) {
                    if trace.pi(prev) <= trace.sigma(x) && trace.sigma(tip) == trace.sigma(x) {
                        total += 1;
                    }
                    if queries(trace, x, tip) {
                        assert!(trace.pi(x) > trace.pi(tip), "query path must climb in π");
                        stack.push((tip, x));
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Edges whose endpoints Pivot places in different clusters.
pub fn pivot_cut_edges(trace: &PivotTrace, g: &Graph) -> u64 {
    g.edges()
        .into_iter()
        .filter(|&(u, v)| trace.sigma(u) != trace.sigma(v))
        .count() as u64
}

/// Edges co-clustered by `before` but separated by `after`.
pub fn separated_edges(g: &Graph, before: &Clustering, after: &Clustering) -> u64 {
    g.edges()
        .into_iter()
        .filter(|&(u, v)| {
            before.cluster_of(u) == before.cluster_of(v)
                && after.cluster_of(u) != after.cluster_of(v)
        })
        .count() as u64
}

pub fn ceil_half(x: usize) -> usize {
    x.div_ceil(2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeLemmaReport {
    pub edges: usize,
    pub cut_edges: usize,
    /// Largest number of uncut edges meeting at one tree vertex.
    pub max_uncut_incident: usize,
    /// Tree vertex violating the at-most-one rule, if any.
    pub witness: Option<usize>,
    /// `edges ≥ k ⟹ cut_edges ≥ ⌈(k-1)/2⌉`.
    pub cut_bound_holds: bool,
}

impl TreeLemmaReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none() && self.cut_bound_holds
    }
}

/// Checks that every tree vertex meets at most one uncut edge and that a
/// tree with at least `k` edges has at least `⌈(k-1)/2⌉` cut edges.
pub fn check_tree_lemmas(tree: &RecursionTree, k: usize) -> TreeLemmaReport {
    let mut uncut = vec![0usize; tree.labels.len()];
    for e in tree.edges.iter().filter(|e| !e.cut) {
        uncut[e.parent] += 1;
        uncut[e.child] += 1;
    }
    let max_uncut_incident = uncut.iter().copied().max().unwrap_or(0);
    let witness = uncut.iter().position(|&c| c > 1);
    let edges = tree.edge_count();
    let cut_edges = tree.cut_count();
    let cut_bound_holds = edges < k || cut_edges >= ceil_half(k.saturating_sub(1));
    TreeLemmaReport {
        edges,
        cut_edges,
        max_uncut_incident,
        witness,
        cut_bound_holds,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruningBoundReport {
    pub k: usize,
    pub pruning_cuts: u64,
    pub expensive_paths: u64,
    /// `⌈(k-1)/2⌉`; zero for `k = 1`, where the bound says nothing.
    pub divisor: u64,
}

impl PruningBoundReport {
    /// `pruning_cuts ≤ |X| / ⌈(k-1)/2⌉`, checked without division.
    pub fn holds(&self) -> bool {
        self.divisor == 0 || self.pruning_cuts * self.divisor <= self.expensive_paths
    }
}

/// Compares edges cut by the pruning step against the expensive-path bound.
pub fn pruning_cut_bound_check(g: &Graph, r: &Ranking, k: usize) -> Result<PruningBoundReport> {
    check_budget(k)?;
    let (pivot, trace) = sequential_pivot(g, r)?;
    let pruned = prune_trace(g, &trace, k);
    Ok(PruningBoundReport {
        k,
        pruning_cuts: separated_edges(g, &pivot, &pruned),
        expensive_paths: count_expensive_paths(&trace, g)?,
        divisor: ceil_half(k - 1) as u64,
    })
}
