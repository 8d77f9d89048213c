//! Pivot and its pruned variants.
//!
//! Every variant processes nodes from highest- to lowest-ranked, and a node
//! scans its strictly higher-ranked neighbours highest first, joining the
//! first pivot it meets. The variants differ in how much of that scan (and
//! of the recursion behind it) they are willing to pay for.

use crate::analysis::{dep_size_all, queried_set};
use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ranking::{RankedAdjacency, Ranking};

/// Full state of a sequential Pivot run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotTrace {
    pi: Vec<usize>,
    sigma: Vec<usize>,
    is_pivot: Vec<bool>,
    assigned_to: Vec<usize>,
}

impl PivotTrace {
    pub fn n(&self) -> usize {
        self.pi.len()
    }

    /// Processing index of `u` (1-based).
    pub fn pi(&self, u: usize) -> usize {
        self.pi[u]
    }

    /// Index at which the first pivot in `N(u) ∪ {u}` was processed.
    pub fn sigma(&self, u: usize) -> usize {
        self.sigma[u]
    }

    pub fn is_pivot(&self, u: usize) -> bool {
        self.is_pivot[u]
    }

    pub fn assigned_to(&self, u: usize) -> usize {
        self.assigned_to[u]
    }

    pub fn clustering(&self) -> Clustering {
        Clustering::from_assignment(self.assigned_to.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pivot,
    Assigned(usize),
    Unlucky,
}

/// Per-node result of a (pruned) recursive clustering query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeResult {
    pub outcome: Outcome,
    pub calls_used: usize,
}

impl NodeResult {
    /// Cluster representative of the queried node `u`.
    pub fn cluster_id(&self, u: usize) -> usize {
        match self.outcome {
            Outcome::Pivot | Outcome::Unlucky => u,
            Outcome::Assigned(p) => p,
        }
    }

    pub fn is_unlucky(&self) -> bool {
        self.outcome == Outcome::Unlucky
    }
}

/// Source of scan lists for the recursive procedures.
pub trait ScanSource {
    /// Appends to `out` at most `limit` strictly higher-ranked neighbours of
    /// `u`, highest-ranked first.
    fn scan(&mut self, u: usize, limit: usize, out: &mut Vec<usize>);
}

impl ScanSource for RankedAdjacency {
    fn scan(&mut self, u: usize, limit: usize, out: &mut Vec<usize>) {
        out.extend(self.higher(u).iter().take(limit));
    }
}

impl ScanSource for &RankedAdjacency {
    fn scan(&mut self, u: usize, limit: usize, out: &mut Vec<usize>) {
        out.extend(self.higher(u).iter().take(limit));
    }
}

pub fn check_budget(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::ZeroBudget)
    } else {
        Ok(())
    }
}

/// Sequential Pivot: the bottom-up formulation that also records σ.
pub fn sequential_pivot(g: &Graph, r: &Ranking) -> Result<(Clustering, PivotTrace)> {
    r.check_covers(g)?;
    let adj = RankedAdjacency::new(g, r);
    let trace = sequential_trace(&adj, r);
    Ok((trace.clustering(), trace))
}

pub(crate) fn sequential_trace(adj: &RankedAdjacency, r: &Ranking) -> PivotTrace {
    let n = adj.n();
    let mut trace = PivotTrace {
        pi: (0..n).map(|u| r.position(u)).collect(),
        sigma: vec![0; n],
        is_pivot: vec![false; n],
        assigned_to: vec![0; n],
    };
    for &u in r.order() {
        match adj.higher(u).iter().find(|&&v| trace.is_pivot[v]) {
            Some(&v) => {
                trace.assigned_to[u] = v;
                trace.sigma[u] = trace.pi[v];
            }
            None => {
                trace.is_pivot[u] = true;
                trace.assigned_to[u] = u;
                trace.sigma[u] = trace.pi[u];
            }
        }
    }
    trace
}

/// Classic Pivot, simulated literally: the highest-ranked unclustered node
/// becomes a pivot and absorbs its unclustered neighbours.
pub fn classic_pivot(g: &Graph, r: &Ranking) -> Result<Clustering> {
    r.check_covers(g)?;
    let n = g.n();
    let mut cluster_of: Vec<Option<usize>> = vec![None; n];
    for &u in r.order() {
        if cluster_of[u].is_some() {
            continue;
        }
        cluster_of[u] = Some(u);
        for v in g.neighbors(u) {
            if cluster_of[v].is_none() {
                cluster_of[v] = Some(u);
            }
        }
    }
    Ok(Clustering::from_assignment(
        cluster_of
            .into_iter()
            .map(|c| c.expect("every node clustered"))
            .collect(),
    ))
}

/// Memoized top-down Pivot. The memo lives as long as the session, so
/// later queries reuse earlier work.
#[derive(Debug, Clone)]
pub struct RecursiveSession {
    adj: RankedAdjacency,
    /// `Some(None)`: pivot; `Some(Some(p))`: assigned to `p`.
    memo: Vec<Option<Option<usize>>>,
}

impl RecursiveSession {
    pub fn new(g: &Graph, r: &Ranking) -> Result<Self> {
        r.check_covers(g)?;
        Ok(RecursiveSession {
            adj: RankedAdjacency::new(g, r),
            memo: vec![None; g.n()],
        })
    }

    /// Never returns `Unlucky`. `calls_used` counts the recursive
    /// invocations issued by this query, memo hits included.
    pub fn cluster(&mut self, u: usize) -> NodeResult {
        let mut calls = 0;
        let resolved = match self.memo[u] {
            Some(r) => r,
            None => self.resolve(u, &mut calls),
        };
        NodeResult {
            outcome: match resolved {
                None => Outcome::Pivot,
                Some(p) => Outcome::Assigned(p),
            },
            calls_used: calls,
        }
    }

    // Explicit stack: the recursion depth can reach n on long rank chains.
    fn resolve(&mut self, root: usize, calls: &mut usize) -> Option<usize> {
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        loop {
            let (u, i) = *stack.last().expect("stack holds the root");
            let hs = self.adj.higher(u);
            let finished = if i >= hs.len() {
                Some(None)
            } else {
                let v = hs[i];
                match self.memo[v] {
                    Some(None) => {
                        *calls += 1;
                        Some(Some(v))
                    }
                    Some(Some(_)) => {
                        *calls += 1;
                        stack.last_mut().unwrap().1 += 1;
                        None
                    }
                    None => {
                        stack.push((v, 0));
                        None
                    }
                }
            };
            if let Some(res) = finished {
                self.memo[u] = Some(res);
                stack.pop();
                if stack.is_empty() {
                    return res;
                }
            }
        }
    }
}

/// Runs the budgeted recursion from `root`.
///
/// A shared counter starts at 0 and is incremented immediately before every
/// recursive invocation; an invocation entered with the counter at `k` or
/// more aborts the whole run. Each node whose invocation was issued is
/// pushed to `invoked` (the aborted one included, duplicates possible).
pub fn pruned_run<S: ScanSource + ?Sized>(
    src: &mut S,
    root: usize,
    k: usize,
    invoked: &mut Vec<usize>,
) -> NodeResult {
    struct Aborted;

    struct Run<'a, S: ?Sized> {
        src: &'a mut S,
        k: usize,
        calls: usize,
        invoked: &'a mut Vec<usize>,
    }

    impl<S: ScanSource + ?Sized> Run<'_, S> {
        fn visit(&mut self, u: usize) -> Result<Option<usize>, Aborted> {
            if self.calls >= self.k {
                return Err(Aborted);
            }
            // The counter reaches k after at most k - calls further scans.
            let mut list = Vec::new();
            self.src.scan(u, self.k - self.calls, &mut list);
            for v in list {
                self.calls += 1;
                self.invoked.push(v);
                if self.visit(v)?.is_none() {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
    }

    let mut run = Run {
        src,
        k,
        calls: 0,
        invoked,
    };
    let outcome = match run.visit(root) {
        Ok(None) => Outcome::Pivot,
        Ok(Some(p)) => Outcome::Assigned(p),
        Err(Aborted) => Outcome::Unlucky,
    };
    NodeResult {
        outcome,
        calls_used: run.calls,
    }
}

/// Pruned Pivot for one node; no memoization between queries.
pub fn pruned_cluster(g: &Graph, r: &Ranking, u: usize, k: usize) -> Result<NodeResult> {
    check_budget(k)?;
    r.check_covers(g)?;
    let mut adj = RankedAdjacency::new(g, r);
    Ok(pruned_run(&mut adj, u, k, &mut Vec::new()))
}

/// Pruned Pivot results for every node over a prepared scan order.
pub fn pruned_results(adj: &RankedAdjacency, k: usize) -> Vec<NodeResult> {
    let mut src = adj;
    let mut scratch = Vec::new();
    (0..adj.n())
        .map(|u| {
            scratch.clear();
            pruned_run(&mut src, u, k, &mut scratch)
        })
        .collect()
}

pub(crate) fn clustering_from_results(results: &[NodeResult]) -> Clustering {
    Clustering::new(
        results
            .iter()
            .enumerate()
            .map(|(u, r)| r.cluster_id(u))
            .collect(),
        results.iter().map(NodeResult::is_unlucky).collect(),
    )
}

/// Pruned Pivot applied to every node; unlucky nodes become singletons.
pub fn pruned_pivot_all(g: &Graph, r: &Ranking, k: usize) -> Result<Clustering> {
    check_budget(k)?;
    r.check_covers(g)?;
    let adj = RankedAdjacency::new(g, r);
    Ok(clustering_from_results(&pruned_results(&adj, k)))
}

/// Sequential Pivot followed by the pruning step: nodes whose recursion
/// tree has at least `k` edges are moved to singleton clusters.
pub fn pivot_with_pruning(g: &Graph, r: &Ranking, k: usize) -> Result<Clustering> {
    check_budget(k)?;
    let (_, trace) = sequential_pivot(g, r)?;
    Ok(prune_trace(g, &trace, k))
}

pub(crate) fn prune_trace(g: &Graph, trace: &PivotTrace, k: usize) -> Clustering {
    prune_by_dep_size(trace, &dep_size_all(trace, g), k)
}

/// Pruning step over precomputed dependency sizes, so one trace serves a
/// whole sweep of budgets.
pub fn prune_by_dep_size(trace: &PivotTrace, dep: &[u64], k: usize) -> Clustering {
    singletonize(trace, |u| dep[u] >= k as u64)
}

/// Depth limit over precomputed [`recursion_heights`].
pub fn limit_by_height(trace: &PivotTrace, heights: &[usize], depth: usize) -> Clustering {
    singletonize(trace, |u| heights[u] > depth)
}

fn singletonize(trace: &PivotTrace, drop: impl Fn(usize) -> bool) -> Clustering {
    let unlucky: Vec<bool> = (0..trace.n()).map(drop).collect();
    let cluster_of = (0..trace.n())
        .map(|u| if unlucky[u] { u } else { trace.assigned_to(u) })
        .collect();
    Clustering::new(cluster_of, unlucky)
}

/// Height of each recursion tree in edges: 0 for an empty queried set,
/// otherwise one more than the tallest queried subtree.
pub fn recursion_heights(trace: &PivotTrace, g: &Graph) -> Vec<usize> {
    let n = trace.n();
    let mut by_pi: Vec<usize> = (0..n).collect();
    by_pi.sort_unstable_by_key(|&u| trace.pi(u));
    let mut h = vec![0usize; n];
    for u in by_pi {
        h[u] = queried_set(trace, g, u)
            .into_iter()
            .map(|v| h[v] + 1)
            .max()
            .unwrap_or(0);
    }
    h
}

/// Depth-limited baseline: nodes whose recursion tree is taller than
/// `depth` edges become singletons.
pub fn r_pivot(g: &Graph, r: &Ranking, depth: usize) -> Result<Clustering> {
    check_budget(depth)?;
    let (_, trace) = sequential_pivot(g, r)?;
    Ok(limit_by_height(
        &trace,
        &recursion_heights(&trace, g),
        depth,
    ))
}

/// Width-limited baseline: each node scans at most `width` of its
/// higher-ranked neighbours. Running out of budget with neighbours left
/// unscanned makes the node a singleton (not a pivot).
pub fn narrow_pivot(g: &Graph, r: &Ranking, width: usize) -> Result<Clustering> {
    check_budget(width)?;
    r.check_covers(g)?;
    let adj = RankedAdjacency::new(g, r);
    let n = g.n();
    let mut is_pivot = vec![false; n];
    let mut cluster_of = vec![0; n];
    let mut singleton = vec![false; n];
    for &u in r.order() {
        let hs = adj.higher(u);
        match hs.iter().take(width).find(|&&v| is_pivot[v]) {
            Some(&v) => cluster_of[u] = v,
            None => {
                cluster_of[u] = u;
                if hs.len() > width {
                    singleton[u] = true;
                } else {
                    is_pivot[u] = true;
                }
            }
        }
    }
    Ok(Clustering::new(cluster_of, singleton))
}
