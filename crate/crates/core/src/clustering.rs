//! Cluster assignments and the disagreement objective.

use crate::graph::Graph;

/// Per-node cluster representative plus the unlucky flag.
///
/// Representatives are node labels: a pivot represents its own cluster and
/// singletons map to themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    cluster_of: Vec<usize>,
    unlucky: Vec<bool>,
}

impl Clustering {
    pub fn new(cluster_of: Vec<usize>, unlucky: Vec<bool>) -> Self {
        assert_eq!(cluster_of.len(), unlucky.len());
        let c = Clustering {
            cluster_of,
            unlucky,
        };
        debug_assert!(c.is_well_formed());
        c
    }

    /// Assignment without unlucky nodes.
    pub fn from_assignment(cluster_of: Vec<usize>) -> Self {
        let n = cluster_of.len();
        Self::new(cluster_of, vec![false; n])
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_assignment((0..n).collect())
    }

    pub fn one_cluster(n: usize) -> Self {
        Self::from_assignment(vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn cluster_of(&self, u: usize) -> usize {
        self.cluster_of[u]
    }

    pub fn is_unlucky(&self, u: usize) -> bool {
        self.unlucky[u]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn unlucky_nodes(&self) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.unlucky[u]).collect()
    }

    /// Representatives are fixed points and unlucky nodes are singletons.
    pub fn is_well_formed(&self) -> bool {
        let n = self.n();
        (0..n).all(|u| {
            let c = self.cluster_of[u];
            c < n && self.cluster_of[c] == c && (!self.unlucky[u] || c == u)
        })
    }

    /// Positive pairs split across clusters plus negative pairs kept
    /// together, via cluster sizes and an edge scan in `O(n + m)`.
    pub fn cost(&self, g: &Graph) -> u64 {
        let n = self.n();
        assert_eq!(n, g.n());
        let mut sizes = vec![0u64; n];
        for &c in &self.cluster_of {
            sizes[c] += 1;
        }
        let together: u64 = sizes.iter().map(|&s| s * s.saturating_sub(1) / 2).sum();
        let mut within = 0u64;
        for u in 0..n {
            for v in g.neighbors(u) {
                if u < v && self.cluster_of[u] == self.cluster_of[v] {
                    within += 1;
                }
            }
        }
        // cut = m - within; co-clustered non-edges = together - within.
        together + g.m() as u64 - 2 * within
    }

    /// Same objective by direct enumeration of all pairs.
    pub fn cost_pairwise(&self, g: &Graph) -> u64 {
        let n = self.n();
        let mut cost = 0;
        for u in 0..n {
            for v in u + 1..n {
                let same = self.cluster_of[u] == self.cluster_of[v];
                if g.has_edge(u, v) != same {
                    cost += 1;
                }
            }
        }
        cost
    }
}
