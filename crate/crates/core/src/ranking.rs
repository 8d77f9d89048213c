//! Processing orders on nodes.
//!
//! A node `u` is *higher-ranked* than `v` when its key `(rank, label)` is
//! smaller. Ties in the rank value (possible only with hashed ranks) fall
//! back to the label, so keys always form a strict total order.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed::Seed;

/// Composite ordering key: rank value first, label second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankKey {
    pub rank: u128,
    pub label: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    /// Ranks are a bijection onto `1..=n`.
    Permutation,
    /// Ranks are hash values in `[0, modulus)`.
    Hashed { modulus: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    mode: RankMode,
    ranks: Vec<u128>,
    /// Nodes in ascending key order.
    order: Vec<usize>,
    /// 1-based index of each node in `order`.
    position: Vec<usize>,
}

impl Ranking {
    /// `pi[u]` is the rank of `u`; must be a permutation of `1..=n`.
    pub fn from_permutation(pi: Vec<usize>) -> Result<Self> {
        let n = pi.len();
        if n == 0 {
            return Err(Error::NoNodes);
        }
        let mut seen = vec![false; n];
        for &p in &pi {
            if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("not a permutation of 1..={n}"),
                });
            }
        }
        Ok(Self::build(
            RankMode::Permutation,
            pi.into_iter().map(|p| p as u128).collect(),
        ))
    }

    /// `pi(u) = u + 1`.
    pub fn identity(n: usize) -> Self {
        Self::build(RankMode::Permutation, (1..=n as u128).collect())
    }

    /// Nodes listed from highest- to lowest-ranked.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut pi = vec![0; order.len()];
        for (i, &u) in order.iter().enumerate() {
            if u >= order.len() {
                return Err(Error::LabelOutOfRange {
                    label: u,
                    n: order.len(),
                });
            }
            pi[u] = i + 1;
        }
        Self::from_permutation(pi)
    }

    /// Uniform permutation via Fisher–Yates, deterministic in `seed`.
    pub fn random_permutation(n: usize, seed: Seed) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoNodes);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut seed.rng());
        Self::from_order(&order)
    }

    /// Hashed ranks; `ranks[u]` must lie in `[0, modulus)`.
    pub fn from_hashed(ranks: Vec<u128>, modulus: u128) -> Self {
        debug_assert!(ranks.iter().all(|&r| r < modulus));
        Self::build(RankMode::Hashed { modulus }, ranks)
    }

    fn build(mode: RankMode, ranks: Vec<u128>) -> Self {
        let n = ranks.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by_key(|&u| (ranks[u], u));
        let mut position = vec![0; n];
        for (i, &u) in order.iter().enumerate() {
            position[u] = i + 1;
        }
        Ranking {
            mode,
            ranks,
            order,
            position,
        }
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    pub fn mode(&self) -> RankMode {
        self.mode
    }

    pub fn rank(&self, u: usize) -> u128 {
        self.ranks[u]
    }

    #[inline]
    pub fn key(&self, u: usize) -> RankKey {
        RankKey {
            rank: self.ranks[u],
            label: u,
        }
    }

    /// True if `u` is strictly higher-ranked than `v`.
    #[inline]
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.key(u) < self.key(v)
    }

    /// Processing index `1..=n` of `u` (equals the rank in permutation mode).
    #[inline]
    pub fn position(&self, u: usize) -> usize {
        self.position[u]
    }

    /// Node processed at index `i` (1-based).
    pub fn node_at(&self, i: usize) -> usize {
        self.order[i - 1]
    }

    /// Nodes from highest- to lowest-ranked.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::RankingMismatch {
                ranked: self.n(),
                n: g.n(),
            });
        }
        Ok(())
    }
}

/// For each node, its strictly higher-ranked neighbours in ascending key
/// order (highest first). This is the scan order every pivot variant uses.
#[derive(Debug, Clone)]
pub struct RankedAdjacency {
    higher: Vec<Vec<usize>>,
}

impl RankedAdjacency {
    pub fn new(g: &Graph, r: &Ranking) -> Self {
        let higher = (0..g.n())
            .map(|u| {
                let ku = r.key(u);
                let mut hs: Vec<usize> = g.neighbors(u).filter(|&v| r.key(v) < ku).collect();
                hs.sort_unstable_by_key(|&v| r.key(v));
                hs
            })
            .collect();
        RankedAdjacency { higher }
    }

    pub fn higher(&self, u: usize) -> &[usize] {
        &self.higher[u]
    }

    pub fn n(&self) -> usize {
        self.higher.len()
    }
}
