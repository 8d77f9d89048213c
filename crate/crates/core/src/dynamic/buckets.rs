//! Rank-range buckets over a node's full neighbourhood.
//!
//! Neighbours are spread over `b = ⌈d̃ / (c·k)⌉` buckets (`c = 80` by
//! default) by rank, so each bucket holds `Θ(k)` neighbours in expectation
//! and the search for a replacement top-`k` member touches few of them.

use std::collections::BTreeSet;
use std::ops::Bound;

use crate::ranking::{RankKey, RankMode, Ranking};

/// Bucket slot (0-based) of `w` when the rank space is cut into `b` parts.
///
/// Permutation ranks use processing positions: slot `j` (1-based) holds
/// `(j-1)·n/b < π(w) ≤ j·n/b`. Hashed ranks split `[0, p)` into `b` equal
/// intervals instead.
pub fn slot(r: &Ranking, w: usize, b: usize) -> usize {
    match r.mode() {
        RankMode::Permutation => {
            let n = r.n();
            let pos = r.position(w);
            (pos * b).div_ceil(n) - 1
        }
        RankMode::Hashed { modulus } => {
            let width = modulus.div_ceil(b as u128);
            (r.rank(w) / width) as usize
        }
    }
}

/// Number of buckets for a degree estimate.
pub fn bucket_count(dtilde: usize, k: usize, divisor: usize) -> usize {
    dtilde.div_ceil(divisor * k).max(1)
}

#[derive(Debug, Clone)]
pub struct BucketIndex {
    dtilde: usize,
    buckets: Vec<BTreeSet<RankKey>>,
}

impl BucketIndex {
    pub fn build<I>(r: &Ranking, neighbors: I, dtilde: usize, k: usize, divisor: usize) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        let b = bucket_count(dtilde, k, divisor);
        let mut buckets = vec![BTreeSet::new(); b];
        for w in neighbors {
            buckets[slot(r, w, b)].insert(r.key(w));
        }
        BucketIndex { dtilde, buckets }
    }

    pub fn dtilde(&self) -> usize {
        self.dtilde
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn bucket(&self, j: usize) -> &BTreeSet<RankKey> {
        &self.buckets[j]
    }

    pub fn len(&self) -> usize {
        self.buckets.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.iter().all(BTreeSet::is_empty)
    }

    pub fn insert(&mut self, r: &Ranking, w: usize) {
        let j = slot(r, w, self.buckets.len());
        self.buckets[j].insert(r.key(w));
    }

    pub fn remove(&mut self, r: &Ranking, w: usize) -> bool {
        let j = slot(r, w, self.buckets.len());
        self.buckets[j].remove(&r.key(w))
    }

    /// New degree estimate once the degree has left `(d̃/4, 4·d̃)`, halving
    /// or doubling until it is back inside. `None` if no rebuild is due.
    pub fn retarget(&self, degree: usize) -> Option<usize> {
        let mut dt = self.dtilde;
        while degree >= 4 * dt {
            dt *= 2;
        }
        while 4 * degree <= dt && dt > 1 {
            dt /= 2;
        }
        (dt != self.dtilde).then_some(dt)
    }

    /// Whether the degree lies inside the estimate's window. A node of
    /// degree 0 is allowed with the floor estimate `d̃ = 1`.
    pub fn window_holds(&self, degree: usize) -> bool {
        degree < 4 * self.dtilde && (4 * degree > self.dtilde || self.dtilde == 1)
    }

    /// Highest-ranked neighbour with key strictly between `after` (or the
    /// top of the order) and `owner`. Walks buckets from the highest rank
    /// range down and stops at the owner's own bucket. Returns the find and
    /// the number of buckets touched.
    pub fn next_higher(
        &self,
        r: &Ranking,
        owner: usize,
        after: Option<RankKey>,
    ) -> (Option<RankKey>, usize) {
        let owner_key = r.key(owner);
        let last_slot = slot(r, owner, self.buckets.len());
        let lower = match after {
            Some(k) => Bound::Excluded(k),
            None => Bound::Unbounded,
        };
        let mut visits = 0;
        for bucket in &self.buckets[..=last_slot] {
            visits += 1;
            if let Some(&k) = bucket.range((lower, Bound::Excluded(owner_key))).next() {
                return (Some(k), visits);
            }
        }
        (None, visits)
    }
}
