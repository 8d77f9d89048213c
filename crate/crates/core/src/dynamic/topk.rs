use std::collections::BTreeSet;

use crate::ranking::RankKey;

/// The up-to-`k` highest-ranked among a node's strictly higher-ranked
/// neighbours, ordered highest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopKList {
    k: usize,
    keys: BTreeSet<RankKey>,
}

impl TopKList {
    pub fn new(k: usize) -> Self {
        TopKList {
            k,
            keys: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.keys.len() >= self.k
    }

    pub fn contains(&self, key: &RankKey) -> bool {
        self.keys.contains(key)
    }

    /// Lowest-ranked member.
    pub fn last(&self) -> Option<RankKey> {
        self.keys.last().copied()
    }

    /// Admits `key` if it belongs among the top `k`, evicting the current
    /// lowest-ranked member when over capacity. Returns whether it entered.
    pub fn offer(&mut self, key: RankKey) -> bool {
        if self.is_full() && self.last().is_some_and(|last| key > last) {
            return false;
        }
        self.keys.insert(key);
        if self.keys.len() > self.k {
            self.keys.pop_last();
        }
        true
    }

    pub fn remove(&mut self, key: &RankKey) -> bool {
        self.keys.remove(key)
    }

    /// Labels, highest-ranked first.
    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.keys.iter().map(|k| k.label)
    }
}
