//! Undirected simple graphs over the labels `0..n`.
//!
//! Edges are the positive pairs of a correlation-clustering instance; every
//! absent pair is negative.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Graph {
    adjacency: Vec<HashSet<usize>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![HashSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from unordered label pairs. Duplicate pairs (in either
    /// orientation) collapse to one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_pair(u, v)?;
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(HashSet::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|s| s.contains(&v))
    }

    /// Neighbours of `u` in unspecified order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[u].iter().copied()
    }

    /// Neighbours of `u` sorted by label.
    pub fn sorted_neighbors(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.neighbors(u).collect();
        out.sort_unstable();
        out
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for v in self.sorted_neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Validates a label pair without touching the graph.
    pub fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        for label in [u, v] {
            if label >= n {
                return Err(Error::LabelOutOfRange { label, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    /// Inserts `{u, v}`; returns false if it was already present. Labels must
    /// be valid and distinct.
    pub fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        if self.adjacency[u].insert(v) {
            self.adjacency[v].insert(u);
            self.m += 1;
            true
        } else {
            false
        }
    }

    /// Removes `{u, v}`; returns false if it was absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if self.adjacency.get_mut(u).is_some_and(|s| s.remove(&v)) {
            self.adjacency[v].remove(&u);
            self.m -= 1;
            true
        } else {
            false
        }
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#`
    /// comments and blank lines skipped, and an optional leading `n <count>`
    /// line fixing the node count (otherwise `max label + 1`).
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared_n: Option<usize> = None;
        let mut pairs = Vec::new();
        let mut seen_content = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !seen_content && fields.first() == Some(&"n") {
                seen_content = true;
                if fields.len() != 2 {
                    return Err(parse_err(line_no, "expected `n <count>`"));
                }
                declared_n = Some(parse_label(fields[1], line_no)?);
                continue;
            }
            seen_content = true;
            if fields.len() != 2 {
                return Err(parse_err(line_no, "expected two labels"));
            }
            let u = parse_label(fields[0], line_no)?;
            let v = parse_label(fields[1], line_no)?;
            pairs.push((line_no, u, v));
        }
        let n = match declared_n {
            Some(n) => n,
            None => pairs
                .iter()
                .map(|&(_, u, v)| u.max(v) + 1)
                .max()
                .unwrap_or(0),
        };
        let mut g = Graph::empty(n);
        for (line, u, v) in pairs {
            g.check_pair(u, v).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Serializes in the format accepted by [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Graph equality is edge-set equality.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.m == other.m && self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn parse_label(s: &str, line: usize) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| parse_err(line, &format!("invalid label `{s}`")))
}
