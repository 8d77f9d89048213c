//! Per-permutation path statistics for one graph.

use std::io::Write;

use pruned_pivot::analysis::dep_size_all;
use pruned_pivot::analysis::{
    count_expensive_paths, count_query_paths, pivot_cut_edges, separated_edges,
};
use pruned_pivot::pivot::{prune_by_dep_size, sequential_pivot};
use pruned_pivot::{Error, Graph, Ranking, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathRow {
    pub trial: usize,
    /// Query paths starting `(a, b)`.
    pub query_ab: u64,
    /// Query paths starting `(b, a)`.
    pub query_ba: u64,
    pub expensive: u64,
    pub pivot_cuts: u64,
    pub pruning_cuts: u64,
}

pub const PATH_HEADER: &str =
    "trial,query_paths_ab,query_paths_ba,expensive_paths,pivot_cut_edges,pruning_cut_edges";

/// One row per trial, each under a fresh permutation derived from `seed`.
pub fn path_statistics(
    g: &Graph,
    edge: (usize, usize),
    k: usize,
    trials: usize,
    seed: Seed,
) -> Result<Vec<PathRow>, Error> {
    let (a, b) = edge;
    if !g.has_edge(a, b) {
        return Err(Error::MissingEdge(a, b));
    }
    (0..trials)
        .map(|trial| {
            let r = Ranking::random_permutation(g.n(), seed.derive(trial as u64))?;
            let (pivot, trace) = sequential_pivot(g, &r)?;
            let pruned = prune_by_dep_size(&trace, &dep_size_all(&trace, g), k);
            Ok(PathRow {
                trial,
                query_ab: count_query_paths(&trace, g, a, b)?,
                query_ba: count_query_paths(&trace, g, b, a)?,
                expensive: count_expensive_paths(&trace, g)?,
                pivot_cuts: pivot_cut_edges(&trace, g),
                pruning_cuts: separated_edges(g, &pivot, &pruned),
            })
        })
        .collect()
}

pub fn write_paths<W: Write>(rows: &[PathRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{PATH_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.trial, r.query_ab, r.query_ba, r.expensive, r.pivot_cuts, r.pruning_cuts
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let rows = path_statistics(&g, (0, 1), 2, 10, Seed(1)).unwrap();
        for r in rows {
            // Exactly one orientation is a query path.
            assert_eq!(r.query_ab + r.query_ba, 1);
            assert_eq!((r.expensive, r.pivot_cuts, r.pruning_cuts), (0, 0, 0));
        }
    }

    #[test]
    fn missing_edge() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(path_statistics(&g, (1, 2), 2, 1, Seed(0)).is_err());
    }
}
