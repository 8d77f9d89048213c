//! Stochastic block model graphs.

use rand::Rng;

use pruned_pivot::{Graph, Seed};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmConfig {
    pub parts: usize,
    pub part_size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: Seed,
}

impl SbmConfig {
    /// Three parts of 200 nodes, 0.9 inside and 0.1 across.
    pub fn paper(seed: Seed) -> Self {
        SbmConfig {
            parts: 3,
            part_size: 200,
            p_in: 0.9,
            p_out: 0.1,
            seed,
        }
    }

    pub fn n(&self) -> usize {
        self.parts * self.part_size
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.parts == 0 || self.part_size == 0 {
            return Err(BenchError::Config(
                "parts and part size must be at least 1".into(),
            ));
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(BenchError::Config(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        Ok(())
    }
}

/// Node `u` lies in part `u / part_size`; every pair is an independent coin.
pub fn sbm_generate(cfg: &SbmConfig) -> Result<Graph, BenchError> {
    cfg.validate()?;
    let n = cfg.n();
    let mut rng = cfg.seed.rng();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / cfg.part_size == v / cfg.part_size {
                cfg.p_in
            } else {
                cfg.p_out
            };
            if rng.gen_bool(p) {
                g.insert_edge(u, v);
            }
        }
    }
    Ok(g)
}
