//! Local cluster queries.
//!
//! Ranks come from a degree-`(w-1)` polynomial over a prime field, so any
//! node's rank is computable from a short seed without global state. A
//! query simulates Pruned Pivot from one node, reading adjacency only
//! through a [`ProbeOracle`] that counts every access.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pivot::{check_budget, pruned_run, NodeResult, ScanSource};
use crate::ranking::{RankKey, Ranking};
use crate::seed::Seed;

/// `2^127 - 1`.
pub const MERSENNE_127: u128 = (1u128 << 127) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulus {
    Mersenne127,
    /// Small prime for exhaustive checks.
    #[cfg(feature = "toy-modulus")]
    Small(u64),
}

impl Modulus {
    pub fn value(self) -> u128 {
        match self {
            Modulus::Mersenne127 => MERSENNE_127,
            #[cfg(feature = "toy-modulus")]
            Modulus::Small(p) => p as u128,
        }
    }

    fn mul(self, a: u128, b: u128) -> u128 {
        match self {
            Modulus::Mersenne127 => mulmod_m127(a, b),
            #[cfg(feature = "toy-modulus")]
            Modulus::Small(p) => a * b % p as u128,
        }
    }

    fn add(self, a: u128, b: u128) -> u128 {
        let s = a + b;
        let p = self.value();
        if s >= p {
            s - p
        } else {
            s
        }
    }
}

fn reduce_m127(x: u128) -> u128 {
    let s = (x & MERSENNE_127) + (x >> 127);
    if s >= MERSENNE_127 {
        s - MERSENNE_127
    } else {
        s
    }
}

/// `a·b mod (2^127 - 1)` for `a, b < 2^127 - 1`.
pub fn mulmod_m127(a: u128, b: u128) -> u128 {
    const LO: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & LO);
    let (b1, b0) = (b >> 64, b & LO);
    // 256-bit product as hi·2^128 + lo.
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let (mid, mid_carry) = p01.overflowing_add(p10);
    let (lo, lo_carry) = p00.overflowing_add(mid << 64);
    let hi = p11 + (mid >> 64) + ((mid_carry as u128) << 64) + lo_carry as u128;
    // 2^128 ≡ 2 and 2^127 ≡ 1.
    reduce_m127((hi << 1) + (lo >> 127) + (lo & MERSENNE_127))
}

/// `h(x) = Σ s_i·x^i mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    coeffs: Vec<u128>,
    modulus: Modulus,
}

impl HashFamily {
    /// `w` coefficients drawn uniformly from `[0, 2^127 - 1)`.
    pub fn from_seed(seed: Seed, w: usize) -> Result<Self> {
        let mut rng = seed.rng();
        Self::from_rng(&mut rng, w, Modulus::Mersenne127)
    }

    pub fn from_rng<R: Rng>(rng: &mut R, w: usize, modulus: Modulus) -> Result<Self> {
        if w == 0 {
            return Err(Error::HashFamily(
                "independence parameter must be at least 1".into(),
            ));
        }
        let p = modulus.value();
        let coeffs = (0..w).map(|_| rng.gen_range(0..p)).collect();
        Ok(HashFamily { coeffs, modulus })
    }

    pub fn from_coefficients(coeffs: Vec<u128>, modulus: Modulus) -> Result<Self> {
        let p = modulus.value();
        if coeffs.is_empty() {
            return Err(Error::HashFamily("no coefficients".into()));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= p) {
            return Err(Error::HashFamily(format!(
                "coefficient {c} not below modulus {p}"
            )));
        }
        Ok(HashFamily { coeffs, modulus })
    }

    pub fn w(&self) -> usize {
        self.coeffs.len()
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coefficients(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn eval(&self, x: u128) -> u128 {
        let m = self.modulus;
        let x = x % m.value();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    /// Hashed ranking over `0..n`, ties broken by label.
    pub fn ranking(&self, n: usize) -> Ranking {
        let ranks = (0..n).map(|v| hash_rank(self, v)).collect();
        Ranking::from_hashed(ranks, self.modulus.value())
    }
}

pub fn hash_rank(f: &HashFamily, v: usize) -> u128 {
    f.eval(v as u128)
}

/// Independence that suffices for a budget-`k` query on max degree `delta`.
pub fn recommended_w(delta: usize, k: usize, n: usize) -> usize {
    (2 * delta * k).min(n).max(1)
}

/// Adjacency access with probe accounting. Neighbour lists are frozen in
/// label order at construction.
#[derive(Debug, Clone)]
pub struct ProbeOracle {
    adjacency: Vec<Vec<usize>>,
    max_degree: usize,
    degree_probes: u64,
    neighbor_probes: u64,
}

impl ProbeOracle {
    pub fn new(g: &Graph) -> Self {
        let adjacency: Vec<Vec<usize>> = (0..g.n()).map(|u| g.sorted_neighbors(u)).collect();
        ProbeOracle {
            max_degree: g.max_degree(),
            adjacency,
            degree_probes: 0,
            neighbor_probes: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Maximum degree; reading it is not a probe.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&mut self, v: usize) -> usize {
        self.degree_probes += 1;
        self.adjacency[v].len()
    }

    pub fn neighbor(&mut self, v: usize, i: usize) -> usize {
        self.neighbor_probes += 1;
        self.adjacency[v][i]
    }

    pub fn degree_probes(&self) -> u64 {
        self.degree_probes
    }

    pub fn neighbor_probes(&self) -> u64 {
        self.neighbor_probes
    }

    pub fn probes(&self) -> u64 {
        self.degree_probes + self.neighbor_probes
    }

    pub fn reset(&mut self) {
        self.degree_probes = 0;
        self.neighbor_probes = 0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcaAnswer {
    pub cluster: usize,
    pub probes_used: u64,
    pub calls_used: usize,
    pub result: NodeResult,
}

struct ProbedScan<'a> {
    oracle: &'a mut ProbeOracle,
    f: &'a HashFamily,
    buf: Vec<RankKey>,
}

impl ProbedScan<'_> {
    fn key(&self, v: usize) -> RankKey {
        RankKey {
            rank: hash_rank(self.f, v),
            label: v,
        }
    }
}

impl ScanSource for ProbedScan<'_> {
    fn scan(&mut self, u: usize, limit: usize, out: &mut Vec<usize>) {
        let ku = self.key(u);
        let d = self.oracle.degree(u);
        self.buf.clear();
        for i in 0..d {
            let v = self.oracle.neighbor(u, i);
            let kv = self.key(v);
            if kv < ku {
                self.buf.push(kv);
            }
        }
        self.buf.sort_unstable();
        out.extend(self.buf.iter().take(limit).map(|key| key.label));
    }
}

/// Cluster of `v` under Pruned Pivot with hashed ranks, computed locally.
pub fn lca_query(o: &mut ProbeOracle, f: &HashFamily, k: usize, v: usize) -> Result<LcaAnswer> {
    check_budget(k)?;
    let n = o.n();
    if v >= n {
        return Err(Error::LabelOutOfRange { label: v, n });
    }
    let before = o.probes();
    let mut scan = ProbedScan {
        oracle: o,
        f,
        buf: Vec::new(),
    };
    let result = pruned_run(&mut scan, v, k, &mut Vec::new());
    Ok(LcaAnswer {
        cluster: result.cluster_id(v),
        probes_used: o.probes() - before,
        calls_used: result.calls_used,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::Clustering;
    use crate::pivot::pruned_pivot_all;
    use num_bigint::BigUint;

    fn big_mulmod(a: u128, b: u128) -> u128 {
        let p = BigUint::from(MERSENNE_127);
        let r = BigUint::from(a) * BigUint::from(b) % p;
        r.try_into().unwrap()
    }

    #[test]
    fn mulmod_matches_bigint() {
        let mut rng = Seed(3).rng();
        let edge = [
            0,
            1,
            2,
            MERSENNE_127 - 1,
            MERSENNE_127 - 2,
            1 << 64,
            (1 << 126) + 5,
            u64::MAX as u128,
        ];
        for &a in &edge {
            for &b in &edge {
                assert_eq!(mulmod_m127(a, b), big_mulmod(a, b), "{a} * {b}");
            }
        }
        for _ in 0..20_000 {
            let a = rng.gen_range(0..MERSENNE_127);
            let b = rng.gen_range(0..MERSENNE_127);
            assert_eq!(mulmod_m127(a, b), big_mulmod(a, b));
        }
    }

    #[test]
    fn toy_polynomial() {
        let f = HashFamily::from_coefficients(vec![3, 2], Modulus::Small(7)).unwrap();
        let h: Vec<u128> = (0..3).map(|v| hash_rank(&f, v)).collect();
        assert_eq!(h, vec![3, 5, 0]);
    }

    #[test]
    fn constant_family() {
        let f = HashFamily::from_seed(Seed(9), 1).unwrap();
        let r = f.ranking(6);
        assert!((0..6).all(|v| r.rank(v) == r.rank(0)));
        assert_eq!(r.order(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn seeded_family_is_deterministic_and_in_range() {
        let f = HashFamily::from_seed(Seed(1), 8).unwrap();
        assert_eq!(f, HashFamily::from_seed(Seed(1), 8).unwrap());
        assert_ne!(f, HashFamily::from_seed(Seed(2), 8).unwrap());
        for v in 0..1000 {
            assert!(hash_rank(&f, v) < MERSENNE_127);
        }
    }

    #[test]
    fn rejects_bad_families() {
        assert!(HashFamily::from_seed(Seed(1), 0).is_err());
        assert!(HashFamily::from_coefficients(vec![], Modulus::Mersenne127).is_err());
        assert!(HashFamily::from_coefficients(vec![7], Modulus::Small(7)).is_err());
    }

    #[test]
    fn pairwise_exhaustive_p5() {
        for x1 in 0..5u128 {
            for x2 in 0..5u128 {
                if x1 == x2 {
                    continue;
                }
                let mut seen = [false; 25];
                for s0 in 0..5 {
                    for s1 in 0..5 {
                        let f =
                            HashFamily::from_coefficients(vec![s0, s1], Modulus::Small(5)).unwrap();
                        let idx = (f.eval(x1) * 5 + f.eval(x2)) as usize;
                        assert!(!seen[idx]);
                        seen[idx] = true;
                    }
                }
            }
        }
    }

    #[test]
    fn recommended_w_values() {
        assert_eq!(recommended_w(3, 4, 1000), 24);
        assert_eq!(recommended_w(50, 10, 100), 100);
        assert_eq!(recommended_w(1, 1, 10), 2);
        assert_eq!(recommended_w(0, 3, 10), 1);
    }

    #[test]
    fn p3_probe_count() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        // Ranks 0, 1, 2.
        let f = HashFamily::from_coefficients(vec![0, 1], Modulus::Mersenne127).unwrap();
        let mut o = ProbeOracle::new(&g);
        let ans = lca_query(&mut o, &f, 3, 2).unwrap();
        assert_eq!(ans.cluster, 2);
        assert_eq!(o.neighbor_probes(), 4);
        assert_eq!(o.degree_probes(), 3);
        assert_eq!(ans.probes_used, 7);
        assert_eq!(ans.calls_used, 2);
    }

    #[test]
    fn isolated_node() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let f = HashFamily::from_seed(Seed(4), 3).unwrap();
        let mut o = ProbeOracle::new(&g);
        for k in 1..4 {
            let ans = lca_query(&mut o, &f, k, 2).unwrap();
            assert_eq!(ans.cluster, 2);
        }
        assert_eq!(o.neighbor_probes(), 0);
    }

    #[test]
    fn equal_ranks_cluster_cliques_exactly() {
        let mut edges = Vec::new();
        let mut start = 0;
        for size in [4, 1, 6, 3] {
            for u in start..start + size {
                for v in u + 1..start + size {
                    edges.push((u, v));
                }
            }
            start += size;
        }
        let g = Graph::from_edges(start, edges).unwrap();
        let f = HashFamily::from_coefficients(vec![12345], Modulus::Mersenne127).unwrap();
        let mut o = ProbeOracle::new(&g);
        let clusters: Vec<usize> = (0..g.n())
            .map(|v| lca_query(&mut o, &f, 2, v).unwrap().cluster)
            .collect();
        let c = Clustering::from_assignment(clusters);
        assert_eq!(c.cost(&g), 0);
    }

    #[test]
    fn answers_match_global_run() {
        let mut rng = Seed(8).rng();
        for trial in 0..20 {
            let n = 40;
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.12) {
                        g.insert_edge(u, v);
                    }
                }
            }
            let k = 1 + trial % 5;
            let f = HashFamily::from_seed(Seed(trial as u64), recommended_w(g.max_degree(), k, n))
                .unwrap();
            let global = pruned_pivot_all(&g, &f.ranking(n), k).unwrap();
            let mut o = ProbeOracle::new(&g);
            let delta = o.max_degree() as u64;
            for v in 0..n {
                let ans = lca_query(&mut o, &f, k, v).unwrap();
                assert_eq!(ans.cluster, global.cluster_of(v));
                assert_eq!(ans.result.is_unlucky(), global.is_unlucky(v));
                assert!(ans.calls_used <= k);
                assert!(ans.probes_used <= (ans.calls_used as u64 + 1) * (delta + 1));
            }
        }
    }
}
