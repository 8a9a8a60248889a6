//! Standard graph families and seeded random graphs.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSpec, GraphSpec, Sign, SignedGraph, SwitchingFunction};

fn build(n: usize, pairs: Vec<(usize, usize)>) -> SignedGraph {
    SignedGraph::unsigned(n, &pairs).expect("generated pairs are valid")
}

/// `K_n`, all edges positive.
pub fn complete(n: usize) -> SignedGraph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    build(n, pairs)
}

/// Star on `m` vertices with center 0.
pub fn star(m: usize) -> SignedGraph {
    build(m, (1..m).map(|v| (0, v)).collect())
}

pub fn path(n: usize) -> SignedGraph {
    build(n, (1..n).map(|v| (v - 1, v)).collect())
}

/// `C_n`; for `n < 3` this is the path.
pub fn cycle(n: usize) -> SignedGraph {
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
    if n >= 3 {
        pairs.push((0, n - 1));
    }
    build(n, pairs)
}

/// `Q_d` on `2^d` vertices.
pub fn hypercube(d: u32) -> SignedGraph {
    let n = 1usize << d;
    let mut pairs = Vec::new();
    for u in 0..n {
        for b in 0..d {
            let v = u ^ (1 << b);
            if u < v {
                pairs.push((u, v));
            }
        }
    }
    build(n, pairs)
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> SignedGraph {
    let mut pairs = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            pairs.push((u, v));
        }
    }
    build(a + b, pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    Positive,
    Negative,
    /// Independent fair signs.
    Random,
    /// All negative, then switched by a random switching function.
    Antibalanced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    /// Edge probability of the Erdős–Rényi part.
    pub prob: f64,
    pub seed: u64,
    pub signs: SignMode,
    /// Draw weights, measure and potential from `[0.5, 2]`, `[0.5, 2]`, `[0, 1]`.
    pub weighted: bool,
    /// Add a random spanning tree first.
    pub connected: bool,
}

impl RandomSpec {
    pub fn new(n: usize, prob: f64, seed: u64) -> Self {
        RandomSpec {
            n,
            prob,
            seed,
            signs: SignMode::Positive,
            weighted: false,
            connected: false,
        }
    }

    pub fn signs(mut self, signs: SignMode) -> Self {
        self.signs = signs;
        self
    }

    pub fn weighted(mut self, weighted: bool) -> Self {
        self.weighted = weighted;
        self
    }

    pub fn connected(mut self, connected: bool) -> Self {
        self.connected = connected;
        self
    }
}

/// Seeded `G(n, prob)` with the requested decorations.
pub fn random(spec: &RandomSpec) -> Result<SignedGraph> {
    if spec.n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&spec.prob) {
        return Err(Error::InvalidParameter("edge probability must lie in [0, 1]"));
    }
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut present = vec![false; n * n];
    if spec.connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            let j = rng.random_range(0..i);
            let (u, v) = (order[i].min(order[j]), order[i].max(order[j]));
            present[u * n + v] = true;
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(spec.prob) {
                present[u * n + v] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !present[u * n + v] {
                continue;
            }
            let mut e = EdgeSpec::new(u, v);
            if spec.weighted {
                e.w = Some(rng.random_range(0.5..2.0));
            }
            e.sigma = Some(match spec.signs {
                SignMode::Positive => 1,
                SignMode::Negative | SignMode::Antibalanced => -1,
                SignMode::Random => {
                    if rng.random_bool(0.5) {
                        1
                    } else {
                        -1
                    }
                }
            });
            edges.push(e);
        }
    }
    let mut gs = GraphSpec::new(n, edges);
    if spec.weighted {
        gs.mu = Some((0..n).map(|_| rng.random_range(0.5..2.0)).collect());
        gs.kappa = Some((0..n).map(|_| rng.random_range(0.0..1.0)).collect());
    }
    let g = gs.validate()?;
    if spec.signs == SignMode::Antibalanced {
        let tau = SwitchingFunction::new(
            (0..n)
                .map(|_| if rng.random_bool(0.5) { Sign::Positive } else { Sign::Negative })
                .collect(),
        );
        return g.switch(&tau);
    }
    Ok(g)
}

/// Changes every edge sign, keeping weights.
pub fn all_negative(g: &SignedGraph) -> SignedGraph {
    g.with_all_signs(Sign::Negative)
}

/// Edges of `g` as `(u, v)` pairs.
pub fn edge_pairs(g: &SignedGraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e: &Edge| (e.u, e.v)).collect()
}
