//! The order-p tensor of the p-Laplacian for even p.
//!
//! Entries are stored per index pattern: `{i^p}` carries `κ_i + Σ_{j∼i} w_ij`
//! and `{i^l, j^{p−l}}` for an edge `ij` carries `(−σ_ij)^l w_ij`. Every other
//! pattern is zero. Contracting with `f` in all but the first slot gives
//! back `Δ_p f` componentwise.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cutoff;
use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::num::{abs, max_abs, powi};
use crate::plap::PEigenPair;

/// An index multiset with at most two distinct indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Pattern {
    /// `{i^p}`
    Diagonal(usize),
    /// `{i^l, j^{p−l}}` with `i < j`, `1 ≤ l ≤ p − 1`.
    Mixed { i: usize, j: usize, l: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PLapTensor {
    p: u32,
    n: usize,
    entries: BTreeMap<Pattern, f64>,
    // (i, j, w, σ) per edge, i < j
    edges: Vec<(usize, usize, f64, f64)>,
    potential: Vec<f64>,
    measure: Vec<f64>,
}

/// Exponent as an even integer ≥ 2.
pub fn even_order(p: f64) -> Result<u32> {
    if !(p >= 2.0) || p > 1e6 || (p as u64) as f64 != p || (p as u64) % 2 != 0 {
        return Err(Error::InvalidTensorOrder { p });
    }
    Ok(p as u32)
}

/// Builds the tensor for an even order `p`.
pub fn build_tensor(g: &SignedGraph, p: f64) -> Result<PLapTensor> {
    let p = even_order(p)?;
    let n = g.n();
    let mut entries = BTreeMap::new();
    for i in 0..n {
        entries.insert(Pattern::Diagonal(i), g.potential()[i] + g.weighted_degree(i));
    }
    let mut edges = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let s = e.sign.value();
        edges.push((e.u, e.v, e.weight, s));
        for l in 1..p {
            let sign = if l % 2 == 0 { 1.0 } else { -s };
            entries.insert(Pattern::Mixed { i: e.u, j: e.v, l }, sign * e.weight);
        }
    }
    Ok(PLapTensor {
        p,
        n,
        entries,
        edges,
        potential: g.potential().to_vec(),
        measure: g.measure().to_vec(),
    })
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut c = 1.0;
    for t in 0..k {
        c = c * (n - t) as f64 / (t + 1) as f64;
    }
    c
}

impl PLapTensor {
    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn patterns(&self) -> impl Iterator<Item = (&Pattern, &f64)> {
        self.entries.iter()
    }

    pub fn pattern_entry(&self, pattern: &Pattern) -> f64 {
        self.entries.get(pattern).copied().unwrap_or(0.0)
    }

    /// The entry `a_{i_1 … i_p}` for an explicit index tuple.
    pub fn entry(&self, indices: &[usize]) -> Result<f64> {
        if indices.len() != self.p as usize {
            return Err(Error::LengthMismatch {
                what: "tensor index",
                expected: self.p as usize,
                found: indices.len(),
            });
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: i, n: self.n });
        }
        let a = indices[0];
        let b = indices.iter().copied().find(|&x| x != a);
        let pattern = match b {
            None => Pattern::Diagonal(a),
            Some(b) => {
                if indices.iter().any(|&x| x != a && x != b) {
                    return Ok(0.0);
                }
                let (i, j) = (a.min(b), a.max(b));
                let l = indices.iter().filter(|&&x| x == i).count() as u32;
                Pattern::Mixed { i, j, l }
            }
        };
        Ok(self.pattern_entry(&pattern))
    }

    fn check_len(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::LengthMismatch {
                what: "vertex function",
                expected: self.n,
                found: f.len(),
            });
        }
        Ok(())
    }

    /// `(A f^{p−1})_i = Σ_j w_ij (f(i) − σ_ij f(j))^{p−1} + κ_i f(i)^{p−1}`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_len(f)?;
        let e = self.p - 1;
        let mut out: Vec<f64> = (0..self.n).map(|i| self.potential[i] * powi(f[i], e)).collect();
        for &(i, j, w, s) in &self.edges {
            out[i] += w * powi(f[i] - s * f[j], e);
            out[j] += w * powi(f[j] - s * f[i], e);
        }
        Ok(out)
    }

    /// Same contraction expanded pattern by pattern with binomial multiplicities.
    pub fn apply_by_patterns(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_len(f)?;
        let p = self.p;
        let mut out = vec![0.0; self.n];
        for (pat, &a) in &self.entries {
            match *pat {
                Pattern::Diagonal(i) => out[i] += a * powi(f[i], p - 1),
                Pattern::Mixed { i, j, l } => {
                    // row i: i fills l − 1 of the remaining p − 1 slots
                    out[i] += binomial(p - 1, l - 1) * a * powi(f[i], l - 1) * powi(f[j], p - l);
                    out[j] += binomial(p - 1, p - l - 1) * a * powi(f[j], p - l - 1) * powi(f[i], l);
                }
            }
        }
        Ok(out)
    }

    /// `A f^{p−1}` for the tensor with rows divided by `μ_{i_1}`.
    pub fn apply_normalized(&self, f: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.apply(f)?;
        for (x, m) in out.iter_mut().zip(&self.measure) {
            *x /= m;
        }
        Ok(out)
    }
}

/// `A f^{p−1}` by the edgewise collapse.
pub fn apply_tensor(t: &PLapTensor, f: &crate::plap::VertexFunction) -> Result<crate::plap::VertexFunction> {
    Ok(t.apply(f.values())?.into())
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrespondenceReport {
    pub p: u32,
    pub lambda: f64,
    /// `max_i |(A f^{p−1})_i − λ f(i)^{p−1}|` over the largest magnitude involved (at least 1).
    pub defect: f64,
    /// `2^p · L − C` with `L` the best subgraph lower bound on `L_n`.
    pub lower_bound: f64,
    pub lower_bound_holds: bool,
}

/// Checks that a certified p-Laplacian eigenpair is a tensor eigenpair of the
/// normalized tensor, and compares its value with the subgraph lower bound.
pub fn eigen_correspondence(
    g: &SignedGraph,
    p: f64,
    pair: &PEigenPair,
    tol: f64,
    budget: usize,
) -> Result<CorrespondenceReport> {
    let order = even_order(p)?;
    if pair.p != p {
        return Err(Error::InvalidParameter("eigenpair exponent differs from tensor order"));
    }
    if !(pair.residual <= tol * pair.scale) {
        return Err(Error::UncertifiedPair {
            residual: pair.residual,
            tol,
        });
    }
    let t = build_tensor(g, p)?;
    let f = pair.f.values();
    let lhs = t.apply_normalized(f)?;
    let rhs: Vec<f64> = f.iter().map(|x| pair.lambda * powi(*x, order - 1)).collect();
    let scale = max_abs(&lhs).max(max_abs(&rhs)).max(1.0);
    let defect = lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| abs(a - b))
        .fold(0.0, f64::max)
        / scale;
    let (ln_lower, _) = cutoff::lower_bound_subgraphs(g, g.n(), budget)?;
    let c = g.structural_constants().c;
    let lower_bound = crate::num::powf(2.0, p) * ln_lower - c;
    let slack = 1e-9 * lower_bound.abs().max(1.0);
    Ok(CorrespondenceReport {
        p: order,
        lambda: pair.lambda,
        defect,
        lower_bound,
        lower_bound_holds: pair.lambda >= lower_bound - slack,
    })
}
