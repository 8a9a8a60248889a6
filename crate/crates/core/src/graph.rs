//! Signed graphs with edge weights, vertex measure and potential.
//!
//! A [`SignedGraph`] is immutable once validated. All transformations
//! (switching, negation, subgraphs) return new graphs. Edges are stored as
//! unordered pairs in canonical `u < v` order, sorted lexicographically, so
//! every iteration over a graph is deterministic.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Edge signature value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_i64(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    #[inline]
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    #[inline]
    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl core::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        self.times(rhs)
    }
}

/// A validated edge, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub sign: Sign,
}

impl Edge {
    /// Signed weight `σ_uv w_uv`, the adjacency matrix entry.
    #[inline]
    pub fn signed_weight(&self) -> f64 {
        self.sign.value() * self.weight
    }

    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Unvalidated edge description; omitted fields take their defaults
/// (`w = 1`, `sigma = +1`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct EdgeSpec {
    pub u: usize,
    pub v: usize,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub w: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub sigma: Option<i64>,
}

impl EdgeSpec {
    pub fn new(u: usize, v: usize) -> Self {
        EdgeSpec {
            u,
            v,
            w: None,
            sigma: None,
        }
    }

    pub fn weighted(u: usize, v: usize, w: f64) -> Self {
        EdgeSpec {
            u,
            v,
            w: Some(w),
            sigma: None,
        }
    }

    pub fn signed(u: usize, v: usize, sigma: i64) -> Self {
        EdgeSpec {
            u,
            v,
            w: None,
            sigma: Some(sigma),
        }
    }
}

/// Raw graph description, the in-memory mirror of the graph JSON schema.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct GraphSpec {
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(default))]
    pub edges: Vec<EdgeSpec>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub mu: Option<Vec<f64>>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub kappa: Option<Vec<f64>>,
}

impl GraphSpec {
    pub fn new(n: usize, edges: Vec<EdgeSpec>) -> Self {
        GraphSpec {
            n,
            edges,
            mu: None,
            kappa: None,
        }
    }

    pub fn validate(&self) -> Result<SignedGraph> {
        SignedGraph::validate(self)
    }
}

/// A ±1 label per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SwitchingFunction(Vec<Sign>);

impl SwitchingFunction {
    pub fn new(signs: Vec<Sign>) -> Self {
        SwitchingFunction(signs)
    }

    pub fn identity(n: usize) -> Self {
        SwitchingFunction(vec![Sign::Positive; n])
    }

    /// Builds from ±1 integers; any other value is rejected.
    pub fn from_i8(values: &[i8]) -> Result<Self> {
        values
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                Sign::from_i64(s as i64).ok_or(Error::InvalidSign {
                    edge: i,
                    value: s as i64,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(SwitchingFunction)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn to_i8(&self) -> Vec<i8> {
        self.0.iter().map(|s| s.as_i8()).collect()
    }

    /// Pointwise product with a vertex function.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        values
            .iter()
            .zip(&self.0)
            .map(|(x, s)| x * s.value())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BalanceKind {
    Balanced,
    Antibalanced,
    Both,
    Neither,
}

/// Balance classification with switching witnesses.
///
/// `balanced_witness` switches the graph to the all-positive signature,
/// `antibalanced_witness` to the all-negative one.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceClass {
    pub kind: BalanceKind,
    pub balanced_witness: Option<SwitchingFunction>,
    pub antibalanced_witness: Option<SwitchingFunction>,
}

impl BalanceClass {
    pub fn is_balanced(&self) -> bool {
        self.balanced_witness.is_some()
    }

    pub fn is_antibalanced(&self) -> bool {
        self.antibalanced_witness.is_some()
    }
}

/// The constants `D = max_i (2κ_i + Σ_j w_ij) / (2μ_i)` and `C = max_i |κ_i / μ_i|`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StructuralConstants {
    pub d: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
    measure: Vec<f64>,
    potential: Vec<f64>,
    // (neighbor, edge index), sorted by neighbor
    incidence: Vec<Vec<(usize, usize)>>,
}

impl SignedGraph {
    /// Checks every invariant of `spec` and fills in defaults.
    pub fn validate(spec: &GraphSpec) -> Result<SignedGraph> {
        let n = spec.n;
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (idx, e) in spec.edges.iter().enumerate() {
            if e.u >= n {
                return Err(Error::VertexOutOfRange { vertex: e.u, n });
            }
            if e.v >= n {
                return Err(Error::VertexOutOfRange { vertex: e.v, n });
            }
            if e.u == e.v {
                return Err(Error::SelfLoop {
                    edge: idx,
                    vertex: e.u,
                });
            }
            let weight = e.w.unwrap_or(1.0);
            if !weight.is_finite() {
                return Err(Error::NonFinite {
                    what: "edge weight",
                    index: idx,
                });
            }
            if weight <= 0.0 {
                return Err(Error::NonPositiveWeight { edge: idx, weight });
            }
            let sign = match e.sigma {
                None => Sign::Positive,
                Some(s) => Sign::from_i64(s).ok_or(Error::InvalidSign {
                    edge: idx,
                    value: s,
                })?,
            };
            let (u, v) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
            edges.push((idx, Edge { u, v, weight, sign }));
        }
        edges.sort_by(|a, b| (a.1.u, a.1.v, a.0).cmp(&(b.1.u, b.1.v, b.0)));
        for pair in edges.windows(2) {
            let (first, a) = pair[0];
            let (second, b) = pair[1];
            if a.u == b.u && a.v == b.v {
                return Err(Error::DuplicateEdge {
                    edge: first.max(second),
                    first: first.min(second),
                    u: a.u,
                    v: a.v,
                });
            }
        }
        let measure = match &spec.mu {
            None => vec![1.0; n],
            Some(mu) => {
                if mu.len() != n {
                    return Err(Error::LengthMismatch {
                        what: "mu",
                        expected: n,
                        found: mu.len(),
                    });
                }
                for (i, &m) in mu.iter().enumerate() {
                    if !m.is_finite() {
                        return Err(Error::NonFinite {
                            what: "vertex measure",
                            index: i,
                        });
                    }
                    if m <= 0.0 {
                        return Err(Error::NonPositiveMeasure {
                            vertex: i,
                            value: m,
                        });
                    }
                }
                mu.clone()
            }
        };
        let potential = match &spec.kappa {
            None => vec![0.0; n],
            Some(kappa) => {
                if kappa.len() != n {
                    return Err(Error::LengthMismatch {
                        what: "kappa",
                        expected: n,
                        found: kappa.len(),
                    });
                }
                if let Some(i) = kappa.iter().position(|k| !k.is_finite()) {
                    return Err(Error::NonFinite {
                        what: "potential",
                        index: i,
                    });
                }
                kappa.clone()
            }
        };
        let edges = edges.into_iter().map(|(_, e)| e).collect();
        Ok(Self::from_parts(n, edges, measure, potential))
    }

    // Invariants are the caller's responsibility; `edges` must be canonical and sorted.
    fn from_parts(n: usize, edges: Vec<Edge>, measure: Vec<f64>, potential: Vec<f64>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            incidence[e.u].push((e.v, idx));
            incidence[e.v].push((e.u, idx));
        }
        for list in &mut incidence {
            list.sort_unstable();
        }
        SignedGraph {
            n,
            edges,
            measure,
            potential,
            incidence,
        }
    }

    /// Unit weights and measures, zero potential, all-positive signature.
    pub fn unsigned(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(u, v)| EdgeSpec::new(u, v)).collect();
        SignedGraph::validate(&GraphSpec::new(n, edges))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// `(neighbor, edge index)` pairs incident to `i`, sorted by neighbor.
    pub fn incident(&self, i: usize) -> &[(usize, usize)] {
        &self.incidence[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.incidence[i].len()
    }

    /// `Σ_{j∼i} w_ij`.
    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.incidence[i]
            .iter()
            .map(|&(_, e)| self.edges[e].weight)
            .sum()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.incidence[u]
            .binary_search_by(|probe| probe.0.cmp(&v))
            .ok()
            .map(|pos| self.incidence[u][pos].1)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.degree(i) == 0).collect()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        (0..self.n).any(|i| self.degree(i) == 0)
    }

    pub fn has_zero_potential(&self) -> bool {
        self.potential.iter().all(|&k| k == 0.0)
    }

    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.weight).reduce(f64::min)
    }

    pub fn max_measure(&self) -> f64 {
        self.measure.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    u: e.u,
                    v: e.v,
                    w: Some(e.weight),
                    sigma: Some(e.sign.as_i8() as i64),
                })
                .collect(),
            mu: Some(self.measure.clone()),
            kappa: Some(self.potential.clone()),
        }
    }

    /// `σ_uv ↦ τ(u) σ_uv τ(v)`.
    pub fn switch(&self, tau: &SwitchingFunction) -> Result<SignedGraph> {
        if tau.len() != self.n {
            return Err(Error::LengthMismatch {
                what: "switching function",
                expected: self.n,
                found: tau.len(),
            });
        }
        Ok(self.map_signs(|e| tau.get(e.u) * e.sign * tau.get(e.v)))
    }

    pub fn negate(&self) -> SignedGraph {
        self.map_signs(|e| e.sign.flip())
    }

    /// Replaces the signature; `signs` is indexed like [`SignedGraph::edges`].
    pub fn with_signature(&self, signs: &[Sign]) -> Result<SignedGraph> {
        if signs.len() != self.edges.len() {
            return Err(Error::LengthMismatch {
                what: "signature",
                expected: self.edges.len(),
                found: signs.len(),
            });
        }
        let mut idx = 0;
        Ok(self.map_signs(|_| {
            let s = signs[idx];
            idx += 1;
            s
        }))
    }

    pub fn with_all_signs(&self, sign: Sign) -> SignedGraph {
        self.map_signs(|_| sign)
    }

    pub fn with_potential(&self, kappa: Vec<f64>) -> Result<SignedGraph> {
        let mut spec = self.to_spec();
        spec.kappa = Some(kappa);
        SignedGraph::validate(&spec)
    }

    pub fn with_measure(&self, mu: Vec<f64>) -> Result<SignedGraph> {
        let mut spec = self.to_spec();
        spec.mu = Some(mu);
        SignedGraph::validate(&spec)
    }

    pub fn without_potential(&self) -> SignedGraph {
        let mut g = self.clone();
        g.potential = vec![0.0; self.n];
        g
    }

    fn map_signs<F: FnMut(&Edge) -> Sign>(&self, mut f: F) -> SignedGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.sign = f(e);
        }
        g
    }

    /// Subgraph induced by `keep`, with vertices renumbered in ascending order.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<SignedGraph> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut map = vec![usize::MAX; self.n];
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        for (new, &old) in sorted.iter().enumerate() {
            map[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| map[e.u] != usize::MAX && map[e.v] != usize::MAX)
            .map(|e| Edge {
                u: map[e.u],
                v: map[e.v],
                ..*e
            })
            .collect();
        let measure = sorted.iter().map(|&i| self.measure[i]).collect();
        let potential = sorted.iter().map(|&i| self.potential[i]).collect();
        Ok(Self::from_parts(sorted.len(), edges, measure, potential))
    }

    /// Induced subgraph on the complement of `removed`.
    pub fn remove_vertices(&self, removed: &[usize]) -> Result<SignedGraph> {
        for &v in removed {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        let keep: Vec<usize> = (0..self.n).filter(|i| !removed.contains(i)).collect();
        self.induced_subgraph(&keep)
    }

    /// Same vertex set, only the listed edges (given as vertex pairs in either order).
    pub fn spanning_subgraph(&self, keep_edges: &[(usize, usize)]) -> Result<SignedGraph> {
        let mut keep = vec![false; self.edges.len()];
        for &(u, v) in keep_edges {
            let idx = self.edge_between(u, v).ok_or(Error::UnknownEdge { u, v })?;
            keep[idx] = true;
        }
        Ok(self.spanning_subgraph_by_mask(&keep))
    }

    /// Spanning subgraph keeping edge `i` iff `keep[i]`.
    pub fn spanning_subgraph_by_mask(&self, keep: &[bool]) -> SignedGraph {
        let edges = self
            .edges
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        Self::from_parts(self.n, edges, self.measure.clone(), self.potential.clone())
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &(y, _) in &self.incidence[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// A switching function making every edge sign equal to `target`, if one
    /// exists. Found by BFS sign propagation per component.
    pub fn switching_to(&self, target: Sign) -> Option<SwitchingFunction> {
        let mut tau: Vec<Option<Sign>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if tau[start].is_some() {
                continue;
            }
            tau[start] = Some(Sign::Positive);
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                let tx = tau[x].expect("assigned before enqueue");
                for &(y, e) in &self.incidence[x] {
                    // τ(x) σ τ(y) = target  ⇔  τ(y) = τ(x) σ target
                    let want = tx * self.edges[e].sign * target;
                    match tau[y] {
                        None => {
                            tau[y] = Some(want);
                            queue.push_back(y);
                        }
                        Some(t) if t != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(SwitchingFunction(
            tau.into_iter().map(|t| t.expect("all visited")).collect(),
        ))
    }

    pub fn classify_balance(&self) -> BalanceClass {
        let balanced_witness = self.switching_to(Sign::Positive);
        let antibalanced_witness = self.switching_to(Sign::Negative);
        let kind = match (balanced_witness.is_some(), antibalanced_witness.is_some()) {
            (true, true) => BalanceKind::Both,
            (true, false) => BalanceKind::Balanced,
            (false, true) => BalanceKind::Antibalanced,
            (false, false) => BalanceKind::Neither,
        };
        BalanceClass {
            kind,
            balanced_witness,
            antibalanced_witness,
        }
    }

    pub fn structural_constants(&self) -> StructuralConstants {
        let mut d = f64::MIN;
        let mut c: f64 = 0.0;
        for i in 0..self.n {
            let di = (2.0 * self.potential[i] + self.weighted_degree(i)) / (2.0 * self.measure[i]);
            d = d.max(di);
            c = c.max(crate::num::abs(self.potential[i] / self.measure[i]));
        }
        StructuralConstants { d, c }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &SignedGraph) -> SignedGraph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            u: e.u + shift,
            v: e.v + shift,
            ..*e
        }));
        let mut measure = self.measure.clone();
        measure.extend_from_slice(&other.measure);
        let mut potential = self.potential.clone();
        potential.extend_from_slice(&other.potential);
        Self::from_parts(self.n + other.n, edges, measure, potential)
    }
}
