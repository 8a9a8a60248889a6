//! Cut-off adjacency eigenvalues `L_k = lim_{p→∞} 2^{-p} λ_k^{(p)}`.
//!
//! `L_n` is computed exactly by enumerating sign vectors: for `s ∈ {±1}^n`
//! let `N(s)` keep the edges with `σ_ij s_i s_j = −1` at weight `w_ij / μ_i`;
//! then `L_n = ½ max_s λ_max(N(s))`. Intermediate indices are bracketed
//! between subgraph spectra from below and vertex-subset spectra from above.
//! All values ignore the potential.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::linalg::{self, DenseSymMatrix};
use crate::num::{abs, abs_pow, powf, sqrt};
use crate::plap::{self, Certificate, SolverConfig, VertexFunction};

/// Lower and upper bounds closer than this are declared equal.
pub const EXACT_TOL: f64 = 1e-9;
pub const DEFAULT_ENUMERATION_CAP: usize = 24;
pub const DEFAULT_BUDGET: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum LowerCertificate {
    /// `½ λ_k` of the negated full graph.
    FullGraph,
    /// `½ λ_k` of the negated spanning subgraph on these edges.
    SpanningSubgraph { edges: Vec<(usize, usize)> },
    /// `½ λ_max(N(s))`.
    SignVector { signs: Vec<i8> },
    /// `L_k ≥ 0`.
    Clamp,
    /// `L_k ≥ L_from`, `from < k`.
    Monotone { from: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum UpperCertificate {
    /// `½ λ_max` of `|A|` restricted to these vertices.
    VertexSubset { vertices: Vec<usize> },
    /// `2^{-p} λ` for a feasible value `λ ≥ λ_1^{(p)}`.
    PGridPoint { p: f64, lambda: f64 },
    /// Exact enumeration, maximizing sign vector attached.
    Exact { signs: Vec<i8> },
    /// `L_k ≤ L_from`, `from > k`.
    Monotone { from: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CutoffBracket {
    /// 1-based index.
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
    pub lower_certificate: LowerCertificate,
    pub upper_certificate: UpperCertificate,
    /// `upper − lower ≤ EXACT_TOL`.
    pub exact: bool,
}

impl CutoffBracket {
    fn new(
        k: usize,
        lower: (f64, LowerCertificate),
        upper: (f64, UpperCertificate),
    ) -> Result<Self> {
        let (lo, lc) = lower;
        let (up, uc) = upper;
        if lo > up + EXACT_TOL {
            return Err(Error::InconsistentBracket {
                k,
                lower: lo,
                upper: up,
            });
        }
        Ok(CutoffBracket {
            k,
            lower: lo,
            upper: up.max(lo),
            exact: up - lo <= EXACT_TOL,
            lower_certificate: lc,
            upper_certificate: uc,
        })
    }

    /// Midpoint of the bracket; the value itself when exact.
    pub fn value(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BracketOptions {
    /// Largest enumeration (sign vectors, edge subsets, vertex subsets) run exhaustively.
    pub budget: usize,
    /// Largest component size for exact `L_n`.
    pub enumeration_cap: usize,
    pub seed: u64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            budget: DEFAULT_BUDGET,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            seed: 0,
        }
    }
}

fn check_index(g: &SignedGraph, k: usize) -> Result<()> {
    if k == 0 || k > g.n() {
        return Err(Error::IndexOutOfRange { k, n: g.n() });
    }
    Ok(())
}

/// `Σ_E w_ij (max{−f(i) σ_ij f(j), 0})^{q/2} / Σ_i μ_i |f(i)|^q`.
pub fn r_q_infty(g: &SignedGraph, q: f64, f: &VertexFunction) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::InvalidExponent { p: q });
    }
    let f = f.values();
    if f.len() != g.n() {
        return Err(Error::LengthMismatch {
            what: "vertex function",
            expected: g.n(),
            found: f.len(),
        });
    }
    let den: f64 = f
        .iter()
        .zip(g.measure())
        .map(|(x, m)| m * abs_pow(*x, q))
        .sum();
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let num: f64 = g
        .edges()
        .iter()
        .map(|e| {
            let t = -f[e.u] * e.sign.value() * f[e.v];
            if t > 0.0 {
                e.weight * abs_pow(t, q / 2.0)
            } else {
                0.0
            }
        })
        .sum();
    Ok(num / den)
}

// λ_max of N(s) on one component, in the similarity form.
fn sign_vector_value(g: &SignedGraph, comp: &[usize], local: &[usize], s: &[f64]) -> f64 {
    let m = comp.len();
    let mut mat = DenseSymMatrix::zeros(m);
    for (a, &i) in comp.iter().enumerate() {
        for &(j, e) in g.incident(i) {
            let b = local[j];
            if b <= a {
                continue;
            }
            let edge = &g.edges()[e];
            if edge.sign.value() * s[a] * s[b] < 0.0 {
                mat.set(a, b, edge.weight / sqrt(g.measure()[i] * g.measure()[j]));
            }
        }
    }
    mat.lambda_max()
}

fn component_maps(g: &SignedGraph) -> (Vec<Vec<usize>>, Vec<usize>) {
    let comps = g.components();
    let mut local = vec![0; g.n()];
    for c in &comps {
        for (a, &i) in c.iter().enumerate() {
            local[i] = a;
        }
    }
    (comps, local)
}

fn bits_to_signs(bits: u64, m: usize) -> Vec<f64> {
    // the first vertex of the component stays +1
    (0..m)
        .map(|a| if a > 0 && bits >> (a - 1) & 1 == 1 { -1.0 } else { 1.0 })
        .collect()
}

/// Exact `L_n` with the default cap on component size.
pub fn exact_ln(g: &SignedGraph) -> Result<CutoffBracket> {
    exact_ln_with_cap(g, DEFAULT_ENUMERATION_CAP)
}

/// Exact `L_n` by enumerating `2^{|C|−1}` sign vectors per component `C`.
pub fn exact_ln_with_cap(g: &SignedGraph, cap: usize) -> Result<CutoffBracket> {
    let (comps, local) = component_maps(g);
    if let Some(big) = comps.iter().map(|c| c.len()).max().filter(|&m| m > cap) {
        return Err(Error::SizeCap { n: big, cap });
    }
    let mut signs = vec![1i8; g.n()];
    let mut best: f64 = 0.0;
    for c in &comps {
        let m = c.len();
        let mut comp_best = (f64::NEG_INFINITY, 0u64);
        for bits in 0..(1u64 << (m - 1)) {
            let v = sign_vector_value(g, c, &local, &bits_to_signs(bits, m));
            if v > comp_best.0 {
                comp_best = (v, bits);
            }
        }
        for (a, x) in bits_to_signs(comp_best.1, m).into_iter().enumerate() {
            signs[c[a]] = x as i8;
        }
        best = best.max(comp_best.0);
    }
    let value = 0.5 * best.max(0.0);
    CutoffBracket::new(
        g.n(),
        (value, LowerCertificate::SignVector { signs: signs.clone() }),
        (value, UpperCertificate::Exact { signs }),
    )
}

/// Lower bound on `L_n` from seeded random sign vectors refined by single
/// flips; used when components exceed the enumeration cap.
pub fn sampled_ln(g: &SignedGraph, samples: usize, seed: u64) -> (f64, Vec<i8>) {
    let (comps, local) = component_maps(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut signs = vec![1i8; g.n()];
    let mut best: f64 = 0.0;
    for c in &comps {
        let m = c.len();
        let mut comp_best = (f64::NEG_INFINITY, vec![1.0; m]);
        for _ in 0..samples.max(1) {
            let mut s: Vec<f64> = (0..m)
                .map(|a| if a == 0 || rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let mut v = sign_vector_value(g, c, &local, &s);
            loop {
                let mut improved = false;
                for a in 1..m {
                    s[a] = -s[a];
                    let t = sign_vector_value(g, c, &local, &s);
                    if t > v + 1e-15 {
                        v = t;
                        improved = true;
                    } else {
                        s[a] = -s[a];
                    }
                }
                if !improved {
                    break;
                }
            }
            if v > comp_best.0 {
                comp_best = (v, s);
            }
        }
        for (a, x) in comp_best.1.iter().enumerate() {
            signs[c[a]] = *x as i8;
        }
        best = best.max(comp_best.0);
    }
    (0.5 * best.max(0.0), signs)
}

/// `max(0, ½ λ_k(A^μ_{−Γ}))`.
pub fn lower_bound_full(g: &SignedGraph, k: usize) -> Result<f64> {
    check_index(g, k)?;
    let vals = linalg::normalized_eigenvalues(&g.without_potential().negate());
    let v = 0.5 * vals[k - 1];
    Ok(if v > 1e-12 { v } else { 0.0 })
}

// Spectra of A^μ_{−Γ0} over the candidate pool of spanning subgraphs.
fn negated_pool(g: &SignedGraph, budget: usize) -> Vec<(Vec<f64>, LowerCertificate)> {
    let g = g.without_potential();
    let n = g.n();
    let mut pool = vec![(
        linalg::normalized_eigenvalues(&g.negate()),
        LowerCertificate::FullGraph,
    )];
    let comps = g.components();
    let free = n - comps.len();
    if free < 63 && (1u64 << free) <= budget as u64 {
        let mut fixed = vec![false; n];
        for c in &comps {
            fixed[c[0]] = true;
        }
        let free_vertices: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
        for bits in 0..(1u64 << free) {
            let mut s = vec![1.0; n];
            for (b, &i) in free_vertices.iter().enumerate() {
                if bits >> b & 1 == 1 {
                    s[i] = -1.0;
                }
            }
            let keep: Vec<bool> = g
                .edges()
                .iter()
                .map(|e| e.sign.value() * s[e.u] * s[e.v] < 0.0)
                .collect();
            let sub = g.spanning_subgraph_by_mask(&keep);
            pool.push((
                linalg::normalized_eigenvalues(&sub.negate()),
                LowerCertificate::SignVector {
                    signs: s.iter().map(|&x| x as i8).collect(),
                },
            ));
        }
    }
    let m = g.edge_count();
    if m < 63 && (1u64 << m) <= budget as u64 {
        for bits in 0..(1u64 << m) {
            let keep: Vec<bool> = (0..m).map(|e| bits >> e & 1 == 1).collect();
            let sub = g.spanning_subgraph_by_mask(&keep);
            let edges = sub.edges().iter().map(|e| (e.u, e.v)).collect();
            pool.push((
                linalg::normalized_eigenvalues(&sub.negate()),
                LowerCertificate::SpanningSubgraph { edges },
            ));
        }
    }
    pool
}

fn best_lower(pool: &[(Vec<f64>, LowerCertificate)], k: usize) -> (f64, LowerCertificate) {
    let mut best = (0.0, LowerCertificate::Clamp);
    for (vals, cert) in pool {
        let v = 0.5 * vals[k - 1];
        // round-off around a zero eigenvalue
        if v > 1e-12 && v > best.0 {
            best = (v, cert.clone());
        }
    }
    best
}

/// Best `½ λ_k(A^μ_{−Γ0})` over spanning subgraphs `Γ0` in the candidate pool.
pub fn lower_bound_subgraphs(
    g: &SignedGraph,
    k: usize,
    budget: usize,
) -> Result<(f64, LowerCertificate)> {
    check_index(g, k)?;
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1"));
    }
    Ok(best_lower(&negated_pool(g, budget), k))
}

/// Subgraph lower bounds for every `k = 1..n`, made non-decreasing in `k`.
pub fn lower_bounds_all(g: &SignedGraph, budget: usize) -> Result<Vec<(f64, LowerCertificate)>> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1"));
    }
    let pool = negated_pool(g, budget);
    let mut out: Vec<(f64, LowerCertificate)> = (1..=g.n()).map(|k| best_lower(&pool, k)).collect();
    for k in 1..out.len() {
        if out[k - 1].0 > out[k].0 {
            out[k] = (out[k - 1].0, LowerCertificate::Monotone { from: k });
        }
    }
    Ok(out)
}

struct SubsetEval {
    sim: DenseSymMatrix,
}

impl SubsetEval {
    fn new(g: &SignedGraph) -> Self {
        SubsetEval {
            sim: linalg::abs_adjacency(g).measure_similarity(g.measure()),
        }
    }

    fn value(&self, s: &[usize]) -> f64 {
        let sub = self.sim.principal(s);
        if (0..s.len()).all(|a| (0..a).all(|b| sub.get(a, b) == 0.0)) {
            return 0.0;
        }
        0.5 * sub.lambda_max()
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// Swap one member for one non-member while that lowers the value.
fn local_search(eval: &SubsetEval, n: usize, mut s: Vec<usize>, mut v: f64, evals: &mut usize) -> (f64, Vec<usize>) {
    loop {
        let mut improved = false;
        'outer: for a in 0..s.len() {
            for x in 0..n {
                if *evals == 0 {
                    break 'outer;
                }
                if s.contains(&x) {
                    continue;
                }
                let old = s[a];
                s[a] = x;
                *evals -= 1;
                let t = eval.value(&s);
                if t < v - 1e-15 {
                    v = t;
                    improved = true;
                } else {
                    s[a] = old;
                }
            }
        }
        if !improved || v == 0.0 {
            break;
        }
    }
    s.sort_unstable();
    (v, s)
}

fn subset_bound(
    g: &SignedGraph,
    eval: &SubsetEval,
    mis: &[usize],
    k: usize,
    budget: usize,
    seed: u64,
) -> (f64, UpperCertificate) {
    let n = g.n();
    if k <= mis.len() {
        return (0.0, UpperCertificate::VertexSubset { vertices: mis[..k].to_vec() });
    }
    if binomial(n, k) <= budget as u128 {
        let mut c: Vec<usize> = (0..k).collect();
        let mut best = (f64::INFINITY, c.clone());
        loop {
            let v = eval.value(&c);
            if v < best.0 {
                best = (v, c.clone());
            }
            if !next_combination(&mut c, n) {
                break;
            }
        }
        return (best.0, UpperCertificate::VertexSubset { vertices: best.1 });
    }
    let mut evals = budget;
    // greedy growth from the independent set
    let mut s = mis.to_vec();
    while s.len() < k {
        let mut pick = (f64::INFINITY, 0);
        for x in 0..n {
            if s.contains(&x) {
                continue;
            }
            s.push(x);
            let v = eval.value(&s);
            s.pop();
            evals = evals.saturating_sub(1);
            if v < pick.0 {
                pick = (v, x);
            }
        }
        s.push(pick.1);
    }
    let v = eval.value(&s);
    let mut best = local_search(eval, n, s, v, &mut evals);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k as u64);
    for _ in 0..8 {
        if evals == 0 {
            break;
        }
        let mut all: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = rng.random_range(i..n);
            all.swap(i, j);
        }
        let s = all[..k].to_vec();
        let v = eval.value(&s);
        let cand = local_search(eval, n, s, v, &mut evals);
        if cand.0 < best.0 {
            best = cand;
        }
    }
    (best.0, UpperCertificate::VertexSubset { vertices: best.1 })
}

/// `min_{|S| = k} ½ λ_max(D_S^{-1} |A|_S)`, exhaustive when `C(n, k) ≤ budget`.
pub fn upper_bound_subsets(
    g: &SignedGraph,
    k: usize,
    budget: usize,
) -> Result<(f64, UpperCertificate)> {
    check_index(g, k)?;
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1"));
    }
    let mis = combinatorics::max_independent_set(g).witness;
    Ok(subset_bound(g, &SubsetEval::new(g), &mis, k, budget, 0))
}

fn upper_bounds_with_certs(g: &SignedGraph, opts: &BracketOptions) -> Result<Vec<(f64, UpperCertificate)>> {
    if opts.budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1"));
    }
    let n = g.n();
    let eval = SubsetEval::new(g);
    let mis = combinatorics::max_independent_set(g).witness;
    let mut out: Vec<(f64, UpperCertificate)> = (1..=n)
        .map(|k| subset_bound(g, &eval, &mis, k, opts.budget, opts.seed))
        .collect();
    if let Ok(ln) = exact_ln_with_cap(g, opts.enumeration_cap) {
        out[n - 1] = (ln.upper, ln.upper_certificate);
    }
    for k in (0..n.saturating_sub(1)).rev() {
        if out[k + 1].0 < out[k].0 {
            out[k] = (out[k + 1].0, UpperCertificate::Monotone { from: k + 2 });
        }
    }
    Ok(out)
}

/// Upper bounds for every `k = 1..n`, made non-decreasing in `k`.
pub fn upper_bounds_all(g: &SignedGraph, opts: &BracketOptions) -> Result<Vec<f64>> {
    Ok(upper_bounds_with_certs(g, opts)?.into_iter().map(|x| x.0).collect())
}

/// `L_1 ≤ 2^{-p} λ̂` for any `λ̂ ≥ λ_1^{(p)}`.
pub fn upper_bound_from_p(g: &SignedGraph, k: usize, p: f64, lambda_hat: f64) -> Result<f64> {
    if k != 1 {
        return Err(Error::UnsupportedIndex { k });
    }
    if !g.has_zero_potential() {
        return Err(Error::InvalidParameter("p-grid upper bound requires zero potential"));
    }
    plap::check_exponent(p)?;
    if !lambda_hat.is_finite() {
        return Err(Error::NonFinite {
            what: "eigenvalue",
            index: 0,
        });
    }
    Ok(powf(2.0, -p) * lambda_hat)
}

/// Bracket for a single index.
pub fn bracket(g: &SignedGraph, k: usize, opts: &BracketOptions) -> Result<CutoffBracket> {
    check_index(g, k)?;
    let all = brackets_all(g, opts)?;
    Ok(all[k - 1].clone())
}

/// Brackets for `k = 1..n`. Lower bounds are carried upward and upper bounds
/// downward, since `L_k` is non-decreasing in `k`.
pub fn brackets_all(g: &SignedGraph, opts: &BracketOptions) -> Result<Vec<CutoffBracket>> {
    let g = g.without_potential();
    let mut lowers = lower_bounds_all(&g, opts.budget)?;
    let n = g.n();
    if exact_ln_with_cap(&g, opts.enumeration_cap).is_err() {
        let (v, signs) = sampled_ln(&g, opts.budget.min(256), opts.seed);
        if v > lowers[n - 1].0 {
            lowers[n - 1] = (v, LowerCertificate::SignVector { signs });
        }
    }
    let uppers = upper_bounds_with_certs(&g, opts)?;
    lowers
        .into_iter()
        .zip(uppers)
        .enumerate()
        .map(|(i, (lo, up))| CutoffBracket::new(i + 1, lo, up))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InterlacingEntry {
    /// Which comparison: `"lower_k(G) <= upper_k(G')"` style labels.
    pub relation: &'static str,
    pub k: usize,
    pub left: f64,
    pub right: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InterlacingReport {
    pub removed: Vec<usize>,
    pub ln_full: f64,
    pub ln_removed: f64,
    pub entries: Vec<InterlacingEntry>,
}

impl InterlacingReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Checks `L_k(Γ) ≤ L_k(Γ′) ≤ L_{k+m}(Γ)` where it is decidable, for `Γ′` the
/// graph with `m` vertices removed.
pub fn interlacing_check(
    g: &SignedGraph,
    removed: &[usize],
    opts: &BracketOptions,
) -> Result<InterlacingReport> {
    let n = g.n();
    let m = removed.len();
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter("must remove between 1 and n-1 vertices"));
    }
    let mut seen = vec![false; n];
    for &v in removed {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if seen[v] {
            return Err(Error::InvalidParameter("removed vertices must be distinct"));
        }
        seen[v] = true;
    }
    let sub = g.remove_vertices(removed)?;
    let full = brackets_all(g, opts)?;
    let part = brackets_all(&sub, opts)?;
    let ln_full = exact_ln_with_cap(g, opts.enumeration_cap)?.upper;
    let ln_removed = exact_ln_with_cap(&sub, opts.enumeration_cap)?.upper;
    let mut entries = vec![InterlacingEntry {
        relation: "ln(removed) <= ln(full)",
        k: n - m,
        left: ln_removed,
        right: ln_full,
        passed: ln_removed <= ln_full + EXACT_TOL,
    }];
    for k in 1..=n - m {
        let (a, b) = (full[k - 1].lower, part[k - 1].upper);
        entries.push(InterlacingEntry {
            relation: "lower_k(full) <= upper_k(removed)",
            k,
            left: a,
            right: b,
            passed: a <= b + EXACT_TOL,
        });
        let (a, b) = (part[k - 1].lower, full[k + m - 1].upper);
        entries.push(InterlacingEntry {
            relation: "lower_k(removed) <= upper_(k+m)(full)",
            k,
            left: a,
            right: b,
            passed: a <= b + EXACT_TOL,
        });
    }
    Ok(InterlacingReport {
        removed: removed.to_vec(),
        ln_full,
        ln_removed,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitScanResult {
    pub grid: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub certified: Vec<bool>,
    /// `|f^{(p)}|^{p/2}` normalized in `ℓ²(μ)`, one per grid point.
    pub functions: Vec<Vec<f64>>,
    /// Aligned `ℓ²(μ)` distance to the Perron vector.
    pub distances: Vec<f64>,
    /// Perron vector of `A^μ_{−Γ}`, unit in `ℓ²(μ)`.
    pub perron: Vec<f64>,
    /// The eigenfunction at the last grid point.
    pub final_eigenvector: Vec<f64>,
}

impl LimitScanResult {
    /// Whether the distances never increase by more than `slack`.
    pub fn non_increasing(&self, slack: f64) -> bool {
        self.distances.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

fn mu_distance(a: &[f64], b: &[f64], mu: &[f64]) -> f64 {
    let d = |s: f64| {
        sqrt(
            a.iter()
                .zip(b)
                .zip(mu)
                .map(|((x, y), m)| m * (x - s * y) * (x - s * y))
                .sum::<f64>(),
        )
    };
    d(1.0).min(d(-1.0))
}

/// Tracks `|f^{(p)}|^{p/2}` for the largest eigenfunctions along a p-grid,
/// after switching `g` to the all-negative signature.
pub fn limit_scan(g: &SignedGraph, grid: &[f64], cfg: &SolverConfig) -> Result<LimitScanResult> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let tau = g
        .classify_balance()
        .antibalanced_witness
        .ok_or(Error::NotAntibalanced)?;
    let h = g.switch(&tau)?.without_potential();
    let mu = h.measure().to_vec();
    let dec = linalg::measure_spectrum(&linalg::abs_adjacency(&h), &mu);
    let perron: Vec<f64> = dec.largest().1.iter().map(|x| abs(*x)).collect();
    let mut out = LimitScanResult {
        grid: grid.to_vec(),
        lambdas: Vec::new(),
        certified: Vec::new(),
        functions: Vec::new(),
        distances: Vec::new(),
        perron: perron.clone(),
        final_eigenvector: Vec::new(),
    };
    for &p in grid {
        let pair = plap::solve_largest(&h, p, cfg)?;
        let mut u: Vec<f64> = pair.f.values().iter().map(|x| abs_pow(*x, p / 2.0)).collect();
        let norm = sqrt(u.iter().zip(&mu).map(|(x, m)| m * x * x).sum::<f64>());
        for x in &mut u {
            *x /= norm;
        }
        out.distances.push(mu_distance(&u, &perron, &mu));
        out.lambdas.push(pair.lambda);
        out.certified.push(pair.certificate == Certificate::PerronCertified);
        out.functions.push(u);
        out.final_eigenvector = pair.f.into_values();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use core::f64::consts::SQRT_2;

    fn vf(v: &[f64]) -> VertexFunction {
        VertexFunction::new(v.to_vec())
    }

    #[test]
    fn r_q_infty_examples() {
        let k2 = generate::complete(2);
        assert_eq!(r_q_infty(&k2, 2.0, &vf(&[1.0, -1.0])).unwrap(), 0.5);
        assert_eq!(r_q_infty(&k2, 2.0, &vf(&[1.0, 1.0])).unwrap(), 0.0);
        let p3 = generate::path(3);
        assert_eq!(r_q_infty(&p3, 3.0, &vf(&[1.0, 0.0, -2.0])).unwrap(), 0.0);
        assert_eq!(r_q_infty(&k2, 2.0, &vf(&[0.0, 0.0])), Err(Error::ZeroFunction));
        assert!(r_q_infty(&k2, 0.5, &vf(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn exact_ln_examples() {
        assert!((exact_ln(&generate::complete(4)).unwrap().upper - 1.0).abs() < 1e-12);
        assert!((exact_ln(&generate::complete(5)).unwrap().upper - sqrt(24.0) / 4.0).abs() < 1e-12);
        assert!((exact_ln(&generate::path(3)).unwrap().upper - SQRT_2 / 2.0).abs() < 1e-12);
        assert_eq!(exact_ln(&SignedGraph::unsigned(4, &[]).unwrap()).unwrap().upper, 0.0);
        assert!((exact_ln(&generate::cycle(4)).unwrap().upper - 1.0).abs() < 1e-12);
        let b = exact_ln(&generate::complete(3)).unwrap();
        assert!(b.exact);
        assert!(matches!(b.upper_certificate, UpperCertificate::Exact { .. }));
        assert!(matches!(
            exact_ln_with_cap(&generate::complete(5), 4),
            Err(Error::SizeCap { n: 5, cap: 4 })
        ));
    }

    #[test]
    fn sampled_ln_is_a_lower_bound() {
        for n in 3..8 {
            let g = generate::complete(n);
            let exact = exact_ln(&g).unwrap().upper;
            let (v, _) = sampled_ln(&g, 16, 1);
            assert!(v <= exact + 1e-12);
            assert!(v > 0.0);
        }
    }

    #[test]
    fn lower_bound_examples() {
        let k3 = generate::complete(3);
        assert!((lower_bound_full(&k3, 2).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(lower_bound_full(&k3, 1).unwrap(), 0.0);
        assert!((lower_bound_full(&k3.negate(), 3).unwrap() - 1.0).abs() < 1e-12);
        assert!(lower_bound_full(&k3, 4).is_err());

        let p3 = generate::path(3);
        assert_eq!(lower_bound_subgraphs(&p3, 2, 64).unwrap().0, 0.0);
        assert!((lower_bound_subgraphs(&k3, 2, 64).unwrap().0 - 0.5).abs() < 1e-12);
        let g = generate::cycle(5);
        let (v, _) = lower_bound_subgraphs(&g, 5, DEFAULT_BUDGET).unwrap();
        assert!((v - exact_ln(&g).unwrap().upper).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_examples() {
        let k3 = generate::complete(3);
        assert!((upper_bound_subsets(&k3, 2, 64).unwrap().0 - 0.5).abs() < 1e-12);
        assert!((upper_bound_subsets(&generate::complete(2), 2, 64).unwrap().0 - 0.5).abs() < 1e-12);
        let c6 = generate::cycle(6);
        for k in 1..=3 {
            assert_eq!(upper_bound_subsets(&c6, k, 64).unwrap().0, 0.0);
        }
        assert!(upper_bound_subsets(&c6, 4, 64).unwrap().0 > 0.0);
        // greedy path agrees with the exhaustive one on a small case
        let g = generate::hypercube(3);
        let ex = upper_bound_subsets(&g, 6, 1 << 10).unwrap().0;
        let gr = upper_bound_subsets(&g, 6, 4).unwrap().0;
        assert!(gr >= ex - 1e-12);
    }

    #[test]
    fn upper_from_p_examples() {
        let tri = generate::complete(3);
        assert_eq!(upper_bound_from_p(&tri, 1, 2.0, 0.0).unwrap(), 0.0);
        assert_eq!(upper_bound_from_p(&tri, 1, 8.0, 256.0).unwrap(), 1.0);
        assert_eq!(upper_bound_from_p(&tri, 2, 8.0, 1.0), Err(Error::UnsupportedIndex { k: 2 }));
        let pair = plap::solve_smallest(&tri.negate(), 8.0, &SolverConfig::default()).unwrap();
        let u = upper_bound_from_p(&tri.negate(), 1, 8.0, pair.lambda).unwrap();
        assert!(u >= 0.0 && u <= powf(2.0, -8.0) * pair.lambda + 1e-15);
    }

    fn values(g: &SignedGraph) -> Vec<(f64, f64)> {
        brackets_all(g, &BracketOptions::default())
            .unwrap()
            .iter()
            .map(|b| (b.lower, b.upper))
            .collect()
    }

    fn assert_triple(g: &SignedGraph, expected: [f64; 3]) {
        let got = values(g);
        for (k, (lo, up)) in got.iter().enumerate() {
            assert!((lo - expected[k]).abs() < 1e-9 && (up - expected[k]).abs() < 1e-9, "{got:?}");
        }
    }

    #[test]
    fn small_graph_table() {
        let h = SQRT_2 / 2.0;
        assert_triple(&SignedGraph::unsigned(3, &[]).unwrap(), [0.0, 0.0, 0.0]);
        assert_triple(&SignedGraph::unsigned(3, &[(0, 1)]).unwrap(), [0.0, 0.0, 0.5]);
        assert_triple(&generate::path(3), [0.0, 0.0, h]);
        assert_triple(&generate::complete(3), [0.0, 0.5, h]);
        assert!((exact_ln(&generate::complete(3).negate()).unwrap().upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn brackets_are_monotone() {
        let g = generate::random(
            &generate::RandomSpec::new(7, 0.5, 3).signs(generate::SignMode::Random),
        )
        .unwrap();
        let b = brackets_all(&g, &BracketOptions::default()).unwrap();
        for w in b.windows(2) {
            assert!(w[0].lower <= w[1].lower && w[0].upper <= w[1].upper);
        }
        assert!(b.iter().all(|x| x.lower <= x.upper));
        assert!(b.last().unwrap().exact);
    }

    #[test]
    fn interlacing_examples() {
        let opts = BracketOptions::default();
        let rep = interlacing_check(&generate::complete(4), &[3], &opts).unwrap();
        assert!((rep.ln_removed - SQRT_2 / 2.0).abs() < 1e-12);
        assert!((rep.ln_full - 1.0).abs() < 1e-12);
        assert!(rep.passed());
        let rep = interlacing_check(&generate::path(3), &[1], &opts).unwrap();
        assert_eq!(rep.ln_removed, 0.0);
        assert!(rep.passed());
        let rep = interlacing_check(&generate::complete(5), &[0, 1, 2, 3], &opts).unwrap();
        assert_eq!(rep.ln_removed, 0.0);
        assert!(interlacing_check(&generate::path(3), &[], &opts).is_err());
        assert!(interlacing_check(&generate::path(3), &[5], &opts).is_err());
    }

    #[test]
    fn limit_scan_examples() {
        let cfg = SolverConfig::default();
        let k2 = generate::complete(2).negate();
        let r = limit_scan(&k2, &[2.0, 4.0, 8.0], &cfg).unwrap();
        assert!(r.distances.iter().all(|d| *d < 1e-9));
        assert!(r.certified.iter().all(|&c| c));

        let c5 = generate::cycle(5).negate();
        let r = limit_scan(&c5, &[4.0, 8.0, 16.0, 32.0], &cfg).unwrap();
        assert!(r.non_increasing(1e-9));
        assert!(r.distances[3] < 0.05);

        assert_eq!(
            limit_scan(&SignedGraph::unsigned(3, &[(0, 1)]).unwrap(), &[4.0], &cfg),
            Err(Error::NotConnected)
        );
        assert_eq!(
            limit_scan(&generate::complete(3), &[4.0], &cfg),
            Err(Error::NotAntibalanced)
        );
    }
}
