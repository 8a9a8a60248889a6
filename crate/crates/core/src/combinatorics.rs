//! Independent sets, matchings, edge covers, the Cvetković inertia bound and
//! the inertia report tying them to cut-off eigenvalue brackets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cutoff::{self, BracketOptions};
use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph};
use crate::linalg::{self, DenseSymMatrix};

/// Largest graph handled by the exact bitmask searches.
pub const EXACT_SEARCH_CAP: usize = 32;

/// Zero tolerance for counting vanishing bracket values.
pub const ZERO_TOL: f64 = 1e-9;

fn neighbor_masks(g: &SignedGraph) -> Vec<u64> {
    (0..g.n())
        .map(|i| g.incident(i).iter().fold(0u64, |m, &(j, _)| m | (1 << j)))
        .collect()
}

fn mask_to_vec(mut m: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndependentSet {
    pub size: usize,
    pub witness: Vec<usize>,
    /// False when the graph exceeded the exact cap and a greedy set was returned.
    pub exact: bool,
}

pub fn is_independent(g: &SignedGraph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(a, &u)| set[a + 1..].iter().all(|&v| !g.is_adjacent(u, v)))
}

fn greedy_independent(g: &SignedGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&i| (g.degree(i), i));
    let mut blocked = vec![false; g.n()];
    let mut out = Vec::new();
    for i in order {
        if !blocked[i] {
            out.push(i);
            blocked[i] = true;
            for &(j, _) in g.incident(i) {
                blocked[j] = true;
            }
        }
    }
    out.sort_unstable();
    out
}

struct MisSearch<'a> {
    nbr: &'a [u64],
    best: u64,
    best_size: u32,
}

impl MisSearch<'_> {
    fn expand(&mut self, mut cand: u64, mut cur: u64) {
        // vertices of degree ≤ 1 inside the candidate set can always be taken
        loop {
            let mut forced = None;
            let mut c = cand;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                if (self.nbr[v] & cand).count_ones() <= 1 {
                    forced = Some(v);
                    break;
                }
            }
            match forced {
                Some(v) => {
                    cur |= 1 << v;
                    cand &= !(self.nbr[v] | (1 << v));
                }
                None => break,
            }
        }
        let size = cur.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = cur;
            }
            return;
        }
        if size + cand.count_ones() <= self.best_size {
            return;
        }
        let mut pick = 0;
        let mut deg = 0;
        let mut c = cand;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            let d = (self.nbr[v] & cand).count_ones();
            if d > deg {
                deg = d;
                pick = v;
            }
        }
        self.expand(cand & !(self.nbr[pick] | (1 << pick)), cur | (1 << pick));
        self.expand(cand & !(1 << pick), cur);
    }
}

/// Maximum independent set by branch and bound (exact for `n ≤ 32`).
pub fn max_independent_set(g: &SignedGraph) -> IndependentSet {
    let n = g.n();
    if n > EXACT_SEARCH_CAP {
        let witness = greedy_independent(g);
        return IndependentSet {
            size: witness.len(),
            witness,
            exact: false,
        };
    }
    let nbr = neighbor_masks(g);
    let greedy = greedy_independent(g);
    let mut search = MisSearch {
        nbr: &nbr,
        best: greedy.iter().fold(0, |m, &i| m | (1 << i)),
        best_size: greedy.len() as u32,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search.expand(all, 0);
    let witness = mask_to_vec(search.best);
    debug_assert!(is_independent(g, &witness));
    IndependentSet {
        size: witness.len(),
        witness,
        exact: true,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matching {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn is_matching(g: &SignedGraph, edges: &[(usize, usize)]) -> bool {
    let mut used = vec![false; g.n()];
    for &(u, v) in edges {
        if u >= g.n() || v >= g.n() || !g.is_adjacent(u, v) || used[u] || used[v] {
            return false;
        }
        used[u] = true;
        used[v] = true;
    }
    true
}

fn matching_value(mask: u64, nbr: &[u64], memo: &mut BTreeMap<u64, u32>) -> u32 {
    if mask == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut best = matching_value(rest, nbr, memo);
    let mut cand = nbr[i] & rest;
    while cand != 0 {
        let j = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        let v = 1 + matching_value(rest & !(1 << j), nbr, memo);
        if v > best {
            best = v;
        }
    }
    memo.insert(mask, best);
    best
}

/// Maximum matching by memoized search over vertex subsets.
pub fn max_matching(g: &SignedGraph) -> Result<Matching> {
    let n = g.n();
    if n > EXACT_SEARCH_CAP {
        return Err(Error::SizeCap {
            n,
            cap: EXACT_SEARCH_CAP,
        });
    }
    let nbr = neighbor_masks(g);
    let mut memo = BTreeMap::new();
    let mut mask = (1u64 << n) - 1;
    let total = matching_value(mask, &nbr, &mut memo);
    let mut edges = Vec::new();
    while mask != 0 {
        let target = matching_value(mask, &nbr, &mut memo);
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut next = rest;
        let mut cand = nbr[i] & rest;
        while cand != 0 {
            let j = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if 1 + matching_value(rest & !(1 << j), &nbr, &mut memo) == target {
                edges.push((i, j));
                next = rest & !(1 << j);
                break;
            }
        }
        mask = next;
    }
    debug_assert_eq!(edges.len() as u32, total);
    Ok(Matching {
        size: edges.len(),
        edges,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeCover {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn is_edge_cover(g: &SignedGraph, edges: &[(usize, usize)]) -> bool {
    let mut hit = vec![false; g.n()];
    for &(u, v) in edges {
        if u >= g.n() || v >= g.n() || !g.is_adjacent(u, v) {
            return false;
        }
        hit[u] = true;
        hit[v] = true;
    }
    hit.iter().all(|&h| h)
}

/// Minimum edge cover: a maximum matching plus one edge per unmatched vertex.
pub fn min_edge_cover(g: &SignedGraph) -> Result<EdgeCover> {
    if let Some(&v) = g.isolated_vertices().first() {
        return Err(Error::IsolatedVertex { vertex: v });
    }
    let m = max_matching(g)?;
    let mut covered = vec![false; g.n()];
    for &(u, v) in &m.edges {
        covered[u] = true;
        covered[v] = true;
    }
    let mut edges = m.edges;
    for i in 0..g.n() {
        if !covered[i] {
            let (j, _) = g.incident(i)[0];
            edges.push((i.min(j), i.max(j)));
            covered[i] = true;
        }
    }
    debug_assert!(is_edge_cover(g, &edges));
    Ok(EdgeCover {
        size: edges.len(),
        edges,
    })
}

/// A symmetric matrix with zero diagonal supported on the edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct CvetkovicMatrix {
    m: DenseSymMatrix,
    /// Nonzero on every edge.
    full_support: bool,
}

impl CvetkovicMatrix {
    pub fn new(g: &SignedGraph, m: DenseSymMatrix) -> Result<Self> {
        if m.dim() != g.n() {
            return Err(Error::LengthMismatch {
                what: "matrix dimension",
                expected: g.n(),
                found: m.dim(),
            });
        }
        let mut full_support = true;
        for i in 0..g.n() {
            for j in 0..=i {
                let x = m.get(i, j);
                if !x.is_finite() {
                    return Err(Error::NonFinite {
                        what: "matrix entry",
                        index: i,
                    });
                }
                let adjacent = i != j && g.is_adjacent(i, j);
                if x != 0.0 && !adjacent {
                    return Err(Error::SupportViolation { i: j, j: i });
                }
                if adjacent && x == 0.0 {
                    full_support = false;
                }
            }
        }
        Ok(CvetkovicMatrix { m, full_support })
    }

    /// The signed adjacency matrix of `g`.
    pub fn adjacency(g: &SignedGraph) -> Self {
        CvetkovicMatrix {
            m: linalg::adjacency(g),
            full_support: true,
        }
    }

    /// Whether the matrix lies in the subfamily with `m_ij ≠ 0` exactly on edges.
    pub fn is_m0(&self) -> bool {
        self.full_support
    }

    pub fn matrix(&self) -> &DenseSymMatrix {
        &self.m
    }
}

/// `min{n − n⁺(M), n − n⁻(M)}`, an upper bound on the independence number.
pub fn cvetkovic_bound(m: &CvetkovicMatrix) -> usize {
    let n = m.m.dim();
    let counts = linalg::sign_counts(&m.m.eigenvalues(), linalg::SIGN_TOL);
    (n - counts.plus).min(n - counts.minus)
}

/// Signatures over the fixed edge list of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SignaturePool {
    pub signatures: Vec<Vec<Sign>>,
}

impl SignaturePool {
    /// All positive, all negative, and `random` seeded signatures.
    pub fn standard(g: &SignedGraph, random: usize, seed: u64) -> Self {
        let m = g.edge_count();
        let mut signatures = vec![vec![Sign::Positive; m], vec![Sign::Negative; m]];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random {
            signatures.push(
                (0..m)
                    .map(|_| if rng.random_bool(0.5) { Sign::Positive } else { Sign::Negative })
                    .collect(),
            );
        }
        SignaturePool { signatures }
    }

    /// Every one of the `2^|E|` signatures.
    pub fn exhaustive(g: &SignedGraph) -> Result<Self> {
        let m = g.edge_count();
        if m > 16 {
            return Err(Error::SizeCap { n: m, cap: 16 });
        }
        let signatures = (0u32..1 << m)
            .map(|bits| {
                (0..m)
                    .map(|e| if bits >> e & 1 == 1 { Sign::Negative } else { Sign::Positive })
                    .collect()
            })
            .collect();
        Ok(SignaturePool { signatures })
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }
}

impl Default for SignaturePool {
    fn default() -> Self {
        SignaturePool {
            signatures: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignatureZeroCount {
    pub signature: Vec<i8>,
    /// `#{k : lower_k ≤ tol}`
    pub proxy: usize,
    /// `#{k : upper_k ≤ tol}`
    pub certified_zeros: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InertiaReport {
    pub n: usize,
    pub alpha: usize,
    pub alpha_exact: bool,
    pub independent_set: Vec<usize>,
    /// Absent when the graph has isolated vertices.
    pub beta: Option<usize>,
    pub edge_cover: Option<Vec<(usize, usize)>>,
    pub matching_size: usize,
    /// Smallest proxy over the pool.
    pub zero_count_upper_proxy: usize,
    pub per_signature: Vec<SignatureZeroCount>,
    pub exact_ln: Option<f64>,
    pub cvetkovic_value: usize,
    pub checks: Vec<NamedCheck>,
}

impl InertiaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(checks: &mut Vec<NamedCheck>, name: &str, passed: bool, detail: String) {
    checks.push(NamedCheck {
        name: name.into(),
        passed,
        detail,
    });
}

/// Runs every inertia check on `g` with each signature of `pool` (an empty
/// pool means the signature of `g` only).
pub fn inertia_report(
    g: &SignedGraph,
    pool: &SignaturePool,
    opts: &BracketOptions,
) -> Result<InertiaReport> {
    let n = g.n();
    let mis = max_independent_set(g);
    let alpha = mis.size;
    let matching = max_matching(g)?;
    let cover = if g.has_isolated_vertex() {
        None
    } else {
        Some(min_edge_cover(g)?)
    };
    let beta = cover.as_ref().map(|c| c.size);
    let mut checks = Vec::new();

    let signatures: Vec<SignedGraph> = if pool.is_empty() {
        vec![g.without_potential()]
    } else {
        pool.signatures
            .iter()
            .map(|s| g.with_signature(s).map(|h| h.without_potential()))
            .collect::<Result<_>>()?
    };
    let mut per_signature = Vec::new();
    for h in &signatures {
        let lowers = cutoff::lower_bounds_all(h, opts.budget)?;
        let uppers = cutoff::upper_bounds_all(h, opts)?;
        let proxy = lowers.iter().filter(|&&(x, _)| x <= ZERO_TOL).count();
        let certified_zeros = uppers.iter().filter(|&&x| x <= ZERO_TOL).count();
        let signature = h.edges().iter().map(|e| e.sign.as_i8()).collect::<Vec<_>>();
        check(
            &mut checks,
            "alpha-le-zero-proxy",
            alpha <= proxy,
            format!("alpha={alpha} proxy={proxy} signature={signature:?}"),
        );
        if let Some(beta) = beta {
            check(
                &mut checks,
                "zero-count-le-beta",
                certified_zeros <= beta,
                format!("certified_zeros={certified_zeros} beta={beta} signature={signature:?}"),
            );
            if beta < n {
                let bound = 0.5 * g.min_weight().unwrap_or(0.0) / g.max_measure();
                let up = uppers[beta];
                check(
                    &mut checks,
                    "edge-cover-positive",
                    up >= bound - ZERO_TOL,
                    format!("upper_(beta+1)={up} half wmin/mumax={bound} signature={signature:?}"),
                );
            }
        }
        per_signature.push(SignatureZeroCount {
            signature,
            proxy,
            certified_zeros,
        });
    }
    let zero_count_upper_proxy = per_signature.iter().map(|s| s.proxy).min().unwrap_or(n);

    let base = g.without_potential();
    let mut subsets_zero = true;
    let mut first_bad = None;
    for k in 1..=alpha.min(n) {
        let (u, _) = cutoff::upper_bound_subsets(&base, k, opts.budget)?;
        if u > 0.0 {
            subsets_zero = false;
            first_bad.get_or_insert(k);
        }
    }
    check(
        &mut checks,
        "subset-upper-zero-below-alpha",
        subsets_zero,
        format!("alpha={alpha} first_failure={first_bad:?}"),
    );

    let exact_ln = if n <= opts.enumeration_cap {
        Some(cutoff::exact_ln_with_cap(g, opts.enumeration_cap)?.upper)
    } else {
        None
    };
    if let Some(ln) = exact_ln {
        let has_edge = g.edge_count() > 0;
        check(
            &mut checks,
            "ln-positive-iff-edge",
            (ln > 0.0) == has_edge,
            format!("exact_ln={ln} edges={}", g.edge_count()),
        );
        if !g.has_isolated_vertex() && has_edge {
            let bound = 0.5 * g.min_weight().unwrap_or(0.0) / g.max_measure();
            check(
                &mut checks,
                "ln-ge-half-wmin-over-mumax",
                ln >= bound - ZERO_TOL,
                format!("exact_ln={ln} bound={bound}"),
            );
        }
    }

    let cvetkovic_value = cvetkovic_bound(&CvetkovicMatrix::adjacency(g));
    check(
        &mut checks,
        "alpha-le-cvetkovic",
        alpha <= cvetkovic_value,
        format!("alpha={alpha} cvetkovic={cvetkovic_value}"),
    );
    if let Some(beta) = beta {
        check(
            &mut checks,
            "gallai",
            beta == n - matching.size,
            format!("beta={beta} n={n} matching={}", matching.size),
        );
        check(&mut checks, "alpha-le-beta", alpha <= beta, format!("alpha={alpha} beta={beta}"));
    }

    Ok(InertiaReport {
        n,
        alpha,
        alpha_exact: mis.exact,
        independent_set: mis.witness,
        beta,
        edge_cover: cover.map(|c| c.edges),
        matching_size: matching.size,
        zero_count_upper_proxy,
        per_signature,
        exact_ln,
        cvetkovic_value,
        checks,
    })
}
