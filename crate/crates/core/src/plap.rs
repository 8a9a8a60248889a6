//! The signed p-Laplacian, its Rayleigh quotient and extremal eigenpairs.
//!
//! ```text
//! (Δ_p f)(i) = Σ_{j∼i} w_ij Ψ_p(f(i) − σ_ij f(j)) + κ_i Ψ_p(f(i)),   Ψ_p(t) = |t|^{p−2} t
//! R_p(f)     = (Σ_E w_ij |f(i) − σ_ij f(j)|^p + Σ_i κ_i |f(i)|^p) / Σ_i μ_i |f(i)|^p
//! ```
//!
//! An eigenpair solves `Δ_p f = λ μ Ψ_p(f)`. On the unit sphere `S_p` of
//! `ℓ^p(μ)` the gradient of `R_p` is `p (Δ_p f − R_p(f) μ Ψ_p(f))`, so a
//! stationary point of the quotient is an eigenpair and the residual is the
//! gradient norm divided by `p`.
//!
//! The extremal solvers run projected gradient ascent (or descent) with Armijo
//! backtracking from several seeded starts, polish with Newton steps on the
//! eigen-equation, and accept only pairs whose residual passes the tolerance.
//! On connected antibalanced graphs a strictly one-signed eigenfunction (after
//! switching to the all-negative signature) certifies the largest eigenvalue;
//! everywhere else the solver value is a certified eigenvalue and, for the
//! ascent, a lower bound on the largest variational eigenvalue.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{SignedGraph, SwitchingFunction};
use crate::linalg::{self, DenseSymMatrix};
use crate::num::{abs, abs_pow, max_abs, powf, psi};

/// Above this exponent `|f(i) − σ f(j)|^p` leaves the comfortable range of `f64`.
pub const MAX_SOLVER_P: f64 = 64.0;

/// A real value per vertex.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Self {
        VertexFunction(values)
    }

    pub fn zeros(n: usize) -> Self {
        VertexFunction(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        VertexFunction(vec![c; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    /// `(Σ μ_i |f(i)|^p)^{1/p}`
    pub fn p_norm(&self, measure: &[f64], p: f64) -> f64 {
        p_norm(&self.0, measure, p)
    }

    /// Rescaled onto the unit sphere of `ℓ^p(μ)`.
    pub fn normalized(&self, measure: &[f64], p: f64) -> Result<Self> {
        let mut v = self.0.clone();
        if !normalize(&mut v, measure, p) {
            return Err(Error::ZeroFunction);
        }
        Ok(VertexFunction(v))
    }

    pub fn scaled(&self, c: f64) -> Self {
        VertexFunction(self.0.iter().map(|x| c * x).collect())
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(values: Vec<f64>) -> Self {
        VertexFunction(values)
    }
}

fn p_norm(values: &[f64], measure: &[f64], p: f64) -> f64 {
    let scale = max_abs(values);
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = values
        .iter()
        .zip(measure)
        .map(|(x, m)| m * abs_pow(x / scale, p))
        .sum();
    scale * powf(s, 1.0 / p)
}

// Normalizes in place; false for the zero function.
fn normalize(values: &mut [f64], measure: &[f64], p: f64) -> bool {
    let norm = p_norm(values, measure, p);
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    for x in values.iter_mut() {
        *x /= norm;
    }
    true
}

/// How an eigenpair was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Certificate {
    /// One-signed eigenfunction on a connected antibalanced graph: the value
    /// is the largest eigenvalue.
    PerronCertified,
    /// Best converged pair over seeded restarts.
    MultiRestart,
    /// Known exactly without iteration.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PEigenPair {
    pub p: f64,
    pub lambda: f64,
    /// Eigenfunction on `S_p`.
    pub f: VertexFunction,
    /// `max_i |Δ_p f(i) − λ μ_i Ψ_p(f(i))|`
    pub residual: f64,
    /// The residual is accepted when `residual ≤ tol · scale`, see [`residual_scale`].
    pub scale: f64,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Relative residual tolerance.
    pub tol: f64,
    /// Iteration budget per start.
    pub max_iters: usize,
    pub restarts: usize,
    pub rng_seed: u64,
    /// Armijo sufficient-increase fraction.
    pub armijo_slope: f64,
    pub backtrack: f64,
    pub initial_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-8,
            max_iters: 20_000,
            restarts: 10,
            rng_seed: 0,
            armijo_slope: 1e-4,
            backtrack: 0.5,
            initial_step: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tol must be positive"));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be at least 1"));
        }
        if !(self.armijo_slope > 0.0 && self.armijo_slope < 1.0) {
            return Err(Error::InvalidParameter("armijo_slope must lie in (0, 1)"));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::InvalidParameter("backtrack must lie in (0, 1)"));
        }
        if !(self.initial_step > 0.0) {
            return Err(Error::InvalidParameter("initial_step must be positive"));
        }
        Ok(())
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent { p });
    }
    Ok(())
}

fn check_solver_exponent(p: f64) -> Result<()> {
    check_exponent(p)?;
    if p > MAX_SOLVER_P {
        return Err(Error::ExponentTooLarge {
            p,
            cap: MAX_SOLVER_P,
        });
    }
    Ok(())
}

fn check_len(g: &SignedGraph, f: &[f64]) -> Result<()> {
    if f.len() != g.n() {
        return Err(Error::LengthMismatch {
            what: "vertex function",
            expected: g.n(),
            found: f.len(),
        });
    }
    Ok(())
}

fn plap_into(g: &SignedGraph, p: f64, f: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = g.potential()[i] * psi(p, f[i]);
    }
    for e in g.edges() {
        let d = f[e.u] - e.sign.value() * f[e.v];
        let t = e.weight * psi(p, d);
        out[e.u] += t;
        // Ψ_p(f(v) − σ f(u)) = −σ Ψ_p(f(u) − σ f(v))
        out[e.v] -= e.sign.value() * t;
    }
}

fn quotient_parts(g: &SignedGraph, p: f64, f: &[f64]) -> (f64, f64) {
    let mut num = 0.0;
    for e in g.edges() {
        num += e.weight * abs_pow(f[e.u] - e.sign.value() * f[e.v], p);
    }
    let mut den = 0.0;
    for i in 0..g.n() {
        let a = abs_pow(f[i], p);
        num += g.potential()[i] * a;
        den += g.measure()[i] * a;
    }
    (num, den)
}

/// `Δ_p^σ f`.
pub fn apply_plap(g: &SignedGraph, p: f64, f: &VertexFunction) -> Result<VertexFunction> {
    check_exponent(p)?;
    check_len(g, f.values())?;
    let mut out = vec![0.0; g.n()];
    plap_into(g, p, f.values(), &mut out);
    Ok(VertexFunction(out))
}

/// `R_p^σ(f)`.
pub fn rayleigh(g: &SignedGraph, p: f64, f: &VertexFunction) -> Result<f64> {
    check_exponent(p)?;
    check_len(g, f.values())?;
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let scale = max_abs(f.values());
    let unit: Vec<f64> = f.values().iter().map(|x| x / scale).collect();
    let (num, den) = quotient_parts(g, p, &unit);
    Ok(num / den)
}

/// Gradient of `R_p` at `f` (any nonzero `f`, not only on the sphere).
pub fn rayleigh_gradient(g: &SignedGraph, p: f64, f: &VertexFunction) -> Result<Vec<f64>> {
    check_exponent(p)?;
    check_len(g, f.values())?;
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = f.values();
    let (num, den) = quotient_parts(g, p, f);
    let r = num / den;
    let mut lap = vec![0.0; g.n()];
    plap_into(g, p, f, &mut lap);
    Ok((0..g.n())
        .map(|i| p * (lap[i] - r * g.measure()[i] * psi(p, f[i])) / den)
        .collect())
}

/// `max_i |Δ_p f(i) − λ μ_i Ψ_p(f(i))|`.
pub fn residual(g: &SignedGraph, p: f64, lambda: f64, f: &VertexFunction) -> Result<f64> {
    check_exponent(p)?;
    check_len(g, f.values())?;
    Ok(residual_parts(g, p, lambda, f.values()).0)
}

/// Magnitude the residual is measured against: `max(1, ‖Δ_p f‖_∞, ‖λ μ Ψ_p(f)‖_∞)`.
pub fn residual_scale(g: &SignedGraph, p: f64, lambda: f64, f: &VertexFunction) -> Result<f64> {
    check_exponent(p)?;
    check_len(g, f.values())?;
    Ok(residual_parts(g, p, lambda, f.values()).1)
}

fn residual_parts(g: &SignedGraph, p: f64, lambda: f64, f: &[f64]) -> (f64, f64) {
    let mut lap = vec![0.0; g.n()];
    plap_into(g, p, f, &mut lap);
    let mut res: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..g.n() {
        let rhs = lambda * g.measure()[i] * psi(p, f[i]);
        res = res.max(abs(lap[i] - rhs));
        scale = scale.max(abs(lap[i])).max(abs(rhs));
    }
    (res, scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    Largest,
    Smallest,
}

impl Goal {
    fn dir(self) -> f64 {
        match self {
            Goal::Largest => 1.0,
            Goal::Smallest => -1.0,
        }
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    f: Vec<f64>,
    lambda: f64,
    residual: f64,
    scale: f64,
}

impl Candidate {
    fn rel(&self) -> f64 {
        self.residual / self.scale
    }
}

struct Engine<'a> {
    g: &'a SignedGraph,
    p: f64,
    cfg: &'a SolverConfig,
    goal: Goal,
    iterations: usize,
}

impl<'a> Engine<'a> {
    fn evaluate(&self, f: Vec<f64>) -> Candidate {
        let (num, den) = quotient_parts(self.g, self.p, &f);
        let lambda = num / den;
        let (residual, scale) = residual_parts(self.g, self.p, lambda, &f);
        Candidate {
            f,
            lambda,
            residual,
            scale,
        }
    }

    fn converged(&self, c: &Candidate) -> bool {
        c.residual.is_finite() && c.residual <= self.cfg.tol * c.scale
    }

    fn gradient(&self, f: &[f64], lambda: f64, out: &mut [f64]) {
        plap_into(self.g, self.p, f, out);
        for i in 0..f.len() {
            out[i] = self.p * (out[i] - lambda * self.g.measure()[i] * psi(self.p, f[i]));
        }
    }

    /// Projected gradient steps with Armijo backtracking until the relative
    /// residual drops below `target` or `budget` iterations are spent.
    fn climb(&mut self, mut f: Vec<f64>, target: f64, budget: usize) -> Vec<f64> {
        let n = f.len();
        let dir = self.goal.dir();
        let mut grad = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut step = self.cfg.initial_step;
        let (num, den) = quotient_parts(self.g, self.p, &f);
        let mut r = num / den;
        for _ in 0..budget {
            self.iterations += 1;
            self.gradient(&f, r, &mut grad);
            let (res, scale) = residual_parts(self.g, self.p, r, &f);
            if res <= target * scale {
                break;
            }
            let gnorm2: f64 = grad.iter().map(|x| x * x).sum();
            if !(gnorm2 > 0.0) || !gnorm2.is_finite() {
                break;
            }
            let mut t = step;
            let mut accepted = false;
            for _ in 0..200 {
                for i in 0..n {
                    trial[i] = f[i] + dir * t * grad[i];
                }
                if normalize(&mut trial, self.g.measure(), self.p) {
                    let (num, den) = quotient_parts(self.g, self.p, &trial);
                    let rt = num / den;
                    if dir * (rt - r) >= self.cfg.armijo_slope * t * gnorm2 {
                        r = rt;
                        accepted = true;
                        break;
                    }
                }
                t *= self.cfg.backtrack;
            }
            if !accepted {
                break;
            }
            core::mem::swap(&mut f, &mut trial);
            step = t / self.cfg.backtrack;
        }
        f
    }

    /// Newton iteration on `Δ_p f − λ μ Ψ_p(f) = 0` bordered with a tangent
    /// normalization. Steps are kept only while the residual decreases.
    fn newton(&mut self, start: Candidate) -> Candidate {
        let n = self.g.n();
        let p = self.p;
        let dim = n + 1;
        let mut best = start;
        for _ in 0..40 {
            if best.residual <= 1e-3 * self.cfg.tol * best.scale {
                break;
            }
            self.iterations += 1;
            let f = &best.f;
            let lambda = best.lambda;
            let mut jac = vec![0.0; dim * dim];
            let mut rhs = vec![0.0; dim];
            let mut lap = vec![0.0; n];
            plap_into(self.g, p, f, &mut lap);
            for i in 0..n {
                let mu = self.g.measure()[i];
                let kappa = self.g.potential()[i];
                jac[i * dim + i] += (p - 1.0) * (kappa - lambda * mu) * abs_pow(f[i], p - 2.0);
                jac[i * dim + n] = -mu * psi(p, f[i]);
                jac[n * dim + i] = mu * psi(p, f[i]);
                rhs[i] = -(lap[i] - lambda * mu * psi(p, f[i]));
            }
            for e in self.g.edges() {
                let s = e.sign.value();
                let d = f[e.u] - s * f[e.v];
                let c = (p - 1.0) * e.weight * abs_pow(d, p - 2.0);
                jac[e.u * dim + e.u] += c;
                jac[e.v * dim + e.v] += c;
                jac[e.u * dim + e.v] -= s * c;
                jac[e.v * dim + e.u] -= s * c;
            }
            if jac.iter().any(|x| !x.is_finite()) {
                break;
            }
            if linalg::solve_linear(&mut jac, &mut rhs, dim).is_none() {
                break;
            }
            let mut alpha = 1.0;
            let mut improved = None;
            for _ in 0..12 {
                let mut trial: Vec<f64> = (0..n).map(|i| f[i] + alpha * rhs[i]).collect();
                if normalize(&mut trial, self.g.measure(), p) {
                    let c = self.evaluate(trial);
                    if c.rel() < best.rel() {
                        improved = Some(c);
                        break;
                    }
                }
                alpha *= 0.5;
            }
            match improved {
                Some(c) => best = c,
                None => break,
            }
        }
        best
    }

    /// Rounds near-zero entries to zero and near-equal magnitudes to a common
    /// value; exact structure of this kind is where Ψ_p is not smooth.
    fn snapped(&self, f: &[f64], theta: f64) -> Option<Vec<f64>> {
        let scale = max_abs(f);
        let tol = theta * scale;
        let mut order: Vec<usize> = (0..f.len()).collect();
        order.sort_by(|&a, &b| abs(f[a]).total_cmp(&abs(f[b])));
        let mut out = f.to_vec();
        let mut start = 0;
        while start < order.len() {
            let mut end = start + 1;
            while end < order.len() && abs(f[order[end]]) - abs(f[order[end - 1]]) <= tol {
                end += 1;
            }
            let group = &order[start..end];
            let mean = if abs(f[group[0]]) <= tol {
                0.0
            } else {
                group.iter().map(|&i| abs(f[i])).sum::<f64>() / group.len() as f64
            };
            for &i in group {
                out[i] = crate::num::signum(f[i]) * mean;
            }
            start = end;
        }
        if out == f {
            return None;
        }
        if normalize(&mut out, self.g.measure(), self.p) {
            Some(out)
        } else {
            None
        }
    }

    fn local_solve(&mut self, start: Vec<f64>) -> Vec<Candidate> {
        let budget = self.cfg.max_iters;
        let coarse = self.cfg.tol.max(1e-5);
        let f = self.climb(start, coarse, budget / 2);
        let mut cand = self.newton(self.evaluate(f));
        if !self.converged(&cand) {
            let f = self.climb(cand.f.clone(), self.cfg.tol, budget - budget / 2);
            cand = self.newton(self.evaluate(f));
        }
        let mut out = Vec::new();
        if !self.converged(&cand) {
            for theta in [1e-3, 1e-5, 1e-7] {
                if let Some(s) = self.snapped(&cand.f, theta) {
                    let c = self.newton(self.evaluate(s));
                    if self.converged(&c) {
                        out.push(c);
                    }
                }
            }
        }
        out.push(cand);
        out
    }

    fn better(&self, a: &Candidate, b: &Candidate) -> bool {
        self.goal.dir() * (a.lambda - b.lambda) > 0.0
    }

    fn run(&mut self, starts: Vec<Vec<f64>>) -> Result<Candidate> {
        let mut best: Option<Candidate> = None;
        let mut closest: Option<Candidate> = None;
        for s in starts {
            let mut s = s;
            if !normalize(&mut s, self.g.measure(), self.p) {
                continue;
            }
            for c in self.local_solve(s) {
                if self.converged(&c) {
                    if best.as_ref().map_or(true, |b| self.better(&c, b)) {
                        best = Some(c);
                    }
                } else if closest.as_ref().map_or(true, |b| c.rel() < b.rel()) {
                    closest = Some(c);
                }
            }
        }
        best.ok_or(Error::NonConvergence {
            best_residual: closest.map_or(f64::INFINITY, |c| c.residual),
            iterations: self.iterations,
        })
    }
}

/// Maps `x ↦ sign(x)|x|^{2/p}`, taking unit ℓ²(μ) vectors onto `S_p`.
fn from_quadratic(v: &[f64], p: f64) -> Vec<f64> {
    v.iter()
        .map(|&x| crate::num::signum(x) * abs_pow(x, 2.0 / p))
        .collect()
}

fn perron_vector(m: &DenseSymMatrix, measure: &[f64]) -> Vec<f64> {
    let dec = linalg::measure_spectrum(m, measure);
    let (_, v) = dec.largest();
    // entries of a nonnegative Perron vector share one sign; abs guards round-off
    v.iter().map(|x| abs(*x)).collect()
}

fn random_starts(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

/// Switching to the all-negative signature, when the graph is connected and antibalanced.
pub fn perron_switching(g: &SignedGraph) -> Option<SwitchingFunction> {
    if !g.is_connected() {
        return None;
    }
    g.classify_balance().antibalanced_witness
}

fn one_signed(values: &[f64]) -> bool {
    let scale = max_abs(values);
    scale > 0.0
        && (values.iter().all(|&x| x > 1e-12 * scale) || values.iter().all(|&x| x < -1e-12 * scale))
}

fn into_pair(g: &SignedGraph, p: f64, c: Candidate, certificate: Certificate) -> PEigenPair {
    let _ = g;
    PEigenPair {
        p,
        lambda: c.lambda,
        f: VertexFunction(c.f),
        residual: c.residual,
        scale: c.scale,
        certificate,
    }
}

/// Largest eigenpair found by multi-start projected gradient ascent.
pub fn solve_largest(g: &SignedGraph, p: f64, cfg: &SolverConfig) -> Result<PEigenPair> {
    check_solver_exponent(p)?;
    cfg.validate()?;
    let n = g.n();
    let tau = perron_switching(g);
    let abs_perron = perron_vector(&linalg::abs_adjacency(g), g.measure());
    let mut starts = Vec::new();
    if let Some(tau) = &tau {
        starts.push(tau.apply(&from_quadratic(&abs_perron, p)));
    }
    starts.push(abs_perron.clone());
    let lap = linalg::measure_spectrum(&linalg::laplacian(g), g.measure());
    starts.push(from_quadratic(lap.largest().1, p));
    starts.extend(random_starts(n, cfg.restarts, cfg.rng_seed));
    let mut engine = Engine {
        g,
        p,
        cfg,
        goal: Goal::Largest,
        iterations: 0,
    };
    let best = engine.run(starts)?;
    let certificate = match &tau {
        Some(tau) if one_signed(&tau.apply(&best.f)) => Certificate::PerronCertified,
        _ => Certificate::MultiRestart,
    };
    Ok(into_pair(g, p, best, certificate))
}

/// Smallest eigenpair found by multi-start projected gradient descent; the
/// value is an upper bound for the first variational eigenvalue.
pub fn solve_smallest(g: &SignedGraph, p: f64, cfg: &SolverConfig) -> Result<PEigenPair> {
    check_solver_exponent(p)?;
    cfg.validate()?;
    let n = g.n();
    let class = g.classify_balance();
    if let (Some(tau), true) = (&class.balanced_witness, g.has_zero_potential()) {
        let total: f64 = g.measure().iter().sum();
        let c = powf(total, -1.0 / p);
        let f = tau.apply(&vec![c; n]);
        let (residual, scale) = residual_parts(g, p, 0.0, &f);
        return Ok(PEigenPair {
            p,
            lambda: 0.0,
            f: VertexFunction(f),
            residual,
            scale,
            certificate: Certificate::ClosedForm,
        });
    }
    let mut starts = Vec::new();
    if let Some(tau) = &class.balanced_witness {
        starts.push(tau.apply(&vec![1.0; n]));
    }
    let lap = linalg::measure_spectrum(&linalg::laplacian(g), g.measure());
    starts.push(from_quadratic(&lap.vectors[0], p));
    starts.extend(random_starts(n, cfg.restarts, cfg.rng_seed));
    let mut engine = Engine {
        g,
        p,
        cfg,
        goal: Goal::Smallest,
        iterations: 0,
    };
    let best = engine.run(starts)?;
    Ok(into_pair(g, p, best, Certificate::MultiRestart))
}

/// The positive eigenvalues of the complete graph, indexed by `(h, k)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompleteSpectrum {
    pub n: usize,
    pub p: f64,
    /// `(h, k, value)` with `1 ≤ h ≤ k`, `h + k ≤ n`.
    pub values: Vec<(usize, usize, f64)>,
    /// Smallest positive eigenvalue, the second variational eigenvalue.
    pub min: f64,
    /// Largest eigenvalue.
    pub max: f64,
}

/// `n − (h + k) + (h^{q−1} + k^{q−1})^{p−1}` over `h, k ≥ 1`, `h + k ≤ n`, with `q = p/(p−1)`.
pub fn closed_form_complete(n: usize, p: f64) -> Result<CompleteSpectrum> {
    check_exponent(p)?;
    if n < 3 {
        return Err(Error::InvalidParameter("complete-graph closed form needs n >= 3"));
    }
    let e = 1.0 / (p - 1.0); // q − 1
    let mut values = Vec::new();
    for h in 1..n {
        for k in h..=(n - h) {
            let v = (n - h - k) as f64 + powf(powf(h as f64, e) + powf(k as f64, e), p - 1.0);
            values.push((h, k, v));
        }
    }
    let min = values.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
    let max = values.iter().map(|t| t.2).fold(f64::NEG_INFINITY, f64::max);
    Ok(CompleteSpectrum {
        n,
        p,
        values,
        min,
        max,
    })
}

/// Largest eigenvalue of the star on `m` vertices: `(1 + (m−1)^{1/(p−1)})^{p−1}`.
pub fn closed_form_star(m: usize, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if m < 2 {
        return Err(Error::InvalidParameter("star closed form needs m >= 2"));
    }
    Ok(powf(1.0 + powf((m - 1) as f64, 1.0 / (p - 1.0)), p - 1.0))
}

/// Which end of the variational spectrum a value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum IndexLabel {
    /// `k = 1`
    First,
    /// `k = n`
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotonicityPoint {
    pub p: f64,
    pub lambda: f64,
    /// `2^{-p} λ`
    pub m1: f64,
    /// `p (λ / D)^{1/p}`
    pub m2: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotonicityReport {
    pub label: IndexLabel,
    pub d: f64,
    pub slack: f64,
    pub points: Vec<MonotonicityPoint>,
    /// Indices `i` with `m1[i+1] > m1[i] + slack`.
    pub m1_violations: Vec<usize>,
    /// Indices `i` with `m2[i+1] < m2[i] − slack`.
    pub m2_violations: Vec<usize>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.m1_violations.is_empty() && self.m2_violations.is_empty()
    }
}

/// Evaluates `p ↦ 2^{-p} λ` (non-increasing) and `p ↦ p (λ/D)^{1/p}`
/// (non-decreasing) along a grid of `(p, λ)` values for one index label.
///
/// The slack is relative: a step is a violation when it exceeds
/// `slack · max(1, |value|)`.
pub fn monotonicity_functionals(
    g: &SignedGraph,
    label: IndexLabel,
    values: &[(f64, f64)],
    slack: f64,
) -> Result<MonotonicityReport> {
    if g.potential().iter().any(|&k| k < 0.0) {
        return Err(Error::InvalidParameter("monotonicity requires a nonnegative potential"));
    }
    let d = g.structural_constants().d;
    if !(d > 0.0) {
        return Err(Error::InvalidParameter("structural constant D must be positive"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut points = Vec::with_capacity(sorted.len());
    for &(p, lambda) in &sorted {
        check_exponent(p)?;
        let m1 = powf(2.0, -p) * lambda;
        let m2 = if lambda > 0.0 {
            p * powf(lambda / d, 1.0 / p)
        } else {
            0.0
        };
        points.push(MonotonicityPoint { p, lambda, m1, m2 });
    }
    let mut m1_violations = Vec::new();
    let mut m2_violations = Vec::new();
    for (i, w) in points.windows(2).enumerate() {
        if w[1].m1 > w[0].m1 + slack * w[0].m1.abs().max(1.0) {
            m1_violations.push(i);
        }
        if w[1].m2 < w[0].m2 - slack * w[0].m2.abs().max(1.0) {
            m2_violations.push(i);
        }
    }
    Ok(MonotonicityReport {
        label,
        d,
        slack,
        points,
        m1_violations,
        m2_violations,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialShiftReport {
    pub p: f64,
    pub label: IndexLabel,
    pub lambda_with_potential: f64,
    pub lambda_without_potential: f64,
    /// `C = max_i |κ_i / μ_i|`
    pub c: f64,
    pub passed: bool,
}

/// Compares the extremal eigenvalue with and without the potential against
/// `|λ(κ) − λ(0)| ≤ C`.
pub fn potential_shift_check(
    g: &SignedGraph,
    p: f64,
    label: IndexLabel,
    cfg: &SolverConfig,
) -> Result<PotentialShiftReport> {
    let bare = g.without_potential();
    let (with, without) = match label {
        IndexLabel::First => (solve_smallest(g, p, cfg)?, solve_smallest(&bare, p, cfg)?),
        IndexLabel::Last => (solve_largest(g, p, cfg)?, solve_largest(&bare, p, cfg)?),
    };
    let c = g.structural_constants().c;
    let diff = abs(with.lambda - without.lambda);
    let slack = 1e-8 * with.lambda.abs().max(without.lambda.abs()).max(1.0);
    Ok(PotentialShiftReport {
        p,
        label,
        lambda_with_potential: with.lambda,
        lambda_without_potential: without.lambda,
        c,
        passed: diff <= c + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeSpec, GraphSpec};

    fn f(values: &[f64]) -> VertexFunction {
        VertexFunction::new(values.to_vec())
    }

    fn k2() -> SignedGraph {
        SignedGraph::unsigned(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn plap_examples() {
        let tri = SignedGraph::unsigned(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let out = apply_plap(&tri, 3.0, &f(&[2.0, 2.0, 2.0])).unwrap();
        assert_eq!(out.values(), &[0.0, 0.0, 0.0]);
        let out = apply_plap(&k2(), 4.0, &f(&[1.0, -1.0])).unwrap();
        assert_eq!(out.values(), &[8.0, -8.0]);
        let out = apply_plap(&k2().negate(), 3.0, &f(&[1.0, 1.0])).unwrap();
        assert_eq!(out.values(), &[4.0, 4.0]);
        assert!(matches!(
            apply_plap(&k2(), 1.0, &f(&[1.0, 0.0])),
            Err(Error::InvalidExponent { .. })
        ));
    }

    #[test]
    fn rayleigh_examples() {
        let tri = SignedGraph::unsigned(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(rayleigh(&tri, 2.5, &f(&[1.0, 1.0, 1.0])).unwrap(), 0.0);
        assert_eq!(rayleigh(&k2(), 2.0, &f(&[1.0, -1.0])).unwrap(), 2.0);
        assert_eq!(rayleigh(&k2().negate(), 2.0, &f(&[1.0, 1.0])).unwrap(), 2.0);
        assert_eq!(rayleigh(&k2(), 2.0, &f(&[0.0, 0.0])), Err(Error::ZeroFunction));
    }

    #[test]
    fn residual_examples() {
        let tri = SignedGraph::unsigned(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(residual(&tri, 3.0, 0.0, &f(&[0.5, 0.5, 0.5])).unwrap(), 0.0);
        assert_eq!(residual(&k2(), 2.0, 2.0, &f(&[1.0, -1.0])).unwrap(), 0.0);
        let mut prev = 0.0;
        for eps in [1e-4, 1e-3, 1e-2] {
            let r = residual(&k2(), 2.0, 2.0, &f(&[1.0 + eps, -1.0])).unwrap();
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn config_validation() {
        let cfg = SolverConfig {
            restarts: 0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SolverConfig {
            tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(solve_largest(&k2(), 2.0, &cfg).is_err());
        assert!(matches!(
            solve_largest(&k2(), 80.0, &SolverConfig::default()),
            Err(Error::ExponentTooLarge { .. })
        ));
    }

    #[test]
    fn largest_on_small_graphs() {
        let cfg = SolverConfig::default();
        let star = SignedGraph::unsigned(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let pair = solve_largest(&star, 2.0, &cfg).unwrap();
        assert!((pair.lambda - 5.0).abs() < 1e-9);
        assert_eq!(pair.certificate, Certificate::PerronCertified);

        let k5 = crate::generate::complete(5);
        let pair = solve_largest(&k5, 2.0, &cfg).unwrap();
        assert!((pair.lambda - 5.0).abs() < 1e-9);
        assert_eq!(pair.certificate, Certificate::MultiRestart);

        // 2-Laplacian of the all-negative C_4 is its signless Laplacian, largest eigenvalue 4
        let c4 = crate::generate::cycle(4).negate();
        let pair = solve_largest(&c4, 2.0, &cfg).unwrap();
        assert!((pair.lambda - 4.0).abs() < 1e-9);
    }

    #[test]
    fn smallest_on_small_graphs() {
        let cfg = SolverConfig::default();
        let tri = SignedGraph::unsigned(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let pair = solve_smallest(&tri, 3.0, &cfg).unwrap();
        assert_eq!(pair.lambda, 0.0);
        assert_eq!(pair.certificate, Certificate::ClosedForm);
        let pair = solve_smallest(&k2().negate(), 2.0, &cfg).unwrap();
        assert_eq!(pair.lambda, 0.0);
        // signless Laplacian of K_3 has smallest eigenvalue 1
        let pair = solve_smallest(&tri.negate(), 2.0, &cfg).unwrap();
        assert!((pair.lambda - 1.0).abs() < 1e-9, "{}", pair.lambda);
    }

    #[test]
    fn complete_closed_form() {
        let s = closed_form_complete(5, 2.0).unwrap();
        assert!(s.values.iter().all(|t| (t.2 - 5.0).abs() < 1e-12));
        let s = closed_form_complete(3, 3.0).unwrap();
        let v11 = s.values.iter().find(|t| t.0 == 1 && t.1 == 1).unwrap().2;
        assert!((v11 - 5.0).abs() < 1e-12);
        assert!(closed_form_complete(2, 2.0).is_err());
    }

    #[test]
    fn complete_maximum_at_balanced_split_for_large_p() {
        for n in 3..=9 {
            let s = closed_form_complete(n, 12.0).unwrap();
            let (h, k, _) = s
                .values
                .iter()
                .copied()
                .max_by(|a, b| a.2.total_cmp(&b.2))
                .unwrap();
            assert_eq!((h, k), (n / 2, n - n / 2));
        }
    }

    #[test]
    fn star_closed_form() {
        assert!((closed_form_star(5, 2.0).unwrap() - 5.0).abs() < 1e-12);
        for p in [1.5, 2.0, 3.0, 7.5] {
            assert!((closed_form_star(2, p).unwrap() - powf(2.0, p - 1.0)).abs() < 1e-9);
        }
        let scaled = powf(2.0, -64.0) * closed_form_star(5, 64.0).unwrap();
        assert!((scaled - 1.0).abs() < 1e-2);
        assert!(closed_form_star(1, 2.0).is_err());
    }

    #[test]
    fn monotonicity_examples() {
        let grid = [1.5, 2.0, 3.0, 4.0, 8.0];
        let vals: Vec<(f64, f64)> = grid.iter().map(|&p| (p, powf(2.0, p - 1.0))).collect();
        let rep = monotonicity_functionals(&k2(), IndexLabel::Last, &vals, 1e-12).unwrap();
        assert!(rep.passed());
        assert!(rep.points.iter().all(|pt| (pt.m1 - 0.5).abs() < 1e-15));

        let star = SignedGraph::unsigned(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let vals: Vec<(f64, f64)> = [2.0, 3.0, 4.0, 8.0]
            .iter()
            .map(|&p| (p, closed_form_star(5, p).unwrap()))
            .collect();
        let rep = monotonicity_functionals(&star, IndexLabel::Last, &vals, 0.0).unwrap();
        assert!(rep.passed());
        assert!(rep.points.windows(2).all(|w| w[1].m1 < w[0].m1));
        assert!(rep.points.iter().all(|pt| pt.m1 > 1.0));

        let tri = SignedGraph::unsigned(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let zeros: Vec<(f64, f64)> = grid.iter().map(|&p| (p, 0.0)).collect();
        let rep = monotonicity_functionals(&tri, IndexLabel::First, &zeros, 0.0).unwrap();
        assert!(rep.points.iter().all(|pt| pt.m1 == 0.0 && pt.m2 == 0.0));

        // an increasing m1 is reported
        let bad = [(2.0, 1.0), (3.0, 4.0)];
        let rep = monotonicity_functionals(&k2(), IndexLabel::Last, &bad, 1e-8).unwrap();
        assert_eq!(rep.m1_violations, vec![0]);
    }

    #[test]
    fn potential_shift_examples() {
        let cfg = SolverConfig::default();
        let rep = potential_shift_check(&k2(), 2.0, IndexLabel::Last, &cfg).unwrap();
        assert_eq!(rep.c, 0.0);
        assert!((rep.lambda_with_potential - rep.lambda_without_potential).abs() < 1e-9);

        // κ = c μ shifts every eigenvalue by exactly c
        let mut spec = GraphSpec::new(3, vec![EdgeSpec::new(0, 1), EdgeSpec::new(1, 2)]);
        spec.mu = Some(vec![1.0, 2.0, 1.0]);
        spec.kappa = Some(vec![0.5, 1.0, 0.5]);
        let g = spec.validate().unwrap();
        let rep = potential_shift_check(&g, 3.0, IndexLabel::Last, &cfg).unwrap();
        assert!((rep.lambda_with_potential - rep.lambda_without_potential - 0.5).abs() < 1e-7);
        assert!(rep.passed);

        // K_2 with κ = (1, 0) at p = 2: largest eigenvalue (3 + √5)/2 against 2
        let g = k2().with_potential(vec![1.0, 0.0]).unwrap();
        let rep = potential_shift_check(&g, 2.0, IndexLabel::Last, &cfg).unwrap();
        let exact = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((rep.lambda_with_potential - exact).abs() < 1e-9);
        assert!(rep.passed);
    }
}
