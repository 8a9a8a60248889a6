//! Dense symmetric matrices, a cyclic Jacobi eigensolver, and the
//! (normalized) adjacency spectra of signed graphs.
//!
//! The generalized problem `A v = λ D v` with `D = diag(μ)` is always solved
//! through the symmetric similarity `D^{-1/2} A D^{-1/2}`; eigenvectors are
//! mapped back with `D^{-1/2}` so they are orthonormal in `⟨·,·⟩_μ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::SignedGraph;
use crate::num::{abs, sqrt};

/// Symmetric matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    packed: Vec<f64>,
}

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseSymMatrix {
            n,
            packed: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from a full row-major matrix, reading the lower triangle only.
    pub fn from_full(n: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * n, "expected an n x n matrix");
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, rows[i * n + j]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.packed[packed_index(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.packed[packed_index(i, j)] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.packed[packed_index(i, j)] += value;
    }

    pub fn to_full(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let x = self.get(i, j);
                s += if i == j { x * x } else { 2.0 * x * x };
            }
        }
        sqrt(s)
    }

    pub fn scaled(&self, c: f64) -> Self {
        DenseSymMatrix {
            n: self.n,
            packed: self.packed.iter().map(|x| c * x).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// `D^{-1/2} M D^{-1/2}` for `D = diag(measure)`.
    pub fn measure_similarity(&self, measure: &[f64]) -> Self {
        let inv: Vec<f64> = measure.iter().map(|&m| 1.0 / sqrt(m)).collect();
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..=i {
                out.set(i, j, self.get(i, j) * inv[i] * inv[j]);
            }
        }
        out
    }

    /// Principal submatrix on `rows` (in the given order).
    pub fn principal(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in rows.iter().enumerate().take(a + 1) {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Full decomposition in the Euclidean inner product.
    pub fn eigen(&self) -> EigenDecomposition {
        let (values, vectors) = jacobi(self, true);
        EigenDecomposition::sorted(values, vectors, InnerProduct::Euclidean)
    }

    /// Eigenvalues only, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (mut values, _) = jacobi(self, false);
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InnerProduct {
    Euclidean,
    /// `⟨f, g⟩_μ = Σ μ_i f_i g_i`
    Measure(Vec<f64>),
}

/// Eigenvalues in ascending order with matching eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    pub inner: InnerProduct,
}

impl EigenDecomposition {
    fn sorted(values: Vec<f64>, mut vectors: Vec<Vec<f64>>, inner: InnerProduct) -> Self {
        for v in &mut vectors {
            normalize_sign(v);
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        EigenDecomposition {
            values: order.iter().map(|&k| values[k]).collect(),
            vectors: order.iter().map(|&k| vectors[k].clone()).collect(),
            inner,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `k`-th smallest eigenvalue, 1-based.
    pub fn value(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn largest(&self) -> (f64, &[f64]) {
        let last = self.values.len() - 1;
        (self.values[last], &self.vectors[last])
    }

    pub fn sign_counts(&self, tol: f64) -> SignCounts {
        sign_counts(&self.values, tol)
    }
}

// Flip so the first component of significant size is positive.
fn normalize_sign(v: &mut [f64]) {
    let scale = crate::num::max_abs(v);
    if scale == 0.0 {
        return;
    }
    if let Some(&first) = v.iter().find(|x| abs(**x) > 1e-10 * scale) {
        if first < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Cyclic Jacobi rotations until `off(M) ≤ 1e-12 ‖M‖_F`.
///
/// Returns unsorted eigenvalues and, if requested, eigenvectors as columns
/// (`vectors[k]` pairs with `values[k]`).
fn jacobi(m: &DenseSymMatrix, want_vectors: bool) -> (Vec<f64>, Vec<Vec<f64>>) {
    const MAX_SWEEPS: usize = 100;
    let n = m.dim();
    let mut a = m.to_full();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    } else {
        Vec::new()
    };
    let norm = m.frobenius_norm();
    let threshold = 1e-12 * norm;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..i {
                off += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        if sqrt(off) <= threshold || norm == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // t = sign(θ) / (|θ| + sqrt(θ² + 1)), with sign(0) = +1
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (abs(theta) + sqrt(theta * theta + 1.0));
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    let vectors = if want_vectors {
        (0..n).map(|k| (0..n).map(|i| v[i * n + k]).collect()).collect()
    } else {
        Vec::new()
    };
    (values, vectors)
}

/// Default tolerance for counting an eigenvalue as zero.
pub const SIGN_TOL: f64 = 1e-9;

/// `(n⁺, n⁻, n⁰)` with `|λ| ≤ tol` counted as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignCounts {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

pub fn sign_counts(values: &[f64], tol: f64) -> SignCounts {
    let mut c = SignCounts {
        plus: 0,
        minus: 0,
        zero: 0,
    };
    for &x in values {
        if abs(x) <= tol {
            c.zero += 1;
        } else if x > 0.0 {
            c.plus += 1;
        } else {
            c.minus += 1;
        }
    }
    c
}

/// Signed adjacency matrix: `a_ij = σ_ij w_ij` on edges, zero elsewhere.
pub fn adjacency(g: &SignedGraph) -> DenseSymMatrix {
    let mut m = DenseSymMatrix::zeros(g.n());
    for e in g.edges() {
        m.set(e.u, e.v, e.signed_weight());
    }
    m
}

/// `|A|`: the unsigned weighted adjacency matrix.
pub fn abs_adjacency(g: &SignedGraph) -> DenseSymMatrix {
    let mut m = DenseSymMatrix::zeros(g.n());
    for e in g.edges() {
        m.set(e.u, e.v, e.weight);
    }
    m
}

/// Matrix of the 2-Laplacian: `Deg + K − A`.
pub fn laplacian(g: &SignedGraph) -> DenseSymMatrix {
    let mut m = adjacency(g).scaled(-1.0);
    for i in 0..g.n() {
        m.add(i, i, g.weighted_degree(i) + g.potential()[i]);
    }
    m
}

/// Decomposition of `D^{-1} M` through its symmetric similarity; vectors are
/// returned μ-orthonormal.
pub fn measure_spectrum(m: &DenseSymMatrix, measure: &[f64]) -> EigenDecomposition {
    let sim = m.measure_similarity(measure);
    let mut dec = sim.eigen();
    for v in &mut dec.vectors {
        for (x, &mu) in v.iter_mut().zip(measure) {
            *x /= sqrt(mu);
        }
    }
    dec.inner = InnerProduct::Measure(measure.to_vec());
    dec
}

/// Spectrum of the normalized adjacency matrix `A^μ = D^{-1} A`.
pub fn normalized_spectrum(g: &SignedGraph) -> EigenDecomposition {
    measure_spectrum(&adjacency(g), g.measure())
}

/// Eigenvalues of `A^μ` only.
pub fn normalized_eigenvalues(g: &SignedGraph) -> Vec<f64> {
    adjacency(g).measure_similarity(g.measure()).eigenvalues()
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n x n`; returns `None` for a numerically singular system.
pub fn solve_linear(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    let scale = crate::num::max_abs(a);
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if abs(a[r * n + col]) > abs(a[piv * n + col]) {
                piv = r;
            }
        }
        if abs(a[piv * n + col]) <= 1e-14 * scale {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in (col + 1)..n {
            let factor = a[r * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[r * n + k] -= factor * a[col * n + k];
            }
            b[r] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in (col + 1)..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    if b.iter().all(|x| x.is_finite()) {
        Some(())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SignedGraph;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!(abs(x - y) <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn adjacency_of_k2() {
        let k2 = SignedGraph::unsigned(2, &[(0, 1)]).unwrap();
        assert_eq!(adjacency(&k2).to_full(), vec![0.0, 1.0, 1.0, 0.0]);
        assert_eq!(adjacency(&k2.negate()).to_full(), vec![0.0, -1.0, -1.0, 0.0]);
    }

    #[test]
    fn small_spectra() {
        let k3 = SignedGraph::unsigned(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_close(&normalized_spectrum(&k3).values, &[-1.0, -1.0, 2.0], 1e-12);
        let p3 = SignedGraph::unsigned(3, &[(0, 1), (1, 2)]).unwrap();
        let r2 = core::f64::consts::SQRT_2;
        assert_close(&normalized_spectrum(&p3).values, &[-r2, 0.0, r2], 1e-12);
        assert_close(
            &normalized_spectrum(&k3.negate()).values,
            &[-2.0, 1.0, 1.0],
            1e-12,
        );
    }

    #[test]
    fn sign_count_examples() {
        assert_eq!(
            sign_counts(&[-1.0, -1.0, 2.0], 1e-9),
            SignCounts { plus: 1, minus: 2, zero: 0 }
        );
        let zero = DenseSymMatrix::zeros(4).eigen();
        assert_eq!(zero.sign_counts(1e-9), SignCounts { plus: 0, minus: 0, zero: 4 });
        let r2 = core::f64::consts::SQRT_2;
        assert_eq!(
            sign_counts(&[-r2, 1e-17, r2], 1e-9),
            SignCounts { plus: 1, minus: 1, zero: 1 }
        );
    }

    #[test]
    fn measure_vectors_are_mu_orthonormal() {
        let mut spec = SignedGraph::unsigned(4, &[(0, 1), (1, 2), (2, 3), (0, 2)])
            .unwrap()
            .to_spec();
        spec.mu = Some(vec![1.0, 2.0, 0.5, 3.0]);
        let g = spec.validate().unwrap();
        let dec = normalized_spectrum(&g);
        let mu = g.measure();
        for a in 0..4 {
            for b in 0..4 {
                let ip: f64 = (0..4).map(|i| mu[i] * dec.vectors[a][i] * dec.vectors[b][i]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!(abs(ip - want) < 1e-10);
            }
            // D^{-1} A v = λ v
            let av = adjacency(&g).mul_vec(&dec.vectors[a]);
            for i in 0..4 {
                assert!(abs(av[i] / mu[i] - dec.values[a] * dec.vectors[a][i]) < 1e-10);
            }
        }
    }

    #[test]
    fn linear_solve() {
        let mut a = vec![2.0, 1.0, 1.0, 3.0];
        let mut b = vec![3.0, 5.0];
        solve_linear(&mut a, &mut b, 2).unwrap();
        assert_close(&b, &[0.8, 1.4], 1e-14);
        let mut s = vec![1.0, 2.0, 2.0, 4.0];
        assert!(solve_linear(&mut s, &mut [1.0, 1.0], 2).is_none());
    }
}
