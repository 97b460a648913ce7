//! Dense complex linear algebra: vectors, Hermitian and Gram matrices, and a
//! cyclic Jacobi eigen solver for real symmetric matrices.
//!
//! Inner products are conjugate-linear in the second argument:
//! `⟨u, v⟩ = Σ u_k · conj(v_k)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::Graph;

/// Tolerance for the Hermitian symmetry check on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default relative tolerance for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Default absolute threshold for the nonzero pattern of a matrix.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not Hermitian: |A[{i}][{j}] - conj(A[{j}][{i}])| = {deviation:e}")]
    NotHermitian { i: usize, j: usize, deviation: f64 },
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },
    #[error("matrix data has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },
}

/// A complex column vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The coordinate vector `e_index` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.norm_sqr() == 0.0)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self(self.0.iter().map(|&z| z * s).collect())
    }

    /// Unit vector in the same direction; the zero vector is returned as is.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scaled(Complex64::new(1.0 / n, 0.0))
        }
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }
}

impl std::ops::Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// `Σ u_k · conj(v_k)`.
pub fn inner(u: &CVector, v: &CVector) -> Result<Complex64, LinalgError> {
    if u.dim() != v.dim() {
        return Err(LinalgError::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(dot(u.entries(), v.entries()))
}

pub(crate) fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
}

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadShape { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[CVector]) -> Result<Self, LinalgError> {
        let rows = cols.first().map_or(0, CVector::dim);
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != rows {
                return Err(LinalgError::DimensionMismatch(rows, c.dim()));
            }
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Array-of-rows of `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| pair(self[(i, j)])).collect()).collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch(cols, r.len()));
            }
            data.extend(r.iter().map(|p| Complex64::new(p[0], p[1])));
        }
        Self::from_data(rows.len(), cols, data)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// A Hermitian matrix, symmetric to within [`HERMITIAN_TOL`] with a real
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self, LinalgError> {
        if m.rows != m.cols {
            return Err(LinalgError::DimensionMismatch(m.rows, m.cols));
        }
        for i in 0..m.rows {
            for j in i..m.cols {
                let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
                if deviation > HERMITIAN_TOL {
                    return Err(LinalgError::NotHermitian { i, j, deviation });
                }
            }
        }
        Ok(Self { inner: m })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let pairs: Vec<Vec<[f64; 2]>> = rows.iter().map(|r| r.iter().map(|&x| [x, 0.0]).collect()).collect();
        Self::new(CMatrix::from_pairs(&pairs)?)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Self { inner: m }
    }

    pub fn n(&self) -> usize {
        self.inner.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    /// Eigenvalues in ascending order.
    ///
    /// The matrix is embedded as the real symmetric `[[Re, -Im], [Im, Re]]`,
    /// whose spectrum is that of the Hermitian matrix with every eigenvalue
    /// doubled.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        let n = self.n();
        if self.inner.is_real() {
            let a: Vec<f64> = self.inner.data.iter().map(|z| z.re).collect();
            return symmetric_eigenvalues(&a, n);
        }
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.inner[(i, j)];
                a[i * m + j] = z.re;
                a[(i + n) * m + (j + n)] = z.re;
                a[i * m + (j + n)] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        let doubled = symmetric_eigenvalues(&a, m)?;
        Ok(doubled.into_iter().step_by(2).collect())
    }

    /// Number of eigenvalues with `|λ| > tol · max|λ|`.
    pub fn rank(&self, tol: f64) -> Result<usize, LinalgError> {
        Ok(numerical_rank(&self.eigenvalues()?, tol))
    }

    /// Whether every eigenvalue is at least `-tol · max|λ|`.
    pub fn is_psd(&self, tol: f64) -> Result<bool, LinalgError> {
        let ev = self.eigenvalues()?;
        let scale = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        Ok(ev.iter().all(|&x| x >= -tol * scale))
    }

    /// Graph on `0..n` with an edge `{i, j}` wherever `|A_ij| > tol`.
    pub fn graph(&self, tol: f64) -> Graph {
        graph_of_matrix(self, tol)
    }

    /// Copy with `A_ij / sqrt(A_ii A_jj)`; rows with a non-positive diagonal
    /// are left unscaled.
    pub fn unit_diagonal(&self) -> Self {
        let n = self.n();
        let d: Vec<f64> = (0..n)
            .map(|i| {
                let x = self.inner[(i, i)].re;
                if x > 0.0 {
                    1.0 / x.sqrt()
                } else {
                    1.0
                }
            })
            .collect();
        let mut m = self.inner.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= d[i] * d[j];
            }
        }
        Self { inner: m }
    }
}

/// Gram matrix `G_ij = ⟨v_i, v_j⟩`.
pub fn gram(vs: &[CVector]) -> Result<HermitianMatrix, LinalgError> {
    let n = vs.len();
    let dim = vs.first().map_or(0, CVector::dim);
    if let Some(bad) = vs.iter().find(|v| v.dim() != dim) {
        return Err(LinalgError::DimensionMismatch(dim, bad.dim()));
    }
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = dot(vs[i].entries(), vs[j].entries());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
        m[(i, i)].im = 0.0;
    }
    Ok(HermitianMatrix { inner: m })
}

/// Graph of a Hermitian matrix under an absolute nonzero threshold.
pub fn graph_of_matrix(m: &HermitianMatrix, tol: f64) -> Graph {
    let n = m.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j).norm() > tol {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("pairs i < j are simple edges")
}

/// Count of values with `|x| > tol · max|x|`.
pub fn numerical_rank(values: &[f64], tol: f64) -> usize {
    let scale = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    values.iter().filter(|x| x.abs() > tol * scale).count()
}

/// Eigenvalues (ascending) of the real symmetric `n × n` row-major matrix `a`.
///
/// Cyclic Jacobi: sweeps of plane rotations over all `p < q` until the
/// off-diagonal Frobenius norm falls below `1e-12` times the Frobenius norm
/// of the input.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>, LinalgError> {
    if a.len() != n * n {
        return Err(LinalgError::BadShape { expected: n * n, got: a.len() });
    }
    let mut a = a.to_vec();
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_REL_TOL * total;
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::ConvergenceFailure { sweeps, off_norm: off });
        }
        sweeps += 1;
        // Entries this small cannot keep the off-diagonal norm above target.
        let skip = 1e-3 * target / (n as f64);
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
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
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
