//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here operates on small (desk-scale, n ≲ 250) dense matrices.
//! Spectral work goes through nalgebra's Hermitian eigensolver. Singular
//! values, pseudo-inverses, ranks and range/null bases come from the
//! Hermitian dilation `[[0, A], [A*, 0]]`, whose eigenvalues are `±σ`.
//! Tolerances and eigenvector ordering and phase are fixed here so that
//! results are reproducible.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default absolute tolerance for entrywise equality checks.
pub const EQ_TOL: f64 = 1e-8;
/// Relative PSD tolerance: λ_min ≥ −PSD_TOL·(1 + |λ_max|).
pub const PSD_TOL: f64 = 1e-9;
/// Relative rank cutoff: eigenvalues ≤ RANK_TOL·max(1, λ_max) count as zero.
pub const RANK_TOL: f64 = 1e-10;
/// Singular values ≤ PINV_CUTOFF·max(1, σ_max) are dropped by the pseudo-inverse.
pub const PINV_CUTOFF: f64 = 1e-12;

/// Eigenvalues of a PSD matrix below this fraction of max(1, λ_max) are
/// treated as exact zeros by [`psd_sqrt`].
const SQRT_CLIP: f64 = 1e-12;

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[inline]
pub fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMatrix {
    CMatrix::zeros(r, c)
}

/// Largest entry modulus; 0 for empty matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Eigen-decomposition of the Hermitian dilation `[[0, a], [a*, 0]]`,
/// whose eigenvalues are `±σ_i` with eigenvectors `(u_i, ±v_i)/√2`.
/// nalgebra's SVD can return an inaccurate factorization for rank-deficient
/// input with clustered singular values; its Hermitian eigensolver does not.
fn hermitian_dilation(a: &CMatrix) -> HermitianEigen {
    let (m, n) = a.shape();
    let mut jw = CMatrix::zeros(m + n, m + n);
    jw.view_mut((0, m), (m, n)).copy_from(a);
    jw.view_mut((m, 0), (n, m)).copy_from(&a.adjoint());
    hermitian_eigen(&jw)
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let eig = hermitian_dilation(a);
    eig.values.iter().take(a.nrows().min(a.ncols())).map(|&s| s.max(0.0)).collect()
}

/// Pseudo-inverse dropping singular values `≤ cutoff` (absolute).
fn pinv_with_cutoff(a: &CMatrix, cutoff: f64) -> CMatrix {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return CMatrix::zeros(n, m);
    }
    let eig = hermitian_dilation(a);
    let mut out = CMatrix::zeros(n, m);
    for (k, &s) in eig.values.iter().enumerate() {
        if s <= cutoff || s <= 0.0 {
            break;
        }
        let x = eig.vectors.column(k);
        let (u, v) = (x.rows(0, m), x.rows(m, n));
        out += (v * u.adjoint()) * c(2.0 / s);
    }
    out
}

/// Maximum entrywise deviation from Hermitian symmetry.
pub fn asymmetry(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Kronecker product with the row index of `b` varying fastest.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (p, q) = b.shape();
    let mut out = CMatrix::zeros(a.nrows() * p, a.ncols() * q);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..p {
                for s in 0..q {
                    out[(i * p + r, j * q + s)] = aij * b[(r, s)];
                }
            }
        }
    }
    out
}

/// Spectral data of a Hermitian matrix: eigenvalues in descending order and
/// matching orthonormal eigenvector columns. The first entry of each
/// eigenvector whose modulus exceeds 1e-12 is made real positive.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Eigendecomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigen needs a square matrix");
    if n == 0 {
        return HermitianEigen { values: vec![], vectors: CMatrix::zeros(0, 0) };
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        values.push(eig.eigenvalues[k]);
        let mut v = eig.eigenvectors.column(k).into_owned();
        if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
            let phase = lead.conj() / lead.norm();
            v *= phase;
        }
        vectors.set_column(col, &v);
    }
    HermitianEigen { values, vectors }
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdCertificate {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub tolerance_used: f64,
}

impl PsdCertificate {
    /// Amount by which the PSD condition is violated (0 when PSD).
    pub fn violation(&self) -> f64 {
        (-self.min_eigenvalue).max(0.0)
    }
}

/// Decide whether `m` is PSD. The matrix is symmetrized first; an asymmetry
/// larger than `10·tol` is rejected as [`Error::NonHermitian`].
pub fn is_psd(m: &CMatrix, tol: f64) -> Result<PsdCertificate> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "PSD test needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let asym = asymmetry(m);
    if asym > 10.0 * tol {
        return Err(Error::NonHermitian { asymmetry: asym });
    }
    Ok(psd_certificate_unchecked(m, tol))
}

/// PSD certificate of the Hermitian part of `m`, without the asymmetry gate.
pub fn psd_certificate_unchecked(m: &CMatrix, tol: f64) -> PsdCertificate {
    let eig = hermitian_eigen(m);
    let max = eig.values.first().copied().unwrap_or(0.0);
    let min = eig.values.last().copied().unwrap_or(0.0);
    let tolerance_used = tol * (1.0 + max.abs());
    PsdCertificate { is_psd: min >= -tolerance_used, min_eigenvalue: min, max_eigenvalue: max, tolerance_used }
}

fn require_psd(m: &CMatrix) -> Result<HermitianEigen> {
    let cert = is_psd(m, PSD_TOL)?;
    if !cert.is_psd {
        return Err(Error::NotPsd { min_eigenvalue: cert.min_eigenvalue });
    }
    Ok(hermitian_eigen(m))
}

/// Hermitian PSD square root. Negative eigenvalues inside the PSD tolerance
/// are clipped to zero.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = require_psd(m)?;
    let n = m.nrows();
    let lmax = eig.values.first().copied().unwrap_or(0.0).max(1.0);
    let mut out = CMatrix::zeros(n, n);
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= SQRT_CLIP * lmax {
            continue;
        }
        let v = eig.vectors.column(k);
        out += (v * v.adjoint()) * c(lambda.sqrt());
    }
    Ok(hermitian_part(&out))
}

/// Factor a PSD matrix as `m = X* X` where `X` has exactly rank(m) rows,
/// ordered by descending eigenvalue.
pub fn minimal_rank_factor(m: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    let eig = require_psd(m)?;
    let n = m.nrows();
    let cutoff = rank_tol * eig.values.first().copied().unwrap_or(0.0).max(1.0);
    let kept: Vec<usize> = (0..n).filter(|&k| eig.values[k] > cutoff).collect();
    let mut x = CMatrix::zeros(kept.len(), n);
    for (row, &k) in kept.iter().enumerate() {
        let scaled = eig.vectors.column(k).adjoint() * c(eig.values[k].sqrt());
        x.set_row(row, &scaled);
    }
    Ok(x)
}

/// Moore–Penrose pseudo-inverse with singular-value cutoff
/// `PINV_CUTOFF·max(1, σ_max)`, so rounding noise is never inverted.
pub fn pinv(a: &CMatrix) -> CMatrix {
    let smax = singular_values(a).first().copied().unwrap_or(0.0);
    pinv_with_cutoff(a, PINV_CUTOFF * smax.max(1.0))
}

#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub x: CMatrix,
    /// Frobenius norm of `a·x − b`.
    pub residual: f64,
}

/// Minimal-norm least-squares solution of `a·x = b`.
pub fn least_squares_solve(a: &CMatrix, b: &CMatrix) -> Result<LeastSquares> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "least squares: a has {} rows, b has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    let x = pinv(a) * b;
    let residual = (a * &x - b).norm();
    Ok(LeastSquares { x, residual })
}

/// Numerical rank with cutoff `tol·max(1, σ_max)`.
pub fn rank(a: &CMatrix, tol: f64) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > tol * smax.max(1.0)).count()
}

/// Eigenvectors of an orthogonal projector with eigenvalue near 1.
fn projector_basis(p: &CMatrix) -> CMatrix {
    let eig = hermitian_eigen(p);
    let kept: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > 0.5).collect();
    CMatrix::from_fn(p.nrows(), kept.len(), |i, j| eig.vectors[(i, kept[j])])
}

/// Orthonormal basis (as columns) of the range of `a`; singular values
/// at most `tol·max(1, σ_max)` are treated as zero.
pub fn range_basis(a: &CMatrix, tol: f64) -> CMatrix {
    let (r, cols) = a.shape();
    if r == 0 || cols == 0 {
        return CMatrix::zeros(r, 0);
    }
    let smax = singular_values(a)[0];
    let proj = a * pinv_with_cutoff(a, tol * smax.max(1.0));
    projector_basis(&hermitian_part(&proj))
}

/// Orthonormal basis (as columns) of the null space of `a`, same cutoff as
/// [`range_basis`].
pub fn null_space(a: &CMatrix, tol: f64) -> CMatrix {
    let (r, cols) = a.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if r == 0 {
        return CMatrix::identity(cols, cols);
    }
    let smax = singular_values(a)[0];
    let proj = CMatrix::identity(cols, cols) - pinv_with_cutoff(a, tol * smax.max(1.0)) * a;
    projector_basis(&hermitian_part(&proj))
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
/// The scaled matrix has 1-norm at most 0.5, where 18 terms are far below
/// double precision.
pub fn matrix_exp(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix_exp needs a square matrix");
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let norm1 = (0..n)
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m * c(0.5_f64.powi(squarings));

    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=18 {
        term = (&term * &scaled) * c(1.0 / k as f64);
        result += &term;
        if max_abs(&term) < 1e-18 * max_abs(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[&CMatrix]) -> CMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        out.view_mut((r0, c0), b.shape()).copy_from(*b);
        r0 += b.nrows();
        c0 += b.ncols();
    }
    out
}

/// Column vector as an `n×1` matrix.
pub fn column(v: &CVector) -> CMatrix {
    CMatrix::from_column_slice(v.len(), 1, v.as_slice())
}

/// `⟨u, v⟩`, conjugate-linear in `u`.
pub fn inner(u: &CVector, v: &CVector) -> C64 {
    u.dotc(v)
}

pub fn real_vector(values: &[f64]) -> CVector {
    CVector::from_iterator(values.len(), values.iter().map(|&x| c(x)))
}

pub fn real_matrix(rows: usize, cols: usize, row_major: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, row_major.iter().map(|&x| c(x)))
}
