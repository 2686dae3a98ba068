//! Dense symmetric linear-algebra helpers shared by the estimators.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// `(m + m^T) / 2`
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
pub fn sym_op_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    sym_eigenvalues(&symmetrize(m))
        .into_iter()
        .fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn sym_min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(&symmetrize(m))[0]
}

/// Inverse of a symmetric positive definite matrix through its Cholesky
/// factor. Returns `None` when the factorization fails.
pub fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let chol = m.clone().cholesky()?;
    Some(symmetrize(&chol.inverse()))
}

/// Inverse of a general (possibly indefinite) symmetric matrix through LU.
/// Fails with the smallest singular value when the matrix is numerically
/// singular.
pub fn sym_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sv = sym_eigenvalues(&symmetrize(m));
    let s_min = sv.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
    let s_max = sv.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let tol = f64::EPSILON * m.nrows() as f64 * s_max;
    if !(s_min > tol) {
        return Err(Error::IllConditionedPlugin { smallest: s_min });
    }
    let inv = m
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::IllConditionedPlugin { smallest: s_min })?;
    Ok(symmetrize(&inv))
}

pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}
