use alloc::vec::Vec;

use super::{eig_sym, svd, Matrix, SymMatrix};
use crate::Result;

fn threshold(scale: f64, tol: f64) -> f64 {
    tol * scale.max(1.0)
}

/// Number of eigenvalues with `|lambda| > tol * max(1, |lambda|_max)`.
pub fn numeric_rank(x: &SymMatrix, tol: f64) -> Result<usize> {
    let s = eig_sym(x)?;
    let cut = threshold(s.spectral_radius(), tol);
    Ok(s.eigenvalues.iter().filter(|l| l.abs() > cut).count())
}

/// Orthonormal basis (as columns) of the numerically null eigenspace.
pub fn kernel_basis(x: &SymMatrix, tol: f64) -> Result<Matrix> {
    let s = eig_sym(x)?;
    let cut = threshold(s.spectral_radius(), tol);
    let idx: Vec<usize> = (0..s.size())
        .filter(|&k| s.eigenvalues[k].abs() <= cut)
        .collect();
    Ok(s.eigenvectors.select_columns(&idx))
}

/// Rank of a rectangular matrix from its singular values.
pub fn matrix_rank(a: &Matrix, tol: f64) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    let s = svd(a).singular_values;
    let cut = threshold(s[0], tol);
    s.iter().filter(|&&v| v > cut).count()
}

/// Orthonormal basis (as columns) of `{x : A x = 0}` up to tolerance.
pub fn null_space(a: &Matrix, tol: f64) -> Matrix {
    let n = a.cols();
    if a.rows() == 0 || n == 0 {
        return Matrix::identity(n);
    }
    // pad to at least square so that V is complete
    let padded;
    let a = if a.rows() < n {
        padded = Matrix::from_fn(n, n, |i, j| if i < a.rows() { a[(i, j)] } else { 0.0 });
        &padded
    } else {
        a
    };
    let d = svd(a);
    let cut = threshold(d.singular_values[0], tol);
    let idx: Vec<usize> = (0..n).filter(|&k| d.singular_values[k] <= cut).collect();
    d.v.select_columns(&idx)
}
