//! Symmetric eigensolver: Householder tridiagonalization followed by the
//! implicit-shift QL iteration (the EISPACK `tred2`/`tql2` pair).

use alloc::vec;
use alloc::vec::Vec;

use super::{Matrix, SymMatrix};
use crate::{Error, Result};

/// Eigenvalues in nonincreasing order with orthonormal eigenvectors stored
/// as the matching columns of `eigenvectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest eigenvalue; `0` for the empty matrix.
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Least eigenvalue; `0` for the empty matrix.
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.lambda_max().abs().max(self.lambda_min().abs())
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k)
    }

    /// `Q diag(f(lambda)) Q^T`
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> SymMatrix {
        let n = self.size();
        let q = &self.eigenvectors;
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(n, |i, j| (0..n).map(|k| q[(i, k)] * w[k] * q[(j, k)]).sum())
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.map(|l| l)
    }

    /// Projector onto the span of eigenvectors whose eigenvalue lies within
    /// `tol` of `value`, together with that multiplicity.
    pub fn eigenprojector(&self, value: f64, tol: f64) -> (SymMatrix, usize) {
        let n = self.size();
        let idx: Vec<usize> = (0..n)
            .filter(|&k| (self.eigenvalues[k] - value).abs() <= tol)
            .collect();
        let q = &self.eigenvectors;
        let proj = SymMatrix::from_fn(n, |i, j| idx.iter().map(|&k| q[(i, k)] * q[(j, k)]).sum());
        (proj, idx.len())
    }
}

/// Full spectral decomposition of a symmetric matrix.
pub fn eig_sym(x: &SymMatrix) -> Result<SpectralDecomposition> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = x.size();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: Matrix::zeros(0, 0),
        });
    }
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| x.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e, true);
    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, j| v[i][order[j]]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, nonincreasing.
pub fn eigvals_sym(x: &SymMatrix) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = x.size();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| x.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e, false);
    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    d.sort_by(|a, b| b.total_cmp(a));
    Ok(d)
}

fn tred2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }
    // accumulate transformations
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

fn tql2(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], vectors: bool) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        // e[n - 1] is zero, so the scan stops there even if NaNs crept in
        let mut m = l;
        while m < n - 1 && !(e[m].abs() <= eps * tst1) {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut().filter(|_| vectors) {
                        h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || !e[l].is_finite() || iter > 300 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}
