use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self * other^T`
    pub fn matmul_t(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "matmul_t dimension mismatch");
        Matrix::from_fn(self.rows, other.rows, |i, j| dot(self.row(i), other.row(j)))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `self^T x`
    pub fn t_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len());
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    /// `self * self^T`, exactly symmetric.
    pub fn gram(&self) -> SymMatrix {
        SymMatrix::from_fn(self.rows, |i, j| dot(self.row(i), self.row(j)))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Dense real symmetric matrix. Every write goes to both triangles, so
/// `get(i, j) == get(j, i)` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            inner: Matrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: Matrix::identity(n),
        }
    }

    /// The all-ones matrix `J`.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| 1.0)
    }

    /// `f` is evaluated on the upper triangle only.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Symmetric part `(X + X^T) / 2` of a square matrix.
    pub fn from_matrix(x: &Matrix) -> Result<Self> {
        if x.rows() != x.cols() {
            return Err(Error::DimensionMismatch {
                expected: x.rows(),
                found: x.cols(),
            });
        }
        Ok(Self::from_fn(x.rows(), |i, j| 0.5 * (x[(i, j)] + x[(j, i)])))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_matrix(&Matrix::from_rows(rows)?)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.inner[(i, j)] = v;
        self.inner[(j, i)] = v;
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.inner.row(i)
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.size()).map(|i| self.get(i, i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.as_slice().iter().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.get(i, i)).sum()
    }

    /// Sum of all entries, `tr(XJ)`.
    pub fn sum(&self) -> f64 {
        self.inner.as_slice().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix {
            inner: self.inner.scaled(s),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.axpy(-1.0, other)
    }

    /// `self + a * other`
    pub fn axpy(&self, a: f64, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.size(), other.size());
        SymMatrix::from_fn(self.size(), |i, j| self.get(i, j) + a * other.get(i, j))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.inner.mul_vec(x)
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    /// Inner product `tr(self * other)`.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        dot(self.inner.as_slice(), other.inner.as_slice())
    }

    pub fn matmul(&self, other: &SymMatrix) -> Matrix {
        self.inner.matmul(&other.inner)
    }

    /// Kronecker product; the entry at `(i*q + l, j*q + k)` is `X_ij Y_lk`,
    /// matching the row-major product-vertex flattening.
    pub fn kron(&self, other: &SymMatrix) -> SymMatrix {
        let q = other.size();
        SymMatrix::from_fn(self.size() * q, |a, b| {
            self.get(a / q, b / q) * other.get(a % q, b % q)
        })
    }

    /// Entrywise (Schur) product.
    pub fn schur(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(SymMatrix::from_fn(self.size(), |i, j| self.get(i, j) * other.get(i, j)))
    }

    /// `B X B^T` for a general (square or rectangular) `B`.
    pub fn congruence(&self, b: &Matrix) -> SymMatrix {
        let bx = b.matmul(&self.inner);
        SymMatrix::from_fn(b.rows(), |i, j| dot(bx.row(i), b.row(j)))
    }

    /// Principal submatrix on the given index list.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let k = SymMatrix::identity(2).kron(&SymMatrix::identity(3));
        assert_eq!(k, SymMatrix::identity(6));
    }

    #[test]
    fn schur_with_ones_is_identity_map() {
        let x = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, -3.0]]).unwrap();
        assert_eq!(SymMatrix::ones(2).schur(&x).unwrap(), x);
        assert!(x.schur(&SymMatrix::ones(3)).is_err());
    }

    #[test]
    fn set_keeps_symmetry() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 2, 5.0);
        assert_eq!(m.get(2, 0), 5.0);
        assert_eq!(m.sum(), 10.0);
    }
}
