use alloc::vec::Vec;

use super::{eig_sym, Matrix, SymMatrix};

/// Lower-triangular `L` with `L L^T = X`, or `None` when a pivot is not
/// strictly positive.
pub fn cholesky(x: &SymMatrix) -> Option<Matrix> {
    let n = x.size();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = x.get(j, j);
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = libm::sqrt(d);
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = x.get(i, j);
            let (ri, rj) = (l.row(i), l.row(j));
            for k in 0..j {
                s -= ri[k] * rj[k];
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// Outcome of a tolerant PSD test.
#[derive(Debug, Clone, PartialEq)]
pub enum PsdCheck {
    /// Cholesky factor of `X` (or of `X + shift*I` when `X` itself is
    /// singular but within tolerance).
    Factor(Matrix),
    /// Unit vector `witness` with `witness^T X witness = value < 0`.
    Violation { witness: Vec<f64>, value: f64 },
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCheck::Factor(_))
    }
}

/// Accepts `X` when `lambda_min(X) >= -tol * max(1, |X|_F)`.
pub fn cholesky_psd(x: &SymMatrix, tol: f64) -> PsdCheck {
    if let Some(l) = cholesky(x) {
        return PsdCheck::Factor(l);
    }
    let n = x.size();
    let shift = 2.0 * tol * x.frobenius_norm().max(1.0);
    let mut shifted = x.clone();
    for i in 0..n {
        shifted.set(i, i, x.get(i, i) + shift);
    }
    if let Some(l) = cholesky(&shifted) {
        return PsdCheck::Factor(l);
    }
    match eig_sym(x) {
        Ok(s) => PsdCheck::Violation {
            witness: s.vector(n - 1),
            value: s.lambda_min(),
        },
        Err(_) => PsdCheck::Violation {
            witness: Vec::new(),
            value: f64::NAN,
        },
    }
}

/// Solves `L L^T x = b` given the lower factor.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y: Vec<f64> = b.to_vec();
    for i in 0..n {
        let row = l.row(i);
        let mut s = y[i];
        for k in 0..i {
            s -= row[k] * y[k];
        }
        y[i] = s / row[i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Solves `L y = b` in place for lower-triangular `L`.
pub fn forward_substitute(l: &Matrix, b: &mut [f64]) {
    for i in 0..l.rows() {
        let row = l.row(i);
        let mut s = b[i];
        for k in 0..i {
            s -= row[k] * b[k];
        }
        b[i] = s / row[i];
    }
}

/// Inverse of a lower-triangular matrix.
pub fn lower_inverse(l: &Matrix) -> Matrix {
    let n = l.rows();
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        let mut e = alloc::vec![0.0; n];
        e[j] = 1.0;
        forward_substitute(l, &mut e);
        for i in 0..n {
            inv[(i, j)] = e[i];
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identity_factor() {
        match cholesky_psd(&SymMatrix::identity(3), 1e-9) {
            PsdCheck::Factor(l) => assert_eq!(l, Matrix::identity(3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn indefinite_witness() {
        let x = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        match cholesky_psd(&x, 1e-9) {
            PsdCheck::Violation { witness, value } => {
                assert!((value + 1.0).abs() < 1e-12);
                let r = 1.0 / libm::sqrt(2.0);
                assert!((witness[0].abs() - r).abs() < 1e-12);
                assert!((witness[0] + witness[1]).abs() < 1e-12);
                assert!(x.quad_form(&witness) < 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singular_psd_accepted() {
        for m in 1..=10 {
            let x = SymMatrix::identity(m).scaled(m as f64).sub(&SymMatrix::ones(m));
            assert!(cholesky_psd(&x, 1e-9).is_psd(), "m = {m}");
        }
    }

    #[test]
    fn solve_round_trip() {
        let x = SymMatrix::from_rows(&[vec![4.0, 1.0, 0.5], vec![1.0, 3.0, 0.2], vec![0.5, 0.2, 2.0]])
            .unwrap();
        let l = cholesky(&x).unwrap();
        let b = vec![1.0, -2.0, 0.5];
        let sol = cholesky_solve(&l, &b);
        let back = x.mul_vec(&sol);
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).abs() < 1e-13);
        }
        let li = lower_inverse(&l);
        assert!(li.matmul(&l).sub(&Matrix::identity(3)).max_abs() < 1e-14);
    }
}
