//! One-sided (Hestenes) Jacobi SVD.

use alloc::vec::Vec;

use super::matrix::dot;
use super::Matrix;

/// `A = U diag(s) V^T` with `s` nonincreasing. For an `m x n` input, `U` is
/// `m x k` and `V` is `n x k` with `k = min(m, n)`. Columns of `U` paired
/// with zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

pub fn svd(a: &Matrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.transpose());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let (m, n) = (a.rows(), a.cols());
    // work on columns: store A^T row-wise so each column is contiguous
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let tol = 1e-15;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= tol * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let sv: Vec<f64> = cols.iter().map(|c| libm::sqrt(dot(c, c))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sv[y].total_cmp(&sv[x]).then(x.cmp(&y)));
    let u = Matrix::from_fn(m, n, |i, j| {
        let k = order[j];
        if sv[k] > 0.0 {
            cols[k][i] / sv[k]
        } else {
            0.0
        }
    });
    let v = Matrix::from_fn(n, n, |i, j| vcols[order[j]][i]);
    Svd {
        u,
        singular_values: order.iter().map(|&k| sv[k]).collect(),
        v,
    }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_rectangular() {
        for a in [
            Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap(),
            Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap(),
        ] {
            let d = svd(&a);
            let k = d.singular_values.len();
            let back = Matrix::from_fn(a.rows(), a.cols(), |i, j| {
                (0..k).map(|l| d.u[(i, l)] * d.singular_values[l] * d.v[(j, l)]).sum()
            });
            assert!(back.sub(&a).max_abs() < 1e-12);
            assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_one_has_one_nonzero_value() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        let d = svd(&a);
        assert!(d.singular_values[1] < 1e-12);
    }
}
