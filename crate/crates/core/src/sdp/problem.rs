use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{Matrix, SymMatrix};
use crate::{Error, Result};

/// A linear functional on `(X, x)` with `X` symmetric and `x` a vector.
///
/// A PSD entry `(i, j, c)` contributes `c * X_ij` (each unordered pair is
/// counted once, so an off-diagonal entry corresponds to `c/2` in both
/// triangles of the representing matrix).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearFunctional {
    pub psd: Vec<(usize, usize, f64)>,
    pub nonneg: Vec<(usize, f64)>,
}

impl LinearFunctional {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_psd(mut self, i: usize, j: usize, c: f64) -> Self {
        self.psd.push((i.min(j), i.max(j), c));
        self
    }

    pub fn with_nonneg(mut self, k: usize, c: f64) -> Self {
        self.nonneg.push((k, c));
        self
    }

    pub fn eval(&self, x: &Matrix, lin: &[f64]) -> f64 {
        let a: f64 = self.psd.iter().map(|&(i, j, c)| c * x[(i, j)]).sum();
        let b: f64 = self.nonneg.iter().map(|&(k, c)| c * lin[k]).sum();
        a + b
    }

    /// Adds `y` times the representing matrix / vector.
    pub fn add_adjoint(&self, y: f64, x: &mut Matrix, lin: &mut [f64]) {
        for &(i, j, c) in &self.psd {
            if i == j {
                x[(i, i)] += y * c;
            } else {
                x[(i, j)] += 0.5 * y * c;
                x[(j, i)] += 0.5 * y * c;
            }
        }
        for &(k, c) in &self.nonneg {
            lin[k] += y * c;
        }
    }

    pub fn psd_matrix(&self, n: usize) -> SymMatrix {
        let mut m = Matrix::zeros(n, n);
        let mut scratch = vec![0.0; self.nonneg.iter().map(|e| e.0 + 1).max().unwrap_or(0)];
        self.add_adjoint(1.0, &mut m, &mut scratch);
        SymMatrix::from_fn(n, |i, j| m[(i, j)])
    }

    pub fn nonneg_vector(&self, p: usize) -> Vec<f64> {
        let mut v = vec![0.0; p];
        for &(k, c) in &self.nonneg {
            v[k] += c;
        }
        v
    }

    /// Squared norm of the represented element (trace inner product on the
    /// PSD part plus the Euclidean one on the vector part).
    fn merged(&self) -> (BTreeMap<(usize, usize), f64>, BTreeMap<usize, f64>) {
        let mut psd = BTreeMap::new();
        for &(i, j, c) in &self.psd {
            *psd.entry((i, j)).or_insert(0.0) += c;
        }
        let mut lin = BTreeMap::new();
        for &(k, c) in &self.nonneg {
            *lin.entry(k).or_insert(0.0) += c;
        }
        (psd, lin)
    }

    pub fn norm(&self) -> f64 {
        let (psd, lin) = self.merged();
        let a: f64 = psd
            .iter()
            .map(|(&(i, j), c)| if i == j { c * c } else { 0.5 * c * c })
            .sum();
        let b: f64 = lin.values().map(|c| c * c).sum();
        libm::sqrt(a + b)
    }
}

/// `min <C, X> + c.x` subject to `<A_k, X> + a_k.x = b_k`, `X ⪰ 0`, `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicProblem {
    pub psd_block_size: usize,
    pub nonneg_block_size: usize,
    pub objective: LinearFunctional,
    pub constraints: Vec<(LinearFunctional, f64)>,
}

impl ConicProblem {
    pub fn new(psd_block_size: usize, nonneg_block_size: usize) -> Self {
        Self {
            psd_block_size,
            nonneg_block_size,
            objective: LinearFunctional::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn validate(&self) -> Result<()> {
        let (n, p) = (self.psd_block_size, self.nonneg_block_size);
        let check = |f: &LinearFunctional| -> Result<()> {
            for &(i, j, c) in &f.psd {
                if i > j || j >= n {
                    return Err(Error::param("PSD entry index out of range or not upper-triangular"));
                }
                if !c.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
            for &(k, c) in &f.nonneg {
                if k >= p {
                    return Err(Error::param("nonnegative-block index out of range"));
                }
                if !c.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
            Ok(())
        };
        check(&self.objective)?;
        for (f, b) in &self.constraints {
            check(f)?;
            if !b.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    }

    /// `A(X, x)` for every constraint.
    pub fn apply(&self, x: &Matrix, lin: &[f64]) -> Vec<f64> {
        self.constraints.iter().map(|(f, _)| f.eval(x, lin)).collect()
    }

    pub fn rhs(&self) -> Vec<f64> {
        self.constraints.iter().map(|(_, b)| *b).collect()
    }

    /// Indices of a maximal linearly independent prefix-greedy subset of the
    /// constraint functionals.
    pub fn independent_constraints(&self) -> Vec<usize> {
        let m = self.constraints.len();
        let merged: Vec<_> = self.constraints.iter().map(|(f, _)| f.merged()).collect();
        let mut psd_index: BTreeMap<(usize, usize), Vec<(usize, f64)>> = BTreeMap::new();
        let mut lin_index: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
        for (k, (psd, lin)) in merged.iter().enumerate() {
            for (&pos, &c) in psd {
                psd_index.entry(pos).or_default().push((k, c));
            }
            for (&pos, &c) in lin {
                lin_index.entry(pos).or_default().push((k, c));
            }
        }
        let mut gram = vec![0.0; m * m];
        let mut accumulate = |list: &[(usize, f64)], w: f64| {
            for &(k, a) in list {
                for &(l, b) in list {
                    gram[k * m + l] += w * a * b;
                }
            }
        };
        for (&(i, j), list) in &psd_index {
            accumulate(list, if i == j { 1.0 } else { 0.5 });
        }
        for list in lin_index.values() {
            accumulate(list, 1.0);
        }
        // incremental Cholesky over the accepted set
        let mut accepted: Vec<usize> = Vec::new();
        let mut factor: Vec<Vec<f64>> = Vec::new();
        for k in 0..m {
            let gkk = gram[k * m + k];
            if gkk <= 0.0 {
                continue;
            }
            let mut l = Vec::with_capacity(accepted.len());
            for (r, &a) in accepted.iter().enumerate() {
                let mut s = gram[a * m + k];
                for q in 0..r {
                    s -= factor[r][q] * l[q];
                }
                l.push(s / factor[r][r]);
            }
            let d = gkk - l.iter().map(|v| v * v).sum::<f64>();
            if d > 1e-10 * gkk {
                l.push(libm::sqrt(d));
                factor.push(l);
                accepted.push(k);
            }
        }
        accepted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependent_rows_dropped() {
        let mut p = ConicProblem::new(2, 1);
        p.constraints.push((LinearFunctional::new().with_psd(0, 0, 1.0), 1.0));
        p.constraints.push((LinearFunctional::new().with_psd(0, 0, 2.0), 2.0));
        p.constraints.push((LinearFunctional::new().with_psd(0, 1, 1.0).with_nonneg(0, 1.0), 0.0));
        assert_eq!(p.independent_constraints(), vec![0, 2]);
    }

    #[test]
    fn adjoint_matches_eval() {
        let f = LinearFunctional::new().with_psd(0, 1, 2.0).with_psd(1, 1, -1.0);
        let a = f.psd_matrix(2);
        let x = Matrix::from_rows(&[vec![1.0, 3.0], vec![3.0, 5.0]]).unwrap();
        let direct = f.eval(&x, &[]);
        let via_trace = SymMatrix::from_matrix(&x).unwrap().inner(&a);
        assert!((direct - via_trace).abs() < 1e-14);
        assert!((f.norm() * f.norm() - a.frobenius_norm().powi(2)).abs() < 1e-14);
    }
}
