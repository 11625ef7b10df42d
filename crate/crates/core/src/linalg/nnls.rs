//! Nonnegative least squares (Lawson–Hanson active set) and the conical
//! membership test built on it.

use alloc::vec;
use alloc::vec::Vec;

use super::matrix::{dot, norm};
use super::{svd, Matrix};
use crate::{Error, Result};

/// Result of `nnls_membership`.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// `sum_j coefficients[j] * g_j` reproduces the target.
    Feasible { coefficients: Vec<f64>, residual: f64 },
    /// Best nonnegative fit and its residual.
    Infeasible { coefficients: Vec<f64>, residual: f64 },
}

impl Membership {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Membership::Feasible { .. })
    }

    pub fn coefficients(&self) -> &[f64] {
        match self {
            Membership::Feasible { coefficients, .. } | Membership::Infeasible { coefficients, .. } => {
                coefficients
            }
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            Membership::Feasible { residual, .. } | Membership::Infeasible { residual, .. } => *residual,
        }
    }
}

/// `min ||G x - b||` over `x >= 0`, where the columns of `G` are the
/// generators.
pub fn nnls(g: &Matrix, b: &[f64]) -> Vec<f64> {
    let (m, k) = (g.rows(), g.cols());
    assert_eq!(m, b.len());
    let mut x = vec![0.0; k];
    let mut passive = vec![false; k];
    let scale = g.max_abs().max(1e-300) * norm(b).max(1.0);
    let wtol = 1e-13 * scale * (m.max(k) as f64);

    let gradient = |x: &[f64]| -> Vec<f64> {
        let r: Vec<f64> = g.mul_vec(x).iter().zip(b).map(|(gx, bi)| bi - gx).collect();
        g.t_mul_vec(&r)
    };

    let mut w = gradient(&x);
    for _outer in 0..3 * k + 10 {
        let cand = (0..k)
            .filter(|&j| !passive[j] && w[j] > wtol)
            .max_by(|&a, &c| w[a].total_cmp(&w[c]).then(c.cmp(&a)));
        let Some(j) = cand else { break };
        passive[j] = true;
        let mut progressed = false;
        for _inner in 0..3 * k + 10 {
            let z = restricted_lstsq(g, b, &passive);
            if (0..k).all(|i| !passive[i] || z[i] > 0.0) {
                x = z;
                progressed = true;
                break;
            }
            let mut alpha = f64::INFINITY;
            for i in 0..k {
                if passive[i] && z[i] <= 0.0 {
                    let denom = x[i] - z[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            for i in 0..k {
                if passive[i] {
                    x[i] += alpha * (z[i] - x[i]);
                    if x[i] <= 1e-15 * (1.0 + z[i].abs()) {
                        x[i] = 0.0;
                        passive[i] = false;
                    }
                }
            }
        }
        if !progressed {
            // the newly added column could not be kept positive
            passive[j] = false;
        }
        w = gradient(&x);
        if !progressed && w[j] > wtol {
            break;
        }
    }
    for v in &mut x {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    x
}

fn restricted_lstsq(g: &Matrix, b: &[f64], passive: &[bool]) -> Vec<f64> {
    let idx: Vec<usize> = (0..g.cols()).filter(|&j| passive[j]).collect();
    let sub = g.select_columns(&idx);
    let d = svd(&sub);
    let smax = d.singular_values.first().copied().unwrap_or(0.0);
    let cut = 1e-12 * smax.max(1e-300) * (sub.rows().max(sub.cols()) as f64);
    let mut z = vec![0.0; g.cols()];
    let mut coeff = vec![0.0; idx.len()];
    for (l, &s) in d.singular_values.iter().enumerate() {
        if s <= cut {
            continue;
        }
        let ub = dot(&d.u.column(l), b) / s;
        for (c, vi) in coeff.iter_mut().zip(d.v.column(l)) {
            *c += vi * ub;
        }
    }
    for (pos, &j) in idx.iter().enumerate() {
        z[j] = coeff[pos];
    }
    z
}

/// Decides `target ∈ cone(generators)` within `tol * (1 + ||target||)`.
pub fn nnls_membership(target: &[f64], generators: &[Vec<f64>], tol: f64) -> Result<Membership> {
    let dim = target.len();
    if let Some(bad) = generators.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    let bound = tol * (1.0 + norm(target));
    if generators.is_empty() {
        let residual = norm(target);
        return Ok(if residual <= bound {
            Membership::Feasible {
                coefficients: Vec::new(),
                residual,
            }
        } else {
            Membership::Infeasible {
                coefficients: Vec::new(),
                residual,
            }
        });
    }
    let g = Matrix::from_fn(dim, generators.len(), |i, j| generators[j][i]);
    let coefficients = nnls(&g, target);
    let fit = g.mul_vec(&coefficients);
    let residual = libm::sqrt(fit.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum());
    Ok(if residual <= bound {
        Membership::Feasible {
            coefficients,
            residual,
        }
    } else {
        Membership::Infeasible {
            coefficients,
            residual,
        }
    })
}
