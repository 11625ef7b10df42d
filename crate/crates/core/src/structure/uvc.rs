use alloc::vec;
use alloc::vec::Vec;

use crate::coloring::{chi_v, ChiResult, VectorColoring};
use crate::graph::Graph;
use crate::linalg::{eig_sym, lp_solve, null_space, svd, LpOutcome, LpProblem, Matrix, SymMatrix};
use crate::{Error, Result, Tolerances};

/// A direction `R` (symmetric, `d x d`) along which the Gram matrix
/// `P (I + eps R) P^T` stays optimal for small `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct RPerturbation {
    pub r: SymMatrix,
    /// `max_i |p_i^T R p_i|`
    pub equality_residual: f64,
    /// `p_i^T R p_j` on the tight edges.
    pub tight_edge_values: Vec<((usize, usize), f64)>,
    /// Largest `eps` keeping `P (I + eps R) P^T` feasible (infinite when
    /// nothing binds).
    pub epsilon_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UvcVerdict {
    Unique,
    NotUnique,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UvcReport {
    pub verdict: UvcVerdict,
    pub certificate: Option<RPerturbation>,
    /// 1 when decided by the equality kernel, 2 when by the LP stage.
    pub stage: u8,
    pub rank: usize,
    /// Dimension of the kernel of the equality system.
    pub kernel_dimension: usize,
    /// Smallest singular value of the (row-normalized) equality system.
    pub smallest_singular_value: f64,
    /// Optimum of the LP stage (sum of tight-edge values), when run.
    pub lp_optimum: Option<f64>,
    pub marginal: bool,
}

/// Index pairs `(a, b)`, `a <= b`, parametrizing a symmetric `d x d` matrix.
fn sym_basis(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for a in 0..d {
        for b in a..d {
            out.push((a, b));
        }
    }
    out
}

/// Row of `R -> p^T R q` in the symmetric basis.
fn bilinear_row(p: &[f64], q: &[f64], basis: &[(usize, usize)]) -> Vec<f64> {
    basis
        .iter()
        .map(|&(a, b)| {
            if a == b {
                p[a] * q[a]
            } else {
                p[a] * q[b] + p[b] * q[a]
            }
        })
        .collect()
}

fn unit(row: Vec<f64>) -> Vec<f64> {
    let n = libm::sqrt(row.iter().map(|v| v * v).sum());
    if n > 0.0 {
        row.into_iter().map(|v| v / n).collect()
    } else {
        row
    }
}

fn assemble(d: usize, basis: &[(usize, usize)], x: &[f64]) -> SymMatrix {
    let mut r = SymMatrix::zeros(d);
    for (&(a, b), &v) in basis.iter().zip(x) {
        r.set(a, b, v);
    }
    r
}

fn bilinear(p: &[f64], r: &SymMatrix, q: &[f64]) -> f64 {
    let rq = r.mul_vec(q);
    p.iter().zip(&rq).map(|(a, b)| a * b).sum()
}

fn describe(g: &Graph, vc: &VectorColoring, r: SymMatrix) -> Result<RPerturbation> {
    let n = g.order();
    let equality_residual = (0..n)
        .map(|i| bilinear(vc.vector(i), &r, vc.vector(i)).abs())
        .fold(0.0, f64::max);
    let tight_edge_values = vc
        .tight_edges
        .iter()
        .map(|&(i, j)| ((i, j), bilinear(vc.vector(i), &r, vc.vector(j))))
        .collect();
    let epsilon_max = epsilon_bound(g, vc, &r)?;
    Ok(RPerturbation {
        r,
        equality_residual,
        tight_edge_values,
        epsilon_max,
    })
}

/// Largest feasible scaling: `eps <= 1/|lambda_min(R)|` and, on each slack
/// edge with `p_i^T R p_j > 0`, `eps p_i^T R p_j <= -1 - p_i^T p_j`.
fn epsilon_bound(g: &Graph, vc: &VectorColoring, r: &SymMatrix) -> Result<f64> {
    let lmin = eig_sym(r)?.lambda_min();
    let mut eps = if lmin < 0.0 { -1.0 / lmin } else { f64::INFINITY };
    for &(i, j) in g.edges() {
        if vc.is_tight(i, j) {
            continue;
        }
        let v = bilinear(vc.vector(i), r, vc.vector(j));
        if v > 0.0 {
            let room = -1.0 - vc.gram.get(i, j);
            eps = eps.min(room.max(0.0) / v);
        }
    }
    Ok(eps)
}

/// Decides unique vector colorability from a maximum-rank optimal
/// coloring.
pub fn uvc_check_with(g: &Graph, chi: &ChiResult, tol: &Tolerances) -> Result<UvcReport> {
    let vc = &chi.coloring;
    let d = vc.rank();
    let n = g.order();
    let basis = sym_basis(d);
    if d == 0 {
        return Ok(UvcReport {
            verdict: UvcVerdict::Unique,
            certificate: None,
            stage: 1,
            rank: 0,
            kernel_dimension: 0,
            smallest_singular_value: 0.0,
            lp_optimum: None,
            marginal: false,
        });
    }
    let mut eq_rows: Vec<Vec<f64>> = (0..n)
        .map(|i| unit(bilinear_row(vc.vector(i), vc.vector(i), &basis)))
        .collect();
    let edge_rows: Vec<Vec<f64>> = vc
        .tight_edges
        .iter()
        .map(|&(i, j)| unit(bilinear_row(vc.vector(i), vc.vector(j), &basis)))
        .collect();

    // stage 1: kernel of the equality system
    let mut all = eq_rows.clone();
    all.extend(edge_rows.iter().cloned());
    let sys = Matrix::from_fn(all.len(), basis.len(), |r, c| all[r][c]);
    let kernel = null_space(&sys, tol.rank_tol);
    let sv = svd(&sys).singular_values;
    let smallest = if sys.rows() >= sys.cols() {
        sv.last().copied().unwrap_or(0.0)
    } else {
        0.0
    };
    let smax = sv.first().copied().unwrap_or(0.0).max(1.0);
    let cut = tol.rank_tol * smax;
    let near = |s: f64| s > 0.1 * cut && s <= 10.0 * cut;
    let marginal_stage1 = sv.iter().any(|&s| near(s));
    if kernel.cols() > 0 {
        let x = kernel.column(0);
        let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let x: Vec<f64> = x.iter().map(|v| v / scale).collect();
        let r = assemble(d, &basis, &x);
        return Ok(UvcReport {
            verdict: UvcVerdict::NotUnique,
            certificate: Some(describe(g, vc, r)?),
            stage: 1,
            rank: d,
            kernel_dimension: kernel.cols(),
            smallest_singular_value: smallest,
            lp_optimum: None,
            marginal: marginal_stage1,
        });
    }

    // stage 2: the tight-edge values are all <= 0, so some edge can be made
    // strictly negative exactly when their sum can
    let mut lp = LpProblem::boxed(basis.len(), -1.0, 1.0);
    for row in eq_rows.drain(..) {
        lp.equalities.push((row, 0.0));
    }
    let mut total = vec![0.0; basis.len()];
    for row in &edge_rows {
        lp.inequalities.push((row.clone(), 0.0));
        for (t, v) in total.iter_mut().zip(row) {
            *t -= v;
        }
    }
    lp.objective = Some(total);
    let (opt, x) = match lp_solve(&lp)? {
        LpOutcome::Optimal { x, objective } => (-objective, x),
        LpOutcome::Infeasible => {
            return Err(Error::Construction("uniqueness LP lost the zero solution".into()));
        }
    };
    let threshold = 1e-7;
    let marginal = marginal_stage1 || (opt < -0.1 * threshold && opt >= -10.0 * threshold);
    if opt < -threshold {
        let r = assemble(d, &basis, &x);
        return Ok(UvcReport {
            verdict: UvcVerdict::NotUnique,
            certificate: Some(describe(g, vc, r)?),
            stage: 2,
            rank: d,
            kernel_dimension: 0,
            smallest_singular_value: smallest,
            lp_optimum: Some(opt),
            marginal,
        });
    }
    Ok(UvcReport {
        verdict: UvcVerdict::Unique,
        certificate: None,
        stage: 2,
        rank: d,
        kernel_dimension: 0,
        smallest_singular_value: smallest,
        lp_optimum: Some(opt),
        marginal,
    })
}

pub fn uvc_check(g: &Graph, tol: &Tolerances) -> Result<UvcReport> {
    if g.is_empty() {
        return Err(Error::precondition("uniqueness check needs at least one edge"));
    }
    uvc_check_with(g, &chi_v(g, tol)?, tol)
}

/// Builds the optimal coloring `P (I + eps R) P^T` with `eps` half of the
/// largest feasible scaling (or one when nothing binds), and validates it.
pub fn second_coloring(g: &Graph, vc: &VectorColoring, r: &RPerturbation, tol: &Tolerances) -> Result<VectorColoring> {
    let d = vc.rank();
    if r.r.size() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: r.r.size(),
        });
    }
    if r.r.max_abs() == 0.0 {
        return Err(Error::precondition("the perturbation direction is zero"));
    }
    let eps_max = epsilon_bound(g, vc, &r.r)?;
    let eps = if eps_max.is_finite() { 0.5 * eps_max } else { 1.0 };
    if !(eps > 1e-12) {
        return Err(Error::Construction("feasible scaling collapsed to zero".into()));
    }
    let mut inner = r.r.scaled(eps);
    for a in 0..d {
        inner.set(a, a, inner.get(a, a) + 1.0);
    }
    let gram = inner.congruence(&vc.factors);
    let mut out = VectorColoring::from_gram(g, gram, tol)?;
    out.t = vc.t;
    out.check_feasible(g, tol)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cliques_are_unique() {
        let tol = Tolerances::default();
        for m in 2..=6 {
            let rep = uvc_check(&Graph::complete(m).unwrap(), &tol).unwrap();
            assert_eq!(rep.verdict, UvcVerdict::Unique, "K_{m}");
        }
    }

    #[test]
    fn pendant_moves() {
        let tol = Tolerances::default();
        let g = Graph::complete(3).unwrap().with_pendant(0).unwrap();
        let chi = chi_v(&g, &tol).unwrap();
        let rep = uvc_check_with(&g, &chi, &tol).unwrap();
        assert_eq!(rep.verdict, UvcVerdict::NotUnique);
        let cert = rep.certificate.unwrap();
        let other = second_coloring(&g, &chi.coloring, &cert, &tol).unwrap();
        assert!(other.gram.sub(&chi.coloring.gram).frobenius_norm() > 1e-6);
        assert!(other.gram.get(0, 3) <= -1.0 + 1e-9);
    }

    #[test]
    fn two_triangles_via_kernel() {
        let tol = Tolerances::default();
        let k3 = Graph::complete(3).unwrap();
        let g = k3.disjoint_union(&k3);
        let chi = chi_v(&g, &tol).unwrap();
        let rep = uvc_check_with(&g, &chi, &tol).unwrap();
        assert_eq!(rep.verdict, UvcVerdict::NotUnique);
        assert_eq!(rep.stage, 1);
        let other = second_coloring(&g, &chi.coloring, rep.certificate.as_ref().unwrap(), &tol).unwrap();
        assert!(other.gram.sub(&chi.coloring.gram).frobenius_norm() > 1e-6);
    }

    #[test]
    fn zero_direction_rejected() {
        let tol = Tolerances::default();
        let g = Graph::complete(3).unwrap();
        let chi = chi_v(&g, &tol).unwrap();
        let zero = RPerturbation {
            r: SymMatrix::zeros(2),
            equality_residual: 0.0,
            tight_edge_values: Vec::new(),
            epsilon_max: f64::INFINITY,
        };
        assert!(second_coloring(&g, &chi.coloring, &zero, &tol).is_err());
    }
}
