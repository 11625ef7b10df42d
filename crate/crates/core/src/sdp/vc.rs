//! Conic encodings of the vector-coloring program.
//!
//! The PSD variable is the Gram matrix `M`. Rows `0..n-1` force every
//! diagonal entry to equal the last one, and one row per edge reads
//! `M_ij + s_ij = -1` (or `M_ij = -1` in the strict program). The objective
//! is `tr(M)/n = t - 1`. With this layout the dual slack on the PSD block is
//! exactly a feasible `B`: trace one, zero on non-edges, and `B_ij = -y_ij/2`
//! on edges.

use alloc::format;

use super::{ConicProblem, ConicSolution, LinearFunctional};
use crate::graph::Graph;
use crate::linalg::{eigvals_sym, SymMatrix};
use crate::{Error, Result};

fn base_problem(g: &Graph, nonneg: usize) -> ConicProblem {
    let n = g.order();
    let mut p = ConicProblem::new(n, nonneg);
    let w = 1.0 / n.max(1) as f64;
    let mut obj = LinearFunctional::new();
    for i in 0..n {
        obj = obj.with_psd(i, i, w);
    }
    p.objective = obj;
    if n > 0 {
        for i in 0..n - 1 {
            let f = LinearFunctional::new().with_psd(i, i, 1.0).with_psd(n - 1, n - 1, -1.0);
            p.constraints.push((f, 0.0));
        }
    }
    p
}

/// Row index of the first edge constraint.
pub(crate) fn edge_row_offset(g: &Graph) -> usize {
    g.order().saturating_sub(1)
}

pub fn vc_primal_problem(g: &Graph) -> ConicProblem {
    let mut p = base_problem(g, g.size());
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        let f = LinearFunctional::new().with_psd(i, j, 1.0).with_nonneg(e, 1.0);
        p.constraints.push((f, -1.0));
    }
    p
}

pub fn svc_primal_problem(g: &Graph) -> ConicProblem {
    let mut p = base_problem(g, 0);
    for &(i, j) in g.edges() {
        p.constraints.push((LinearFunctional::new().with_psd(i, j, 1.0), -1.0));
    }
    p
}

/// Reassembles `B = C - A*(y)` from the multipliers of a solution of
/// `vc_primal_problem(g)`.
///
/// Edge entries below zero by no more than `tol` are clamped to zero; larger
/// violations, or a least eigenvalue below `-tol * max(1, |B|)`, are errors.
pub fn vc_dual_extract(solution: &ConicSolution, g: &Graph, tol: f64) -> Result<SymMatrix> {
    let n = g.order();
    let off = edge_row_offset(g);
    let y = &solution.dual_multipliers;
    if n == 0 || y.len() != off + g.size() || solution.primal_psd.size() != n {
        return Err(Error::DimensionMismatch {
            expected: off + g.size(),
            found: y.len(),
        });
    }
    let w = 1.0 / n as f64;
    let mut b = SymMatrix::zeros(n);
    let mut last = w;
    for i in 0..off {
        b.set(i, i, w - y[i]);
        last += y[i];
    }
    b.set(n - 1, n - 1, last);
    for (e, &(i, j)) in g.edges().iter().enumerate() {
        let v = -0.5 * y[off + e];
        if v < -tol {
            return Err(Error::DualInfeasible(format!(
                "edge ({i}, {j}) carries negative dual weight {v:e}"
            )));
        }
        b.set(i, j, v.max(0.0));
    }
    let ev = eigvals_sym(&b)?;
    let lmin = ev.last().copied().unwrap_or(0.0);
    if lmin < -tol * b.max_abs().max(1.0) {
        return Err(Error::DualInfeasible(format!("least eigenvalue {lmin:e}")));
    }
    Ok(b)
}
