use alloc::vec::Vec;

use crate::coloring::VectorColoring;
use crate::linalg::{lp_solve, nnls_membership, norm, LpOutcome, LpProblem, Membership};
use crate::{Error, Result};

/// A convex combination `sum_j alpha_j p_j = 0` over the closed tight
/// neighbourhood of `vertex` with `alpha_vertex > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborlinessWitness {
    pub vertex: usize,
    /// `(j, alpha_j)` sorted by `j`, including the vertex itself.
    pub coefficients: Vec<(usize, f64)>,
    /// `||sum_j alpha_j p_j||`
    pub residual: f64,
    /// `|sum_j alpha_j - t * alpha_vertex|`
    pub forced_identity_residual: f64,
    pub marginal: bool,
}

impl NeighborlinessWitness {
    pub fn alpha(&self, j: usize) -> f64 {
        self.coefficients
            .iter()
            .find(|(k, _)| *k == j)
            .map_or(0.0, |(_, a)| *a)
    }

    /// Coefficients rescaled so that the vertex has weight one, i.e. the
    /// conical form `-p_i = sum_j c_j p_j` (vertex excluded).
    pub fn conical(&self) -> Vec<(usize, f64)> {
        let ai = self.alpha(self.vertex);
        self.coefficients
            .iter()
            .filter(|(j, _)| *j != self.vertex)
            .map(|&(j, a)| (j, a / ai))
            .collect()
    }
}

/// Residual allowed when reproducing `p_i`. The vectors come from a Gram
/// matrix accurate to about `tol`, so they are only accurate to `sqrt(tol)`.
fn vector_bound(tol: f64, p: &[f64]) -> f64 {
    libm::sqrt(tol * (1.0 + norm(p) * norm(p)))
}

/// Tests `-p_i ∈ cone{p_j : j tight neighbour of i}` by nonnegative least
/// squares with residual bound `sqrt(tol * (1 + ||p_i||^2))`.
pub fn is_neighborly(vc: &VectorColoring, i: usize, tol: f64) -> Result<Option<NeighborlinessWitness>> {
    if i >= vc.order() {
        return Err(Error::param("vertex out of range"));
    }
    let p_i = vc.vector(i);
    let nbrs = vc.tight_neighbors(i);
    let target: Vec<f64> = p_i.iter().map(|v| -v).collect();
    let gens: Vec<Vec<f64>> = nbrs.iter().map(|&j| vc.vector(j).to_vec()).collect();
    let bound = vector_bound(tol, p_i);
    let membership = nnls_membership(&target, &gens, bound / (1.0 + norm(p_i)))?;
    let marginal = {
        let r = membership.residual();
        r > 0.1 * bound && r <= 10.0 * bound
    };
    let Membership::Feasible { coefficients, .. } = membership else {
        return Ok(None);
    };
    let total: f64 = 1.0 + coefficients.iter().sum::<f64>();
    let mut alpha: Vec<(usize, f64)> = nbrs
        .iter()
        .zip(&coefficients)
        .map(|(&j, &c)| (j, c / total))
        .collect();
    alpha.push((i, 1.0 / total));
    alpha.sort_by_key(|e| e.0);
    let d = vc.rank();
    let mut combo = alloc::vec![0.0; d];
    for &(j, a) in &alpha {
        for (c, v) in combo.iter_mut().zip(vc.vector(j)) {
            *c += a * v;
        }
    }
    let sum_alpha: f64 = alpha.iter().map(|e| e.1).sum();
    Ok(Some(NeighborlinessWitness {
        vertex: i,
        forced_identity_residual: (sum_alpha - vc.t / total).abs(),
        residual: norm(&combo),
        coefficients: alpha,
        marginal,
    }))
}

/// `D(i)`: tight neighbours `j` that receive positive weight in some
/// witnessing combination, decided by one LP per neighbour.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowSet {
    pub vertex: usize,
    pub targets: Vec<usize>,
    /// Largest achievable conical coefficient per tight neighbour.
    pub maxima: Vec<(usize, f64)>,
    pub marginal: bool,
}

pub fn arrow_set(vc: &VectorColoring, i: usize, tol: f64) -> Result<ArrowSet> {
    if is_neighborly(vc, i, tol)?.is_none() {
        return Err(Error::precondition("vertex is not neighborly"));
    }
    let nbrs = vc.tight_neighbors(i);
    let d = vc.rank();
    let k = nbrs.len();
    let mut lp = LpProblem::boxed(k, 0.0, vc.t.max(1.0));
    for row in 0..d {
        let a: Vec<f64> = nbrs.iter().map(|&j| vc.vector(j)[row]).collect();
        lp.equalities.push((a, -vc.vector(i)[row]));
    }
    lp.equality_tolerance = vector_bound(tol, vc.vector(i));
    let mut targets = Vec::new();
    let mut maxima = Vec::new();
    let mut marginal = false;
    for (pos, &j) in nbrs.iter().enumerate() {
        let mut obj = alloc::vec![0.0; k];
        obj[pos] = 1.0;
        lp.objective = Some(obj);
        let best = match lp_solve(&lp)? {
            LpOutcome::Optimal { objective, .. } => objective,
            LpOutcome::Infeasible => 0.0,
        };
        if best > 0.1 * tol && best <= 10.0 * tol {
            marginal = true;
        }
        if best > tol {
            targets.push(j);
        }
        maxima.push((j, best));
    }
    Ok(ArrowSet {
        vertex: i,
        targets,
        maxima,
        marginal,
    })
}
