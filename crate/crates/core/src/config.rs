/// Numerical thresholds shared by every analysis.
///
/// Solving and structural classification use separate tiers: the
/// interior-point method is driven to `solve_tol`, while rank, tightness and
/// support decisions use the looser `rank_tol`, `tight_tol` and
/// `support_tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative gap and residual target of the conic solver.
    pub solve_tol: f64,
    /// Relative eigenvalue threshold for numeric rank.
    pub rank_tol: f64,
    /// Absolute threshold on `M_ij + 1` for an edge to count as tight.
    pub tight_tol: f64,
    /// Entries of a dual matrix above this are part of its support graph.
    pub support_tol: f64,
    /// Iteration cap of the conic solver.
    pub max_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            solve_tol: 1e-9,
            rank_tol: 1e-6,
            tight_tol: 1e-6,
            support_tol: 1e-8,
            max_iters: 200,
        }
    }
}

impl Tolerances {
    /// Checks `0 < solve_tol < rank_tol < 1` and `max_iters >= 10`.
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.solve_tol > 0.0
            && self.solve_tol < self.rank_tol
            && self.rank_tol < 1.0
            && self.tight_tol > 0.0
            && self.support_tol > 0.0
            && self.max_iters >= 10;
        if ok {
            Ok(())
        } else {
            Err(crate::Error::param(
                "tolerances must satisfy 0 < solve_tol < rank_tol < 1 and max_iters >= 10",
            ))
        }
    }
}
