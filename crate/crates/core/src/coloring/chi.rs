use alloc::format;
use alloc::vec::Vec;

use super::types::{AForm, DualWitness, VectorColoring};
use crate::graph::Graph;
use crate::linalg::{eig_sym, eigvals_sym, kernel_basis, SymMatrix};
use crate::sdp::{solve, svc_primal_problem, vc_dual_extract, vc_primal_problem, ConicSolution};
use crate::{Error, Result, Tolerances};

/// Optimal primal/dual pair for `chi_v(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiResult {
    pub t: f64,
    pub coloring: VectorColoring,
    pub dual: DualWitness,
    /// `1 + tr(M)/n` at the returned primal point.
    pub primal_value: f64,
    /// `sum(B)` at the returned dual point.
    pub dual_value: f64,
    pub iterations: usize,
    pub merit: f64,
}

/// The strict vector chromatic number and the Gram matrix attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictResult {
    pub t: f64,
    pub gram: SymMatrix,
    pub primal_value: f64,
    pub dual_value: f64,
    pub iterations: usize,
}

fn require_vertices(g: &Graph) -> Result<()> {
    if g.order() == 0 {
        return Err(Error::precondition("the graph has no vertices"));
    }
    Ok(())
}

fn edgeless(g: &Graph, tol: &Tolerances) -> Result<ChiResult> {
    let n = g.order();
    let coloring = VectorColoring::from_gram(g, SymMatrix::zeros(n), tol)?;
    let dual = DualWitness::new(SymMatrix::identity(n).scaled(1.0 / n as f64), tol)?;
    Ok(ChiResult {
        t: 1.0,
        coloring,
        dual,
        primal_value: 1.0,
        dual_value: 1.0,
        iterations: 0,
        merit: 0.0,
    })
}

/// Solves the coloring program and returns a maximum-rank optimal primal
/// together with an optimal dual.
pub fn chi_v(g: &Graph, tol: &Tolerances) -> Result<ChiResult> {
    require_vertices(g)?;
    if g.is_empty() {
        return edgeless(g, tol);
    }
    let sol: ConicSolution = solve(&vc_primal_problem(g), tol)?;
    let b = vc_dual_extract(&sol, g, tol.rank_tol)?;
    let b = purify_dual(g, &sol.primal_psd, b, 1.0 + sol.primal_objective, tol)?;
    let dual = DualWitness::new(b, tol)?;
    let coloring = VectorColoring::from_gram(g, sol.primal_psd.clone(), tol)?;
    let primal_value = 1.0 + sol.primal_objective;
    Ok(ChiResult {
        t: primal_value,
        coloring,
        dual_value: dual.value(),
        dual,
        primal_value,
        iterations: sol.iterations,
        merit: sol.merit(),
    })
}

/// Compresses `B` onto the numerical kernel of `M`.
///
/// Interior-point iterates can leave `B` tilted by about the square root of
/// the gap along directions that are first-order free in `tr(MB)`, which
/// shows up in `||MB||`. The compressed matrix is kept only when it still has
/// the sparsity pattern of the graph, is PSD and is at least as close to `t`.
fn purify_dual(g: &Graph, m: &SymMatrix, b: SymMatrix, t: f64, tol: &Tolerances) -> Result<SymMatrix> {
    let n = g.order();
    let k = kernel_basis(m, tol.rank_tol)?;
    if k.cols() == 0 || k.cols() == n {
        return Ok(b);
    }
    let kb = k.transpose().matmul(b.as_matrix()).matmul(&k);
    let small = SymMatrix::from_fn(k.cols(), |i, j| 0.5 * (kb[(i, j)] + kb[(j, i)]));
    let mut c = small.congruence(&k);
    for i in 0..n {
        for j in i + 1..n {
            let v = c.get(i, j);
            if g.has_edge(i, j) {
                if v < -tol.support_tol {
                    return Ok(b);
                }
                c.set(i, j, v.max(0.0));
            } else if v.abs() > tol.support_tol {
                return Ok(b);
            } else {
                c.set(i, j, 0.0);
            }
        }
    }
    let tr = c.trace();
    if tr <= 0.0 {
        return Ok(b);
    }
    let c = c.scaled(1.0 / tr);
    let lmin = eigvals_sym(&c)?.last().copied().unwrap_or(0.0);
    let closer = (c.sum() - t).abs() <= (b.sum() - t).abs() + tol.solve_tol;
    if lmin < -tol.solve_tol || !closer {
        return Ok(b);
    }
    Ok(c)
}

/// The strict variant (edge constraints hold with equality).
pub fn chi_sv(g: &Graph, tol: &Tolerances) -> Result<StrictResult> {
    require_vertices(g)?;
    let n = g.order();
    if g.is_empty() {
        return Ok(StrictResult {
            t: 1.0,
            gram: SymMatrix::zeros(n),
            primal_value: 1.0,
            dual_value: 1.0,
            iterations: 0,
        });
    }
    let sol = solve(&svc_primal_problem(g), tol)?;
    let primal_value = 1.0 + sol.primal_objective;
    Ok(StrictResult {
        t: primal_value,
        gram: sol.primal_psd,
        primal_value,
        dual_value: 1.0 + sol.dual_objective,
        iterations: sol.iterations,
    })
}

/// Tight-edge subgraph of the relative-interior optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    pub graph: Graph,
    /// False when the dual support is not contained in the tight edges,
    /// which means the primal point is not reliably interior.
    pub dual_support_contained: bool,
}

impl Skeleton {
    pub fn warning(&self) -> bool {
        !self.dual_support_contained
    }
}

pub fn skeleton_of(g: &Graph, chi: &ChiResult) -> Result<Skeleton> {
    let graph = g.spanning_subgraph(&chi.coloring.tight_edges)?;
    let dual_support_contained = chi
        .dual
        .support
        .edges()
        .iter()
        .all(|&(i, j)| graph.has_edge(i, j));
    Ok(Skeleton {
        graph,
        dual_support_contained,
    })
}

pub fn skeleton(g: &Graph, tol: &Tolerances) -> Result<Skeleton> {
    skeleton_of(g, &chi_v(g, tol)?)
}

/// Closed-form optimal pair of a 1-walk-regular graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub t: f64,
    pub degree: usize,
    pub tau: f64,
    pub multiplicity: usize,
    pub coloring: VectorColoring,
    pub dual: DualWitness,
}

impl ClosedForm {
    /// The closed-form pair in the shape returned by the solver.
    pub fn into_chi(self) -> ChiResult {
        let dual_value = self.dual.value();
        ChiResult {
            t: self.t,
            coloring: self.coloring,
            dual: self.dual,
            primal_value: self.t,
            dual_value,
            iterations: 0,
            merit: 0.0,
        }
    }
}

pub fn closed_form_1wr(g: &Graph, tol: &Tolerances) -> Result<ClosedForm> {
    let n = g.order();
    if g.is_empty() {
        return Err(Error::precondition("closed form needs at least one edge"));
    }
    if !g.is_one_walk_regular(None) {
        return Err(Error::precondition("graph is not 1-walk-regular"));
    }
    let d = g.degree(0);
    if (0..n).any(|i| g.degree(i) != d) {
        return Err(Error::precondition("graph is not regular"));
    }
    let a = g.adjacency_matrix();
    let spec = eig_sym(&a)?;
    let tau = spec.lambda_min();
    if !(tau < 0.0) {
        return Err(Error::precondition("least adjacency eigenvalue is not negative"));
    }
    let t = 1.0 - d as f64 / tau;
    let (proj, mult) = spec.eigenprojector(tau, 1e-7);
    let m = proj.scaled((t - 1.0) * n as f64 / mult as f64);
    let mut b = a.clone();
    for i in 0..n {
        b.set(i, i, -tau);
    }
    let b = b.scaled(1.0 / (-(n as f64) * tau));
    Ok(ClosedForm {
        t,
        degree: d,
        tau,
        multiplicity: mult,
        coloring: VectorColoring::from_gram(g, m, tol)?,
        dual: DualWitness::new(b, tol)?,
    })
}

/// `1 - lambda_max(W) / lambda_min(W)` for a nonzero, nonnegative,
/// edge-supported `W`: a lower bound on `chi_v(G)`.
pub fn eigenvalue_bound(g: &Graph, w: &SymMatrix) -> Result<f64> {
    let n = g.order();
    if w.size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.size(),
        });
    }
    for i in 0..n {
        for j in i..n {
            let v = w.get(i, j);
            if v < 0.0 {
                return Err(Error::param(format!("negative weight at ({i}, {j})")));
            }
            if v != 0.0 && !g.has_edge(i, j) {
                return Err(Error::param(format!("weight at ({i}, {j}) is off the edge set")));
            }
        }
    }
    let s = eig_sym(w)?;
    if !(s.lambda_min() < 0.0) {
        return Err(Error::param("weight matrix must be nonzero"));
    }
    Ok(1.0 - s.lambda_max() / s.lambda_min())
}

/// Edge-supported form of the closed-form dual: `A = (A_G - tau I) / (-tau)`
/// with its diagonal removed, i.e. `A_G / (-tau)`.
pub fn closed_form_aform(g: &Graph) -> Result<AForm> {
    let a = g.adjacency_matrix();
    let tau = eig_sym(&a)?.lambda_min();
    if !(tau < 0.0) {
        return Err(Error::precondition("least adjacency eigenvalue is not negative"));
    }
    let n = g.order();
    let u: Vec<f64> = alloc::vec![1.0 / libm::sqrt(n as f64); n];
    AForm::with_perron(a.scaled(-1.0 / tau), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::numeric_rank;

    #[test]
    fn k4_primal_and_dual() {
        let g = Graph::complete(4).unwrap();
        let r = chi_v(&g, &Tolerances::default()).unwrap();
        assert!((r.t - 4.0).abs() < 1e-8);
        let m = SymMatrix::identity(4).scaled(4.0).sub(&SymMatrix::ones(4));
        assert!(r.coloring.gram.sub(&m).max_abs() < 1e-7);
        assert!(r.dual.b.sub(&SymMatrix::ones(4).scaled(0.25)).max_abs() < 1e-7);
        assert_eq!(r.coloring.rank(), 3);
        assert_eq!(r.dual.corank, 3);
    }

    #[test]
    fn petersen_value() {
        let g = Graph::kneser(5, 2).unwrap();
        let r = chi_v(&g, &Tolerances::default()).unwrap();
        assert!((r.t - 2.5).abs() < 1e-8);
        assert!((r.dual_value - 2.5).abs() < 1e-8);
    }

    #[test]
    fn hexagon_is_two() {
        let r = chi_v(&Graph::cycle(6).unwrap(), &Tolerances::default()).unwrap();
        assert!((r.t - 2.0).abs() < 1e-8);
    }

    #[test]
    fn edgeless_exact() {
        let r = chi_v(&Graph::empty(3), &Tolerances::default()).unwrap();
        assert_eq!(r.t, 1.0);
        assert_eq!(r.coloring.rank(), 0);
        assert_eq!(r.dual.rank, 3);
        assert!(chi_v(&Graph::empty(0), &Tolerances::default()).is_err());
    }

    #[test]
    fn strict_values() {
        let tol = Tolerances::default();
        assert!((chi_sv(&Graph::complete(4).unwrap(), &tol).unwrap().t - 4.0).abs() < 1e-8);
        let c5 = chi_sv(&Graph::cycle(5).unwrap(), &tol).unwrap();
        assert!((c5.t - libm::sqrt(5.0)).abs() < 1e-8);
        assert!((chi_sv(&Graph::path(4).unwrap(), &tol).unwrap().t - 2.0).abs() < 1e-8);
    }

    #[test]
    fn pendant_skeleton() {
        let g = Graph::complete(3).unwrap().with_pendant(0).unwrap();
        let sk = skeleton(&g, &Tolerances::default()).unwrap();
        assert_eq!(sk.graph.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert!(!sk.warning());
    }

    #[test]
    fn closed_forms() {
        let tol = Tolerances::default();
        let k5 = closed_form_1wr(&Graph::complete(5).unwrap(), &tol).unwrap();
        assert!((k5.t - 5.0).abs() < 1e-12);
        assert!(k5.dual.b.sub(&SymMatrix::ones(5).scaled(0.2)).max_abs() < 1e-12);
        let c5 = closed_form_1wr(&Graph::cycle(5).unwrap(), &tol).unwrap();
        assert!((c5.t - libm::sqrt(5.0)).abs() < 1e-12);
        let pet = closed_form_1wr(&Graph::kneser(5, 2).unwrap(), &tol).unwrap();
        assert!((pet.t - 2.5).abs() < 1e-12);
        assert_eq!(pet.multiplicity, 4);
        assert_eq!(numeric_rank(&pet.coloring.gram, 1e-6).unwrap(), 4);
        assert_eq!(pet.dual.rank, 6);
        assert!((pet.dual.b.trace() - 1.0).abs() < 1e-12);
        assert!((pet.dual.value() - 2.5).abs() < 1e-12);
        for &(i, j) in Graph::kneser(5, 2).unwrap().edges() {
            assert!((pet.coloring.gram.get(i, j) + 1.0).abs() < 1e-12);
        }
        let pendant = Graph::complete(3).unwrap().with_pendant(0).unwrap();
        assert!(closed_form_1wr(&pendant, &tol).is_err());
    }

    #[test]
    fn eigenvalue_bounds() {
        for (g, want) in [
            (Graph::complete(4).unwrap(), 4.0),
            (Graph::kneser(5, 2).unwrap(), 2.5),
            (Graph::cycle(5).unwrap(), libm::sqrt(5.0)),
        ] {
            let b = eigenvalue_bound(&g, &g.adjacency_matrix()).unwrap();
            assert!((b - want).abs() < 1e-10);
        }
        let g = Graph::path(3).unwrap();
        assert!(eigenvalue_bound(&g, &SymMatrix::zeros(3)).is_err());
        assert!(eigenvalue_bound(&g, &SymMatrix::identity(3)).is_err());
    }
}
