//! Infeasible primal-dual interior-point method with Nesterov–Todd scaling
//! and Mehrotra's predictor-corrector.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::problem::ConicProblem;
use crate::config::Tolerances;
use crate::linalg::{cholesky, cholesky_solve, eig_sym, eigvals_sym, svd, Matrix, SymMatrix};
use crate::{Error, Result};

/// A primal-dual pair with residuals recomputed from the stored point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicSolution {
    pub primal_psd: SymMatrix,
    pub primal_nonneg: Vec<f64>,
    pub dual_multipliers: Vec<f64>,
    pub dual_slack_psd: SymMatrix,
    pub dual_slack_nonneg: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|primal_objective - dual_objective|`
    pub gap: f64,
    /// `||b - A(X, x)|| / (1 + ||b||)`
    pub primal_residual: f64,
    /// `||C - A*(y) - Z|| / (1 + ||C||)`
    pub dual_residual: f64,
    pub iterations: usize,
    /// Constraints removed as linearly dependent before solving; their
    /// multipliers are zero.
    pub dropped_constraints: Vec<usize>,
}

impl ConicSolution {
    pub fn relative_gap(&self) -> f64 {
        self.gap / (1.0 + self.primal_objective.abs() + self.dual_objective.abs())
    }

    /// Largest of relative gap and the two residuals.
    pub fn merit(&self) -> f64 {
        self.relative_gap().max(self.primal_residual).max(self.dual_residual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    IterationLimit,
    NumericalBreakdown,
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveFailure {
    pub kind: FailureKind,
    pub iterations: usize,
    pub detail: String,
    pub best: Option<Box<ConicSolution>>,
}

impl fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            FailureKind::IterationLimit => "iteration limit reached",
            FailureKind::NumericalBreakdown => "numerical breakdown",
            FailureKind::Stalled => "no progress",
        };
        write!(f, "{kind} after {} iterations", self.iterations)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        if let Some(best) = &self.best {
            write!(f, " (best merit {:.3e})", best.merit())?;
        }
        Ok(())
    }
}

#[derive(Clone)]
struct State {
    x: Matrix,
    xl: Vec<f64>,
    y: Vec<f64>,
    z: Matrix,
    zl: Vec<f64>,
}

struct Data<'a> {
    problem: &'a ConicProblem,
    rows: Vec<usize>,
    b: Vec<f64>,
    c: Matrix,
    cl: Vec<f64>,
    n: usize,
    p: usize,
}

impl Data<'_> {
    fn m(&self) -> usize {
        self.rows.len()
    }

    fn apply(&self, x: &Matrix, xl: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|&k| self.problem.constraints[k].0.eval(x, xl))
            .collect()
    }

    fn adjoint(&self, y: &[f64]) -> (Matrix, Vec<f64>) {
        let mut s = Matrix::zeros(self.n, self.n);
        let mut l = vec![0.0; self.p];
        for (&k, &yk) in self.rows.iter().zip(y) {
            if yk != 0.0 {
                self.problem.constraints[k].0.add_adjoint(yk, &mut s, &mut l);
            }
        }
        (s, l)
    }

    /// `(R_p, R_d, r_d)` at the given state.
    fn residuals(&self, s: &State) -> (Vec<f64>, Matrix, Vec<f64>) {
        let ax = self.apply(&s.x, &s.xl);
        let rp: Vec<f64> = self.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let (aty, atyl) = self.adjoint(&s.y);
        let rd = Matrix::from_fn(self.n, self.n, |i, j| self.c[(i, j)] - aty[(i, j)] - s.z[(i, j)]);
        let rdl: Vec<f64> = (0..self.p).map(|i| self.cl[i] - atyl[i] - s.zl[i]).collect();
        (rp, rd, rdl)
    }
}

fn inner(a: &Matrix, b: &Matrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum()
}

fn vnorm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn symmetrize(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

fn to_sym(a: &Matrix) -> SymMatrix {
    SymMatrix::from_fn(a.rows(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

/// Largest step `a` (possibly infinite) with `v + a dv >= 0`.
fn max_step_lin(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&x, &d)| -x / d)
        .fold(f64::INFINITY, f64::min)
}

/// Largest step with `diag(lambda) + a D ⪰ 0`.
fn max_step_psd(lambda: &[f64], d: &Matrix) -> Result<f64> {
    let n = lambda.len();
    if n == 0 {
        return Ok(f64::INFINITY);
    }
    let inv: Vec<f64> = lambda.iter().map(|l| 1.0 / libm::sqrt(*l)).collect();
    let s = SymMatrix::from_fn(n, |i, j| 0.5 * (d[(i, j)] + d[(j, i)]) * inv[i] * inv[j]);
    let ev = eigvals_sym(&s)?;
    let lmin = ev[n - 1];
    Ok(if lmin < 0.0 { -1.0 / lmin } else { f64::INFINITY })
}

struct Scaling {
    g: Matrix,
    gt: Matrix,
    lambda: Vec<f64>,
    schur_factor: Matrix,
    schur: SymMatrix,
    ratio: Vec<f64>, // x / z on the vector block
}

struct Direction {
    dx: Matrix,
    dxl: Vec<f64>,
    dy: Vec<f64>,
    dz: Matrix,
    dzl: Vec<f64>,
    dxs: Matrix,
    dzs: Matrix,
}

/// A factor `L` with `L L^T = X`: Cholesky when it succeeds, otherwise the
/// spectral square root with eigenvalues floored at a tiny positive value.
fn psd_factor(x: &Matrix) -> Option<Matrix> {
    let xs = to_sym(x);
    if let Some(l) = cholesky(&xs) {
        return Some(l);
    }
    let e = eig_sym(&xs).ok()?;
    let floor = 1e-300f64.max(1e-18 * e.lambda_max());
    if !(e.lambda_max() > 0.0) {
        return None;
    }
    let n = xs.size();
    Some(Matrix::from_fn(n, n, |i, j| {
        e.eigenvectors[(i, j)] * libm::sqrt(e.eigenvalues[j].max(floor))
    }))
}

fn scaling(data: &Data, s: &State) -> Option<Scaling> {
    let n = data.n;
    let lx = psd_factor(&s.x)?;
    let lz = psd_factor(&s.z)?;
    let d = svd(&lz.transpose().matmul(&lx));
    let lambda = d.singular_values;
    if lambda.iter().any(|&l| !(l > 0.0)) {
        return None;
    }
    let lxv = lx.matmul(&d.v);
    let g = Matrix::from_fn(n, n, |i, j| lxv[(i, j)] / libm::sqrt(lambda[j]));
    let w = g.matmul_t(&g);
    let ratio: Vec<f64> = s.xl.iter().zip(&s.zl).map(|(x, z)| x / z).collect();

    let m = data.m();
    let mut schur = SymMatrix::zeros(m);
    let fs: Vec<_> = data.rows.iter().map(|&k| &data.problem.constraints[k].0).collect();
    for a in 0..m {
        for bidx in a..m {
            let mut v = 0.0;
            for &(p, q, c1) in &fs[a].psd {
                for &(r, t, c2) in &fs[bidx].psd {
                    v += c1 * c2 * 0.5 * (w[(p, r)] * w[(q, t)] + w[(p, t)] * w[(q, r)]);
                }
            }
            for &(i, c1) in &fs[a].nonneg {
                for &(j, c2) in &fs[bidx].nonneg {
                    if i == j {
                        v += c1 * c2 * ratio[i];
                    }
                }
            }
            schur.set(a, bidx, v);
        }
    }
    let diag_max = (0..m).map(|i| schur.get(i, i)).fold(0.0, f64::max);
    let mut factor = cholesky(&schur);
    let mut shift = 1e-15 * diag_max.max(1e-300);
    let mut tries = 0;
    while factor.is_none() && tries < 8 {
        let mut reg = schur.clone();
        for i in 0..m {
            reg.set(i, i, schur.get(i, i) + shift);
        }
        factor = cholesky(&reg);
        shift *= 100.0;
        tries += 1;
    }
    Some(Scaling {
        gt: g.transpose(),
        g,
        lambda,
        schur_factor: factor?,
        schur,
        ratio,
    })
}

const REFINEMENT_STEPS: usize = 2;

/// Cholesky solve of the Schur system followed by iterative refinement.
fn schur_solve(sc: &Scaling, rhs: &[f64]) -> Vec<f64> {
    let mut dy = cholesky_solve(&sc.schur_factor, rhs);
    for _ in 0..REFINEMENT_STEPS {
        let r: Vec<f64> = sc.schur.mul_vec(&dy).iter().zip(rhs).map(|(a, b)| b - a).collect();
        let c = cholesky_solve(&sc.schur_factor, &r);
        for (d, x) in dy.iter_mut().zip(c) {
            *d += x;
        }
    }
    dy
}

#[allow(clippy::too_many_arguments)]
fn direction(
    data: &Data,
    s: &State,
    sc: &Scaling,
    rp: &[f64],
    rd: &Matrix,
    rdl: &[f64],
    rtilde: &Matrix,
    rc: &[f64],
) -> Direction {
    let (g, gt) = (&sc.g, &sc.gt);
    let t = rtilde.sub(&gt.matmul(rd).matmul(g));
    let x0 = g.matmul(&t).matmul(gt);
    let xl0: Vec<f64> = (0..data.p)
        .map(|i| rc[i] / s.zl[i] - sc.ratio[i] * rdl[i])
        .collect();
    let a0 = data.apply(&x0, &xl0);
    let rhs: Vec<f64> = rp.iter().zip(&a0).map(|(r, a)| r - a).collect();
    let dy = if data.m() > 0 {
        schur_solve(sc, &rhs)
    } else {
        Vec::new()
    };
    let (aty, atyl) = data.adjoint(&dy);
    let dz = symmetrize(&rd.sub(&aty));
    let dzl: Vec<f64> = (0..data.p).map(|i| rdl[i] - atyl[i]).collect();
    let dzs = symmetrize(&gt.matmul(&dz).matmul(g));
    let dxs = symmetrize(&rtilde.sub(&dzs));
    let dx = symmetrize(&g.matmul(&dxs).matmul(gt));
    let dxl: Vec<f64> = (0..data.p)
        .map(|i| rc[i] / s.zl[i] - sc.ratio[i] * dzl[i])
        .collect();
    Direction {
        dx,
        dxl,
        dy,
        dz,
        dzl,
        dxs,
        dzs,
    }
}

fn step_lengths(sc: &Scaling, s: &State, d: &Direction) -> Result<(f64, f64)> {
    let ap = max_step_psd(&sc.lambda, &d.dxs)?.min(max_step_lin(&s.xl, &d.dxl));
    let ad = max_step_psd(&sc.lambda, &d.dzs)?.min(max_step_lin(&s.zl, &d.dzl));
    Ok((ap, ad))
}

fn axpy_m(a: &Matrix, t: f64, b: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] + t * b[(i, j)])
}

fn axpy_v(a: &[f64], t: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * y).collect()
}

fn snapshot(data: &Data, s: &State, iterations: usize) -> ConicSolution {
    let problem = data.problem;
    let m_all = problem.num_constraints();
    let mut y_full = vec![0.0; m_all];
    for (&k, &v) in data.rows.iter().zip(&s.y) {
        y_full[k] = v;
    }
    let b_all = problem.rhs();
    let ax = problem.apply(&s.x, &s.xl);
    let rp: Vec<f64> = b_all.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let (_, rd, rdl) = data.residuals(s);
    let c_norm = libm::sqrt(inner(&data.c, &data.c) + data.cl.iter().map(|v| v * v).sum::<f64>());
    let rd_norm = libm::sqrt(inner(&rd, &rd) + rdl.iter().map(|v| v * v).sum::<f64>());
    let pobj = inner(&data.c, &s.x) + data.cl.iter().zip(&s.xl).map(|(c, x)| c * x).sum::<f64>();
    let dobj: f64 = b_all.iter().zip(&y_full).map(|(b, y)| b * y).sum();
    let dropped = (0..m_all).filter(|k| !data.rows.contains(k)).collect();
    ConicSolution {
        primal_psd: to_sym(&s.x),
        primal_nonneg: s.xl.clone(),
        dual_multipliers: y_full,
        dual_slack_psd: to_sym(&s.z),
        dual_slack_nonneg: s.zl.clone(),
        primal_objective: pobj,
        dual_objective: dobj,
        gap: (pobj - dobj).abs(),
        primal_residual: vnorm(&rp) / (1.0 + vnorm(&b_all)),
        dual_residual: rd_norm / (1.0 + c_norm),
        iterations,
        dropped_constraints: dropped,
    }
}

const POLISH_STEPS: usize = 12;
const CENTERING_STEPS: usize = 4;

enum Step {
    Moved(f64, f64),
    Breakdown(&'static str),
}

/// One predictor-corrector step. A centering step targets the current `mu`
/// without the second-order correction.
fn newton_step(data: &Data, state: &mut State, dim: f64, centering: bool) -> Result<Step> {
    let (n, p) = (data.n, data.p);
    let (rp, rd, rdl) = data.residuals(state);
    let mu = (inner(&state.x, &state.z) + state.xl.iter().zip(&state.zl).map(|(a, b)| a * b).sum::<f64>()) / dim;
    if !(mu > 0.0) || !mu.is_finite() {
        return Ok(Step::Breakdown("complementarity lost positivity"));
    }
    let Some(sc) = scaling(data, state) else {
        return Ok(Step::Breakdown("scaling or Schur factorization failed"));
    };
    let lam = &sc.lambda;

    // predictor
    let rt_aff = Matrix::from_fn(n, n, |i, j| if i == j { -lam[i] } else { 0.0 });
    let rc_aff: Vec<f64> = state.xl.iter().zip(&state.zl).map(|(x, z)| -x * z).collect();
    let pred = direction(data, state, &sc, &rp, &rd, &rdl, &rt_aff, &rc_aff);
    let (ap, ad) = step_lengths(&sc, state, &pred)?;
    let (ap, ad) = (ap.min(1.0), ad.min(1.0));
    let x_aff = axpy_m(&state.x, ap, &pred.dx);
    let z_aff = axpy_m(&state.z, ad, &pred.dz);
    let lin_aff: f64 = (0..p)
        .map(|i| (state.xl[i] + ap * pred.dxl[i]) * (state.zl[i] + ad * pred.dzl[i]))
        .sum();
    let mu_aff = (inner(&x_aff, &z_aff) + lin_aff) / dim;
    let ratio = (mu_aff / mu).clamp(0.0, 1.0);
    let sigma = if centering { 1.0 } else { ratio * ratio * ratio };

    // corrector
    let corr = if centering {
        Matrix::zeros(n, n)
    } else {
        symmetrize(&pred.dxs.matmul(&pred.dzs))
    };
    let rt = Matrix::from_fn(n, n, |i, j| {
        let h = if i == j { sigma * mu - lam[i] * lam[i] } else { 0.0 } - corr[(i, j)];
        2.0 * h / (lam[i] + lam[j])
    });
    let rc: Vec<f64> = (0..p)
        .map(|i| {
            let c = if centering { 0.0 } else { pred.dxl[i] * pred.dzl[i] };
            sigma * mu - state.xl[i] * state.zl[i] - c
        })
        .collect();
    let dir = direction(data, state, &sc, &rp, &rd, &rdl, &rt, &rc);
    let (ap, ad) = step_lengths(&sc, state, &dir)?;
    let gamma = 0.98;
    let ap = (gamma * ap).min(1.0);
    let ad = (gamma * ad).min(1.0);
    state.x = symmetrize(&axpy_m(&state.x, ap, &dir.dx));
    state.xl = axpy_v(&state.xl, ap, &dir.dxl);
    state.y = axpy_v(&state.y, ad, &dir.dy);
    state.z = symmetrize(&axpy_m(&state.z, ad, &dir.dz));
    state.zl = axpy_v(&state.zl, ad, &dir.dzl);
    Ok(Step::Moved(ap, ad))
}

/// Solves the conic program to the tolerances in `tol`.
///
/// After the stopping test first passes, iterations continue while the
/// merit keeps improving, so that the returned point sits deep in the
/// relative interior of the optimal face.
pub fn solve(problem: &ConicProblem, tol: &Tolerances) -> Result<ConicSolution> {
    problem.validate()?;
    tol.validate()?;
    let (n, p) = (problem.psd_block_size, problem.nonneg_block_size);
    let rows = problem.independent_constraints();
    let data = Data {
        problem,
        b: rows.iter().map(|&k| problem.constraints[k].1).collect(),
        rows,
        c: problem.objective.psd_matrix(n).into_matrix(),
        cl: problem.objective.nonneg_vector(p),
        n,
        p,
    };
    let m = data.m();

    // starting point
    let sqrt_n = libm::sqrt(n.max(1) as f64);
    let mut xi: f64 = 10.0f64.max(sqrt_n);
    let mut eta: f64 = 10.0f64.max(sqrt_n);
    for (&k, &bk) in data.rows.iter().zip(&data.b) {
        let a_norm = problem.constraints[k].0.norm();
        xi = xi.max((n + p).max(1) as f64 * (1.0 + bk.abs()) / (1.0 + a_norm));
        eta = eta.max(a_norm);
    }
    eta = eta.max(libm::sqrt(inner(&data.c, &data.c)));
    eta = eta.max(vnorm(&data.cl));
    let mut state = State {
        x: Matrix::identity(n).scaled(xi),
        xl: vec![xi; p],
        y: vec![0.0; m],
        z: Matrix::identity(n).scaled(eta),
        zl: vec![eta; p],
    };

    let dim = (n + p).max(1) as f64;
    let mut best: Option<ConicSolution> = None;
    let mut best_state: Option<State> = None;
    let mut converged_at: Option<usize> = None;
    let mut stalls = 0;
    let mut flat = 0;
    let mut failure: Option<(FailureKind, String)> = None;
    let mut iter = 0;

    loop {
        let snap = snapshot(&data, &state, iter);
        let merit = snap.merit();
        let improved = best.as_ref().is_none_or(|b| merit < b.merit());
        flat = if improved { 0 } else { flat + 1 };
        if improved {
            best = Some(snap);
            best_state = Some(state.clone());
        }
        if merit <= tol.solve_tol && converged_at.is_none() {
            converged_at = Some(iter);
        }
        if let Some(at) = converged_at {
            // polishing phase
            if merit <= 1e-3 * tol.solve_tol || iter >= at + POLISH_STEPS || flat >= 3 {
                break;
            }
        }
        if iter >= tol.max_iters {
            if converged_at.is_none() {
                failure = Some((FailureKind::IterationLimit, String::new()));
            }
            break;
        }
        iter += 1;

        let (ap, ad) = match newton_step(&data, &mut state, dim, false) {
            Ok(Step::Moved(ap, ad)) => (ap, ad),
            Ok(Step::Breakdown(why)) => {
                failure = Some((FailureKind::NumericalBreakdown, why.into()));
                break;
            }
            Err(e) => {
                failure = Some((FailureKind::NumericalBreakdown, e.to_string()));
                break;
            }
        };
        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                failure = Some((FailureKind::Stalled, "step lengths collapsed".into()));
                break;
            }
        } else {
            stalls = 0;
        }
    }

    let mut best = best.expect("at least one snapshot is taken");
    if best.merit() <= tol.solve_tol {
        // recentre at the final mu: aligns the eigenvectors of the primal and
        // dual blocks without moving the objective
        let mut state = best_state.expect("stored with the best snapshot");
        for _ in 0..CENTERING_STEPS {
            if !matches!(newton_step(&data, &mut state, dim, true), Ok(Step::Moved(..))) {
                break;
            }
            let snap = snapshot(&data, &state, iter);
            if snap.merit() <= tol.solve_tol {
                best = snap;
            }
        }
        return Ok(best);
    }
    let (kind, detail) = failure.unwrap_or((FailureKind::IterationLimit, String::new()));
    Err(Error::Solver(SolveFailure {
        kind,
        iterations: iter,
        detail,
        best: Some(Box::new(best)),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::LinearFunctional;

    #[test]
    fn trace_minimization() {
        let mut p = ConicProblem::new(2, 0);
        p.objective = LinearFunctional::new().with_psd(0, 0, 1.0).with_psd(1, 1, 1.0);
        p.constraints.push((LinearFunctional::new().with_psd(0, 0, 1.0), 1.0));
        let s = solve(&p, &Tolerances::default()).unwrap();
        assert!((s.primal_objective - 1.0).abs() < 1e-8);
        let x = &s.primal_psd;
        assert!((x.get(0, 0) - 1.0).abs() < 1e-8);
        assert!(x.get(1, 1).abs() < 1e-8 && x.get(0, 1).abs() < 1e-8);
    }

    #[test]
    fn lp_only_block() {
        // max x subject to x + s = 2, x, s >= 0
        let mut p = ConicProblem::new(0, 2);
        p.objective = LinearFunctional::new().with_nonneg(0, -1.0);
        p.constraints
            .push((LinearFunctional::new().with_nonneg(0, 1.0).with_nonneg(1, 1.0), 2.0));
        let s = solve(&p, &Tolerances::default()).unwrap();
        assert!((s.primal_nonneg[0] - 2.0).abs() < 1e-8);
        assert!((-s.primal_objective - 2.0).abs() < 1e-8);
    }

    #[test]
    fn iteration_cap_reports_best() {
        let mut p = ConicProblem::new(2, 0);
        p.objective = LinearFunctional::new().with_psd(0, 0, 1.0).with_psd(1, 1, 1.0);
        p.constraints.push((LinearFunctional::new().with_psd(0, 1, 1.0), -1.0));
        let tol = Tolerances {
            max_iters: 10,
            solve_tol: 1e-300,
            ..Tolerances::default()
        };
        match solve(&p, &tol) {
            Err(Error::Solver(f)) => {
                assert_eq!(f.kind, FailureKind::IterationLimit);
                assert!(f.best.is_some());
            }
            other => panic!("{other:?}"),
        }
    }
}
