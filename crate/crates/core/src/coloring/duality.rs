use alloc::format;
use alloc::vec::Vec;

use super::types::{AForm, DualWitness, VectorColoring};
use crate::graph::Graph;
use crate::linalg::{numeric_rank, SymMatrix};
use crate::{Error, Result, Tolerances};

/// Residuals of the optimality conditions for a primal/dual pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SlacknessReport {
    /// `||M B||_F`
    pub product_norm: f64,
    /// `max_{i~j} |(M_ij + 1) B_ij|`
    pub edge_residual: f64,
    /// `tr(M B)` computed directly.
    pub trace_direct: f64,
    /// `(t - s) + sum over ordered adjacent pairs of (M_ij + 1) B_ij`.
    pub trace_identity: f64,
    /// `t - s`
    pub value_gap: f64,
}

impl SlacknessReport {
    pub fn identity_discrepancy(&self) -> f64 {
        (self.trace_direct - self.trace_identity).abs()
    }
}

pub fn complementary_slackness(g: &Graph, vc: &VectorColoring, dw: &DualWitness) -> Result<SlacknessReport> {
    let n = g.order();
    if vc.order() != n || dw.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: vc.order().max(dw.order()),
        });
    }
    let (m, b) = (&vc.gram, &dw.b);
    let product_norm = m.matmul(b).frobenius_norm();
    let mut edge_residual: f64 = 0.0;
    let mut edge_sum = 0.0;
    for &(i, j) in g.edges() {
        let v = (m.get(i, j) + 1.0) * b.get(i, j);
        edge_residual = edge_residual.max(v.abs());
        edge_sum += 2.0 * v;
    }
    let value_gap = vc.t - dw.value();
    Ok(SlacknessReport {
        product_norm,
        edge_residual,
        trace_direct: m.inner(b),
        trace_identity: value_gap + edge_sum,
        value_gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrictComplementarity {
    pub rank_primal: usize,
    pub rank_dual: usize,
    pub order: usize,
    pub strict: bool,
}

pub fn strict_complementarity(vc: &VectorColoring, dw: &DualWitness, rank_tol: f64) -> Result<StrictComplementarity> {
    let rank_primal = numeric_rank(&vc.gram, rank_tol)?;
    let rank_dual = numeric_rank(&dw.b, rank_tol)?;
    let order = vc.order();
    Ok(StrictComplementarity {
        rank_primal,
        rank_dual,
        order,
        strict: rank_primal + rank_dual == order,
    })
}

/// `A = D^{-1/2} B D^{-1/2} - I` on the support of `diag(B)`, padded with
/// zero rows elsewhere. The stored vector is `sqrt(diag B)`.
pub fn b_to_a(dw: &DualWitness, tol: &Tolerances) -> Result<AForm> {
    let b = &dw.b;
    let n = b.size();
    let d = b.diag();
    for (i, &v) in d.iter().enumerate() {
        if v < -tol.support_tol {
            return Err(Error::precondition(format!("negative diagonal entry {v:e} at {i}")));
        }
    }
    let support: Vec<bool> = d.iter().map(|&v| v > tol.support_tol).collect();
    let s: Vec<f64> = d
        .iter()
        .zip(&support)
        .map(|(&v, &on)| if on { 1.0 / libm::sqrt(v) } else { 0.0 })
        .collect();
    let mut a = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            if support[i] && support[j] {
                a.set(i, j, (b.get(i, j) * s[i] * s[j]).max(0.0));
            }
        }
    }
    let trace: f64 = d.iter().zip(&support).filter(|(_, &on)| on).map(|(v, _)| v).sum();
    let u: Vec<f64> = d
        .iter()
        .zip(&support)
        .map(|(&v, &on)| if on { libm::sqrt(v / trace) } else { 0.0 })
        .collect();
    AForm::with_perron(a, u)
}

/// `B = (I + A) ∘ u u^T` with `u` the stored vector of `af`.
pub fn a_to_b(af: &AForm, tol: &Tolerances) -> Result<DualWitness> {
    let u = &af.perron;
    let n = af.order();
    let b = SymMatrix::from_fn(n, |i, j| {
        let v = if i == j { 1.0 } else { af.a.get(i, j) };
        v * u[i] * u[j]
    });
    DualWitness::new(b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{chi_v, closed_form_1wr};

    fn k(m: usize) -> (Graph, VectorColoring, DualWitness) {
        let g = Graph::complete(m).unwrap();
        let tol = Tolerances::default();
        let mm = SymMatrix::identity(m).scaled(m as f64).sub(&SymMatrix::ones(m));
        let vc = VectorColoring::from_gram(&g, mm, &tol).unwrap();
        let dw = DualWitness::new(SymMatrix::ones(m).scaled(1.0 / m as f64), &tol).unwrap();
        (g, vc, dw)
    }

    #[test]
    fn clique_pair_is_exact() {
        let (g, vc, dw) = k(4);
        let r = complementary_slackness(&g, &vc, &dw).unwrap();
        assert_eq!(r.product_norm, 0.0);
        assert_eq!(r.edge_residual, 0.0);
        assert!(r.identity_discrepancy() < 1e-14);
        let sc = strict_complementarity(&vc, &dw, 1e-6).unwrap();
        assert_eq!((sc.rank_primal, sc.rank_dual, sc.strict), (3, 1, true));
    }

    #[test]
    fn inflated_primal_shows_gap() {
        let g = Graph::kneser(5, 2).unwrap();
        let tol = Tolerances::default();
        let r = chi_v(&g, &tol).unwrap();
        let base = complementary_slackness(&g, &r.coloring, &r.dual).unwrap();
        assert!(base.product_norm < 1e-7 && base.edge_residual < 1e-7);
        let bumped = r.coloring.gram.add(&SymMatrix::identity(10).scaled(0.1));
        let vc2 = VectorColoring::from_gram(&g, bumped, &tol).unwrap();
        let rep = complementary_slackness(&g, &vc2, &r.dual).unwrap();
        assert!((rep.trace_direct - 0.1).abs() < 1e-7);
        assert!((rep.value_gap - 0.1).abs() < 1e-7);
        assert!(rep.identity_discrepancy() < 1e-7);
    }

    #[test]
    fn conversions_on_clique() {
        let tol = Tolerances::default();
        for m in 2..7 {
            let (g, _, dw) = k(m);
            let af = b_to_a(&dw, &tol).unwrap();
            assert!(af.a.sub(&g.adjacency_matrix()).max_abs() < 1e-12);
            assert!((af.norm() - m as f64).abs() < 1e-12);
            let back = a_to_b(&af, &tol).unwrap();
            assert!(back.b.sub(&dw.b).max_abs() < 1e-12);
        }
    }

    #[test]
    fn edgeless_conversion() {
        let tol = Tolerances::default();
        let dw = DualWitness::new(SymMatrix::identity(3).scaled(1.0 / 3.0), &tol).unwrap();
        let af = b_to_a(&dw, &tol).unwrap();
        assert_eq!(af.a, SymMatrix::zeros(3));
        assert!((af.norm() - 1.0).abs() < 1e-15);
        let back = a_to_b(&af, &tol).unwrap();
        assert!((back.b.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn petersen_a_form() {
        let tol = Tolerances::default();
        let cf = closed_form_1wr(&Graph::kneser(5, 2).unwrap(), &tol).unwrap();
        let af = b_to_a(&cf.dual, &tol).unwrap();
        assert!((af.lambda_max - 1.5).abs() < 1e-12);
        assert!((af.lambda_min + 1.0).abs() < 1e-12);
        let mult_neg_one = crate::linalg::eig_sym(&af.a)
            .unwrap()
            .eigenvalues
            .iter()
            .filter(|&&l| (l + 1.0).abs() < 1e-9)
            .count();
        assert_eq!(mult_neg_one, cf.dual.corank);
    }
}
