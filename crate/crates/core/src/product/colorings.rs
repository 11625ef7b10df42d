use alloc::vec::Vec;

use crate::coloring::VectorColoring;
use crate::graph::{categorical_product, Graph, ProductIndex};
use crate::linalg::{eig_sym, norm, SymMatrix};
use crate::structure::{is_neighborly, NeighborlinessWitness};
use crate::{Error, Result, Tolerances};

/// The coloring `(i, l) -> p_i` of `G x H`, Gram `M ⊗ J`. When `H` has no
/// edges the product has none either and the zero coloring is returned.
pub fn induced_coloring(g: &Graph, vc_g: &VectorColoring, h: &Graph, tol: &Tolerances) -> Result<VectorColoring> {
    check_order(g, vc_g)?;
    let p = categorical_product(g, h);
    let nh = h.order();
    if h.is_empty() {
        return VectorColoring::from_gram(&p, SymMatrix::zeros(p.order()), tol);
    }
    let gram = SymMatrix::from_fn(p.order(), |a, b| vc_g.gram.get(a / nh, b / nh));
    VectorColoring::from_gram(&p, gram, tol)
}

/// `(i, l) -> q_l`, Gram `J ⊗ N`.
pub fn induced_coloring_h(g: &Graph, h: &Graph, vc_h: &VectorColoring, tol: &Tolerances) -> Result<VectorColoring> {
    check_order(h, vc_h)?;
    let p = categorical_product(g, h);
    let nh = h.order();
    if g.is_empty() {
        return VectorColoring::from_gram(&p, SymMatrix::zeros(p.order()), tol);
    }
    let gram = SymMatrix::from_fn(p.order(), |a, b| vc_h.gram.get(a % nh, b % nh));
    VectorColoring::from_gram(&p, gram, tol)
}

fn check_order(g: &Graph, vc: &VectorColoring) -> Result<()> {
    if vc.order() != g.order() {
        return Err(Error::DimensionMismatch {
            expected: g.order(),
            found: vc.order(),
        });
    }
    Ok(())
}

/// `w_{il} = sqrt(alpha) p_i ⊕ sqrt(1 - alpha) q_l`, Gram
/// `alpha (M ⊗ J) + (1 - alpha) (J ⊗ N)`. Both colorings must share `t`.
pub fn direct_sum(
    g: &Graph,
    vc_g: &VectorColoring,
    h: &Graph,
    vc_h: &VectorColoring,
    alpha: f64,
    tol: &Tolerances,
) -> Result<VectorColoring> {
    check_order(g, vc_g)?;
    check_order(h, vc_h)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param("alpha must lie in [0, 1]"));
    }
    if (vc_g.t - vc_h.t).abs() > tol.tight_tol {
        return Err(Error::precondition(alloc::format!(
            "colorings have different values {} and {}",
            vc_g.t,
            vc_h.t
        )));
    }
    let p = categorical_product(g, h);
    let nh = h.order();
    let beta = 1.0 - alpha;
    let gram = SymMatrix::from_fn(p.order(), |a, b| {
        alpha * vc_g.gram.get(a / nh, b / nh) + beta * vc_h.gram.get(a % nh, b % nh)
    });
    VectorColoring::from_gram(&p, gram, tol)
}

/// Largest spread of `Gram[(i,l),(j,k)]` over `(l, k)` for fixed `(i, j)`.
fn spread_g(w: &SymMatrix, ng: usize, nh: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..ng {
        for j in i..ng {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for l in 0..nh {
                for k in 0..nh {
                    let v = w.get(i * nh + l, j * nh + k);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            worst = worst.max(hi - lo);
        }
    }
    worst
}

fn spread_h(w: &SymMatrix, ng: usize, nh: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for l in 0..nh {
        for k in l..nh {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for i in 0..ng {
                for j in 0..ng {
                    let v = w.get(i * nh + l, j * nh + k);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            worst = worst.max(hi - lo);
        }
    }
    worst
}

fn check_sizes(w: &VectorColoring, ng: usize, nh: usize) -> Result<()> {
    if w.order() != ng * nh {
        return Err(Error::DimensionMismatch {
            expected: ng * nh,
            found: w.order(),
        });
    }
    Ok(())
}

pub fn is_induced_by_g(w: &VectorColoring, ng: usize, nh: usize, tol: f64) -> Result<bool> {
    check_sizes(w, ng, nh)?;
    Ok(spread_g(&w.gram, ng, nh) <= tol)
}

pub fn is_induced_by_h(w: &VectorColoring, ng: usize, nh: usize, tol: f64) -> Result<bool> {
    check_sizes(w, ng, nh)?;
    Ok(spread_h(&w.gram, ng, nh) <= tol)
}

/// `W = alpha (M ⊗ J) + (1 - alpha) (J ⊗ N)` with `M`, `N` colorings of the
/// factors at the value of `W`. A part is `None` when its weight is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDecomposition {
    pub alpha: f64,
    pub m_part: Option<SymMatrix>,
    pub n_part: Option<SymMatrix>,
    /// `max |W - (M' ⊗ J + J ⊗ N')|` of the additive fit.
    pub fit_residual: f64,
    /// Feasible interval of the shift between the two parts.
    pub shift_interval: (f64, f64),
}

const BISECTION_STEPS: usize = 60;

/// Smallest `c` in `[lo, hi]` with `f(c)` true, for `f` monotone
/// (false then true). `None` if `f(hi)` is false.
fn first_true(lo: f64, hi: f64, f: impl Fn(f64) -> bool) -> Option<f64> {
    if !f(hi) {
        return None;
    }
    if f(lo) {
        return Some(lo);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (a + b);
        if f(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Some(b)
}

fn shifted_min_eig(x: &SymMatrix, c: f64) -> f64 {
    let n = x.size();
    let y = SymMatrix::from_fn(n, |i, j| x.get(i, j) + c);
    eig_sym(&y).map_or(f64::NEG_INFINITY, |s| s.lambda_min())
}

/// Recognizes a convex combination of colorings induced by the factors.
pub fn convex_decompose(w: &VectorColoring, g: &Graph, h: &Graph, tol: &Tolerances) -> Result<Option<ConvexDecomposition>> {
    let (ng, nh) = (g.order(), h.order());
    check_sizes(w, ng, nh)?;
    if ng == 0 || nh == 0 {
        return Ok(None);
    }
    let eps = tol.tight_tol;
    let x = &w.gram;
    let cell = |i: usize, j: usize, l: usize, k: usize| x.get(i * nh + l, j * nh + k);

    let a = SymMatrix::from_fn(ng, |i, j| {
        let mut s = 0.0;
        for l in 0..nh {
            for k in 0..nh {
                s += cell(i, j, l, k);
            }
        }
        s / (nh * nh) as f64
    });
    let grand = a.sum() / (ng * ng) as f64;
    let b = SymMatrix::from_fn(nh, |l, k| {
        let mut s = 0.0;
        for i in 0..ng {
            for j in 0..ng {
                s += cell(i, j, l, k);
            }
        }
        s / (ng * ng) as f64 - grand
    });
    let mut fit_residual: f64 = 0.0;
    for i in 0..ng {
        for j in 0..ng {
            for l in 0..nh {
                for k in 0..nh {
                    fit_residual = fit_residual.max((cell(i, j, l, k) - a.get(i, j) - b.get(l, k)).abs());
                }
            }
        }
    }
    if fit_residual > eps {
        return Ok(None);
    }

    // lambda_min(a + cJ) increases with c, lambda_min(b - cJ) decreases
    let bound = x.frobenius_norm().max(1.0);
    let Some(c_lo) = first_true(-bound, bound, |c| shifted_min_eig(&a, c) >= -eps) else {
        return Ok(None);
    };
    let Some(neg_hi) = first_true(-bound, bound, |s| shifted_min_eig(&b, s) >= -eps) else {
        return Ok(None);
    };
    let c_hi = -neg_hi;
    if c_lo > c_hi + 1e-12 * bound {
        return Ok(None);
    }
    let c = 0.5 * (c_lo + c_hi);

    let t = w.t;
    if !(t > 1.0) {
        return Ok(None);
    }
    let gamma = a.get(0, 0) + c;
    let mut alpha = gamma / (t - 1.0);
    if alpha.abs() <= eps {
        alpha = 0.0;
    } else if (1.0 - alpha).abs() <= eps {
        alpha = 1.0;
    }
    if !(-eps..=1.0 + eps).contains(&alpha) {
        return Ok(None);
    }
    let m_part = (alpha > 0.0).then(|| SymMatrix::from_fn(ng, |i, j| (a.get(i, j) + c) / alpha));
    let n_part = (alpha < 1.0).then(|| SymMatrix::from_fn(nh, |l, k| (b.get(l, k) - c) / (1.0 - alpha)));
    for (graph, part) in [(g, &m_part), (h, &n_part)] {
        if let Some(p) = part {
            let vc = VectorColoring::from_gram(graph, p.clone(), tol)?;
            if (vc.t - t).abs() > eps || vc.check_feasible(graph, tol).is_err() {
                return Ok(None);
            }
        }
    }
    Ok(Some(ConvexDecomposition {
        alpha,
        m_part,
        n_part,
        fit_residual,
        shift_interval: (c_lo, c_hi),
    }))
}

/// Combines conical dependencies `p_i + sum_j a_j p_j = 0` of `G` and
/// `q_l + sum_k b_k q_k = 0` of `H` (each with coefficient sum `t - 1`)
/// into `w_{il} + sum a_j b_k / (t - 1) w_{jk} = 0` on `G x H`.
///
/// The residual is measured on `w`, a coloring of the product built from
/// colorings in which the witnesses hold.
pub fn build_product_dependency(
    witness_g: &NeighborlinessWitness,
    witness_h: &NeighborlinessWitness,
    t: f64,
    nh: usize,
    w: &VectorColoring,
) -> Result<NeighborlinessWitness> {
    let ag = witness_g.conical();
    let bh = witness_h.conical();
    let lam = t - 1.0;
    for (name, c) in [("G", &ag), ("H", &bh)] {
        let s: f64 = c.iter().map(|e| e.1).sum();
        if (s - lam).abs() > 1e-6 {
            return Err(Error::precondition(alloc::format!(
                "{name} coefficients sum to {s}, expected {lam}"
            )));
        }
    }
    if witness_h.vertex >= nh || w.order() % nh != 0 {
        return Err(Error::param("product sizes do not match the witnesses"));
    }
    let vertex = ProductIndex::new(witness_g.vertex, witness_h.vertex, nh).flat;
    let mut conical: Vec<(usize, f64)> = Vec::with_capacity(ag.len() * bh.len());
    for &(j, a) in &ag {
        for &(k, b) in &bh {
            conical.push((ProductIndex::new(j, k, nh).flat, a * b / lam));
        }
    }
    let total = 1.0 + conical.iter().map(|e| e.1).sum::<f64>();
    let mut coefficients: Vec<(usize, f64)> = conical.into_iter().map(|(v, c)| (v, c / total)).collect();
    coefficients.push((vertex, 1.0 / total));
    coefficients.sort_by_key(|e| e.0);

    let d = w.rank();
    let mut combo = alloc::vec![0.0; d];
    for &(v, a) in &coefficients {
        for (c, x) in combo.iter_mut().zip(w.vector(v)) {
            *c += a * x;
        }
    }
    let residual = norm(&combo);
    let sum_alpha: f64 = coefficients.iter().map(|e| e.1).sum();
    Ok(NeighborlinessWitness {
        vertex,
        forced_identity_residual: (sum_alpha - t / total).abs(),
        residual,
        coefficients,
        marginal: residual > 1e-8 && residual <= 1e-6,
    })
}

/// Witnesses for `i` in `vc_g` and `l` in `vc_h`, combined.
pub fn product_dependency_for(
    vc_g: &VectorColoring,
    i: usize,
    vc_h: &VectorColoring,
    l: usize,
    w: &VectorColoring,
    tol: f64,
) -> Result<Option<NeighborlinessWitness>> {
    let (Some(wg), Some(wh)) = (is_neighborly(vc_g, i, tol)?, is_neighborly(vc_h, l, tol)?) else {
        return Ok(None);
    };
    build_product_dependency(&wg, &wh, vc_g.t, vc_h.order(), w).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::closed_form_1wr;
    use crate::linalg::numeric_rank;

    fn clique(m: usize) -> (Graph, VectorColoring) {
        let g = Graph::complete(m).unwrap();
        let mm = SymMatrix::identity(m).scaled(m as f64).sub(&SymMatrix::ones(m));
        let vc = VectorColoring::from_gram(&g, mm, &Tolerances::default()).unwrap();
        (g, vc)
    }

    #[test]
    fn induced_from_triangle() {
        let tol = Tolerances::default();
        let (g, vc) = clique(3);
        let h = Graph::complete(4).unwrap();
        let w = induced_coloring(&g, &vc, &h, &tol).unwrap();
        assert!((w.t - 3.0).abs() < 1e-12);
        assert_eq!(w.rank(), 2);
        w.check_feasible(&categorical_product(&g, &h), &tol).unwrap();
        for (a, b) in [(0, 5), (1, 11), (6, 3)] {
            assert_eq!(w.gram.get(a, b), vc.gram.get(a / 4, b / 4));
        }
        assert!(is_induced_by_g(&w, 3, 4, 1e-9).unwrap());
        assert!(!is_induced_by_h(&w, 3, 4, 1e-9).unwrap());
    }

    #[test]
    fn induced_onto_edgeless() {
        let tol = Tolerances::default();
        let (g, vc) = clique(3);
        let w = induced_coloring(&g, &vc, &Graph::empty(2), &tol).unwrap();
        assert_eq!(w.order(), 6);
        assert_eq!(w.rank(), 0);
        assert_eq!(w.t, 1.0);
    }

    #[test]
    fn direct_sums() {
        let tol = Tolerances::default();
        let (g, vc) = clique(3);
        let full = direct_sum(&g, &vc, &g, &vc, 1.0, &tol).unwrap();
        let ind = induced_coloring(&g, &vc, &g, &tol).unwrap();
        assert!(full.gram.sub(&ind.gram).max_abs() < 1e-15);
        let half = direct_sum(&g, &vc, &g, &vc, 0.5, &tol).unwrap();
        assert_eq!(numeric_rank(&half.gram, 1e-9).unwrap(), 4);
        assert!(!is_induced_by_g(&half, 3, 3, 1e-6).unwrap());
        for a in [0.0, 0.3, 0.7] {
            let w = direct_sum(&g, &vc, &g, &vc, a, &tol).unwrap();
            assert!(w.gram.diag().iter().all(|d| (d - 2.0).abs() < 1e-12));
        }
        let (k4, vc4) = clique(4);
        assert!(direct_sum(&g, &vc, &k4, &vc4, 0.5, &tol).is_err());
    }

    #[test]
    fn decompose_round_trip() {
        let tol = Tolerances::default();
        let (g, vc) = clique(3);
        for a in [0.0, 0.25, 0.3, 0.5, 0.75, 1.0] {
            let w = direct_sum(&g, &vc, &g, &vc, a, &tol).unwrap();
            let dec = convex_decompose(&w, &g, &g, &tol).unwrap().unwrap();
            assert!((dec.alpha - a).abs() < 1e-6, "alpha {a} -> {}", dec.alpha);
            if let Some(m) = &dec.m_part {
                assert!(m.sub(&vc.gram).max_abs() < 1e-5);
            }
            if let Some(n) = &dec.n_part {
                assert!(n.sub(&vc.gram).max_abs() < 1e-5);
            }
        }
    }

    #[test]
    fn non_additive_rejected() {
        let tol = Tolerances::default();
        let g = Graph::complete(2).unwrap();
        let p = categorical_product(&g, &g);
        let gram = SymMatrix::identity(4);
        let w = VectorColoring::from_gram(&p, gram, &tol).unwrap();
        assert!(convex_decompose(&w, &g, &g, &tol).unwrap().is_none());
    }

    #[test]
    fn triangle_dependency() {
        let tol = Tolerances::default();
        let (g, vc) = clique(3);
        let w = direct_sum(&g, &vc, &g, &vc, 0.5, &tol).unwrap();
        let dep = product_dependency_for(&vc, 0, &vc, 0, &w, 1e-9).unwrap().unwrap();
        let conical = dep.conical();
        assert_eq!(conical.len(), 4);
        for (v, c) in conical {
            assert!((c - 0.5).abs() < 1e-12);
            let pi = ProductIndex::from_flat(v, 3);
            assert!(pi.g_index != 0 && pi.h_index != 0);
        }
        assert!(dep.residual < 1e-7);
    }

    #[test]
    fn edge_dependency() {
        let tol = Tolerances::default();
        let (g, vc) = clique(2);
        let w = direct_sum(&g, &vc, &g, &vc, 0.5, &tol).unwrap();
        let dep = product_dependency_for(&vc, 0, &vc, 1, &w, 1e-9).unwrap().unwrap();
        assert_eq!(dep.conical(), alloc::vec![(2, 1.0)]);
        assert!(dep.residual < 1e-12);
    }

    #[test]
    fn petersen_square_dependency() {
        let tol = Tolerances::default();
        let g = Graph::kneser(5, 2).unwrap();
        let cf = closed_form_1wr(&g, &tol).unwrap();
        let w = direct_sum(&g, &cf.coloring, &g, &cf.coloring, 0.5, &tol).unwrap();
        for (i, l) in [(0, 0), (3, 7), (9, 2)] {
            let dep = product_dependency_for(&cf.coloring, i, &cf.coloring, l, &w, 1e-9)
                .unwrap()
                .unwrap();
            assert!(dep.residual <= 1e-7, "residual {}", dep.residual);
        }
    }

    #[test]
    fn normalization_mismatch() {
        let tol = Tolerances::default();
        let (g, vc) = clique(3);
        let w = direct_sum(&g, &vc, &g, &vc, 0.5, &tol).unwrap();
        let wg = is_neighborly(&vc, 0, 1e-9).unwrap().unwrap();
        assert!(build_product_dependency(&wg, &wg, 4.0, 3, &w).is_err());
    }
}
