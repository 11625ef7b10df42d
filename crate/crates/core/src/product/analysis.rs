use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::coloring::{a_to_b, b_to_a, chi_v, skeleton_of, AForm, ChiResult, DualWitness};
use crate::graph::{categorical_product, Graph};
use crate::linalg::{eig_sym, numeric_rank, SymMatrix};
use crate::structure::is_neighborly;
use crate::{Result, Tolerances};

/// Values closer than this are treated as equal when splitting cases.
pub const CHI_EQUALITY_TOL: f64 = 1e-6;
/// Tolerance on `chi_v(G x H) = min(chi_v(G), chi_v(H))`.
pub const HEDETNIEMI_TOL: f64 = 1e-5;
/// Tolerance on the eigenvalues of the Kronecker dual.
pub const KRONECKER_TOL: f64 = 1e-6;

const EPS_START: f64 = 1e-2;
const EPS_FLOOR: f64 = 1e-8;

/// Optimal pairs for both factors and the product.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSolves {
    pub g: ChiResult,
    pub h: ChiResult,
    pub product: ChiResult,
}

pub fn solve_product(g: &Graph, h: &Graph, tol: &Tolerances) -> Result<ProductSolves> {
    Ok(ProductSolves {
        g: chi_v(g, tol)?,
        h: chi_v(h, tol)?,
        product: chi_v(&categorical_product(g, h), tol)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductCase {
    LessThan,
    Equal,
}

impl ProductCase {
    pub fn as_str(self) -> &'static str {
        match self {
            ProductCase::LessThan => "less_than",
            ProductCase::Equal => "equal",
        }
    }
}

/// Orders the factors so that the first has the smaller value.
fn split(t_g: f64, t_h: f64) -> (ProductCase, bool) {
    if (t_g - t_h).abs() <= CHI_EQUALITY_TOL {
        (ProductCase::Equal, false)
    } else {
        (ProductCase::LessThan, t_g > t_h)
    }
}

/// `rk` bracketed by the rank of a maximum-rank primal and the corank of an
/// optimal dual: the two agree exactly when the pair is strictly
/// complementary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankEstimate {
    pub primal: usize,
    pub dual_corank: usize,
}

impl RankEstimate {
    pub fn of(chi: &ChiResult) -> Self {
        Self {
            primal: chi.coloring.rank(),
            dual_corank: chi.dual.corank,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        (self.primal == self.dual_corank).then_some(self.primal)
    }

    pub fn bracket(&self) -> (usize, usize) {
        (self.primal.min(self.dual_corank), self.primal.max(self.dual_corank))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AllInducedByG,
    AllConvexCombinations,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::AllInducedByG => "all_induced_by_G",
            Verdict::AllConvexCombinations => "all_convex_combinations",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Rank bookkeeping for `G x H`. After a swap (`swapped`), "G" refers to
/// the factor with the smaller value, i.e. the second input.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAnalysis {
    pub chi_g: f64,
    pub chi_h: f64,
    pub chi_product: f64,
    pub rk_g: RankEstimate,
    pub rk_h: RankEstimate,
    pub rk_product: RankEstimate,
    pub case: ProductCase,
    pub swapped: bool,
    pub verdict: Verdict,
    /// `Some(false)` when all ranks are exact and the rank equality fails,
    /// i.e. some optimal product coloring is not of the verdict's form.
    pub rank_condition: Option<bool>,
    /// `rk_product >= rk_g` (`+ rk_h` in the equal case) on the primal ranks.
    pub lower_bound_holds: bool,
    pub hedetniemi_residual: f64,
}

pub fn rank_accounting(g: &Graph, h: &Graph, tol: &Tolerances) -> Result<ProductAnalysis> {
    Ok(rank_accounting_with(&solve_product(g, h, tol)?))
}

pub fn rank_accounting_with(s: &ProductSolves) -> ProductAnalysis {
    let (case, swapped) = split(s.g.t, s.h.t);
    let (fg, fh) = if swapped { (&s.h, &s.g) } else { (&s.g, &s.h) };
    let rk_g = RankEstimate::of(fg);
    let rk_h = RankEstimate::of(fh);
    let rk_product = RankEstimate::of(&s.product);
    let target = |g: usize, h: usize| match case {
        ProductCase::LessThan => g,
        ProductCase::Equal => g + h,
    };
    let rank_condition = match (rk_g.exact(), rk_h.exact(), rk_product.exact()) {
        (Some(a), Some(b), Some(p)) => Some(p == target(a, b)),
        _ => None,
    };
    let verdict = match (rank_condition, case) {
        (Some(true), ProductCase::LessThan) => Verdict::AllInducedByG,
        (Some(true), ProductCase::Equal) => Verdict::AllConvexCombinations,
        _ => Verdict::Inconclusive,
    };
    ProductAnalysis {
        chi_g: fg.t,
        chi_h: fh.t,
        chi_product: s.product.t,
        rk_g,
        rk_h,
        rk_product,
        case,
        swapped,
        verdict,
        rank_condition,
        lower_bound_holds: rk_product.primal >= target(rk_g.primal, rk_h.primal),
        hedetniemi_residual: (s.product.t - fg.t.min(fh.t)).abs(),
    }
}

/// Spectrum of `A = A_G ⊗ A_H / (t - 1)` built from optimal edge-weighted
/// duals of the factors, `t` the larger value.
#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerCertificate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `||I + A||`
    pub norm: f64,
    /// `min(chi_v(G), chi_v(H))`
    pub expected: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinIdentity {
    pub chi_g: f64,
    pub chi_h: f64,
    pub chi_product: f64,
    pub discrepancy: f64,
    pub holds: bool,
}

impl MinIdentity {
    pub fn new(chi_g: f64, chi_h: f64, chi_product: f64) -> Self {
        let discrepancy = (chi_product - chi_g.min(chi_h)).abs();
        Self {
            chi_g,
            chi_h,
            chi_product,
            discrepancy,
            holds: discrepancy <= HEDETNIEMI_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedetniemiReport {
    pub vector: MinIdentity,
    /// Absent when a factor has no edges.
    pub kronecker: Option<KroneckerCertificate>,
    pub strict: Option<MinIdentity>,
}

impl HedetniemiReport {
    pub fn passed(&self) -> bool {
        self.vector.holds
            && self.kronecker.as_ref().is_none_or(|k| k.ok)
            && self.strict.as_ref().is_none_or(|s| s.holds)
    }
}

pub fn kronecker_certificate(ag: &AForm, ah: &AForm, chi_g: f64, chi_h: f64) -> Result<KroneckerCertificate> {
    let t = chi_g.max(chi_h);
    let a = ag.a.kron(&ah.a).scaled(1.0 / (t - 1.0));
    let s = eig_sym(&a)?;
    let expected = chi_g.min(chi_h);
    let norm = 1.0 + s.lambda_max();
    Ok(KroneckerCertificate {
        lambda_min: s.lambda_min(),
        lambda_max: s.lambda_max(),
        norm,
        expected,
        ok: (s.lambda_min() + 1.0).abs() <= KRONECKER_TOL && (norm - expected).abs() <= KRONECKER_TOL,
    })
}

/// Checks the min identity on solved instances and rebuilds the product
/// dual from the factor duals. `strict` carries the three strict values
/// when they were computed.
pub fn verify_hedetniemi_with(s: &ProductSolves, strict: Option<(f64, f64, f64)>, tol: &Tolerances) -> Result<HedetniemiReport> {
    let vector = MinIdentity::new(s.g.t, s.h.t, s.product.t);
    let nonempty = s.g.coloring.order() > 0
        && s.h.coloring.order() > 0
        && s.g.t > 1.0 + CHI_EQUALITY_TOL
        && s.h.t > 1.0 + CHI_EQUALITY_TOL;
    let kronecker = if nonempty {
        let ag = b_to_a(&s.g.dual, tol)?;
        let ah = b_to_a(&s.h.dual, tol)?;
        Some(kronecker_certificate(&ag, &ah, s.g.t, s.h.t)?)
    } else {
        None
    };
    Ok(HedetniemiReport {
        vector,
        kronecker,
        strict: strict.map(|(a, b, c)| MinIdentity::new(a, b, c)),
    })
}

pub fn verify_hedetniemi(g: &Graph, h: &Graph, strict: bool, tol: &Tolerances) -> Result<HedetniemiReport> {
    let s = solve_product(g, h, tol)?;
    let sv = if strict {
        use crate::coloring::chi_sv;
        Some((
            chi_sv(g, tol)?.t,
            chi_sv(h, tol)?.t,
            chi_sv(&categorical_product(g, h), tol)?.t,
        ))
    } else {
        None
    };
    verify_hedetniemi_with(&s, sv, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryStatus {
    Certified,
    /// The conclusion holds for a degenerate reason (edgeless factor).
    Trivial,
    HypothesisNotMet,
    ConstructionFailed,
}

impl CorollaryStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CorollaryStatus::Certified => "certified",
            CorollaryStatus::Trivial => "trivial",
            CorollaryStatus::HypothesisNotMet => "hypothesis not met",
            CorollaryStatus::ConstructionFailed => "construction failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport {
    pub case: ProductCase,
    pub swapped: bool,
    pub status: CorollaryStatus,
    pub checks: Vec<HypothesisCheck>,
    pub trace: Vec<String>,
    /// Final perturbation size in the less-than case.
    pub epsilon: Option<f64>,
    pub expected_corank: usize,
    pub product_corank: Option<usize>,
    /// `sum(B')` for the constructed product dual.
    pub product_value: Option<f64>,
    pub product_dual: Option<DualWitness>,
}

pub fn corollary_pipeline(g: &Graph, h: &Graph, tol: &Tolerances) -> Result<CorollaryReport> {
    corollary_pipeline_with(g, h, &chi_v(g, tol)?, &chi_v(h, tol)?, tol)
}

fn strict_check(name: &'static str, chi: &ChiResult) -> HypothesisCheck {
    let r = RankEstimate::of(chi);
    HypothesisCheck {
        name,
        passed: r.exact().is_some(),
        detail: format!("rank M = {}, corank B = {}", r.primal, r.dual_corank),
    }
}

/// Perturbs an optimal edge-weighted dual of `h` towards its adjacency
/// matrix until the top eigenvalue is simple with a positive eigenvector
/// and exceeds `floor`, keeping the least eigenvalue at -1.
fn irreducible_dual(h: &Graph, ah: &AForm, floor: f64, trace: &mut Vec<String>) -> Result<Option<(AForm, f64)>> {
    let adj = h.adjacency_matrix();
    let mut eps = EPS_START;
    while eps >= EPS_FLOOR {
        let x = ah.a.add(&adj.scaled(eps));
        let s = eig_sym(&x)?;
        let alpha = -1.0 / s.lambda_min();
        let a = x.scaled(alpha);
        let top = alpha * s.lambda_max();
        let gap = if s.size() > 1 {
            alpha * (s.eigenvalues[0] - s.eigenvalues[1])
        } else {
            f64::INFINITY
        };
        let mut u = s.vector(0);
        if u.iter().sum::<f64>() < 0.0 {
            u.iter_mut().for_each(|v| *v = -*v);
        }
        let positive = u.iter().all(|&v| v > 1e-12);
        trace.push(format!(
            "eps = {eps:e}: lambda_max = {top:.12e}, gap = {gap:.3e}, positive = {positive}"
        ));
        if top > floor + 1e-9 && gap > 1e-9 && positive {
            return Ok(Some((AForm::with_perron(a, u)?, eps)));
        }
        eps *= 0.5;
    }
    Ok(None)
}

fn kron_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Runs the sufficient-condition construction on given optimal factor
/// pairs: checks the hypotheses, builds `A = A_G ⊗ A_H / mu`, converts it
/// to a product dual `B'` and compares `corank(B')` with the target rank.
pub fn corollary_pipeline_with(
    g: &Graph,
    h: &Graph,
    chi_g: &ChiResult,
    chi_h: &ChiResult,
    tol: &Tolerances,
) -> Result<CorollaryReport> {
    let (case, swapped) = split(chi_g.t, chi_h.t);
    let (g, h, cg, ch) = if swapped { (h, g, chi_h, chi_g) } else { (g, h, chi_g, chi_h) };
    let rk_g = cg.coloring.rank();
    let rk_h = ch.coloring.rank();
    let expected_corank = match case {
        ProductCase::LessThan => rk_g,
        ProductCase::Equal => rk_g + rk_h,
    };
    let mut report = CorollaryReport {
        case,
        swapped,
        status: CorollaryStatus::HypothesisNotMet,
        checks: Vec::new(),
        trace: Vec::new(),
        epsilon: None,
        expected_corank,
        product_corank: None,
        product_value: None,
        product_dual: None,
    };
    if g.is_empty() || h.is_empty() {
        report.status = CorollaryStatus::Trivial;
        report.trace.push("a factor has no edges, so the product has none".into());
        return Ok(report);
    }

    match case {
        ProductCase::LessThan => {
            report.checks.push(HypothesisCheck {
                name: "H connected",
                passed: h.is_connected(),
                detail: format!("{} components", h.connected_components().len()),
            });
            report.checks.push(strict_check("G strictly complementary", cg));
            report.checks.push(HypothesisCheck {
                name: "G dual positive diagonal",
                passed: cg.dual.positive_diagonal,
                detail: format!(
                    "min diagonal {:.3e}",
                    cg.dual.b.diag().iter().copied().fold(f64::INFINITY, f64::min)
                ),
            });
        }
        ProductCase::Equal => {
            report.checks.push(strict_check("G strictly complementary", cg));
            report.checks.push(HypothesisCheck {
                name: "G dual connected",
                passed: cg.dual.connected,
                detail: format!("{} components", cg.dual.support.connected_components().len()),
            });
            report.checks.push(strict_check("H strictly complementary", ch));
            report.checks.push(HypothesisCheck {
                name: "H dual connected",
                passed: ch.dual.connected,
                detail: format!("{} components", ch.dual.support.connected_components().len()),
            });
        }
    }
    if report.checks.iter().any(|c| !c.passed) {
        return Ok(report);
    }

    let ag = b_to_a(&cg.dual, tol)?;
    report.trace.push(format!(
        "A_G: lambda_max = {:.12e}, lambda_min = {:.12e}",
        ag.lambda_max, ag.lambda_min
    ));
    let ah = match case {
        ProductCase::LessThan => {
            let base = b_to_a(&ch.dual, tol)?;
            match irreducible_dual(h, &base, ag.lambda_max, &mut report.trace)? {
                Some((a, eps)) => {
                    report.epsilon = Some(eps);
                    a
                }
                None => {
                    report.status = CorollaryStatus::ConstructionFailed;
                    report.trace.push(format!("perturbation reached the floor {EPS_FLOOR:e}"));
                    return Ok(report);
                }
            }
        }
        ProductCase::Equal => b_to_a(&ch.dual, tol)?,
    };
    report.trace.push(format!(
        "A_H: lambda_max = {:.12e}, lambda_min = {:.12e}",
        ah.lambda_max, ah.lambda_min
    ));

    let mu = match case {
        ProductCase::LessThan => ah.lambda_max,
        ProductCase::Equal => ag.lambda_max.max(ah.lambda_max),
    };
    let a: SymMatrix = ag.a.kron(&ah.a).scaled(1.0 / mu);
    let u = kron_vec(&ag.perron, &ah.perron);
    let af = AForm::with_perron(a, u)?;
    let au = af.a.mul_vec(&af.perron);
    let eig_residual = au
        .iter()
        .zip(&af.perron)
        .map(|(x, y)| (x - af.lambda_max * y).abs())
        .fold(0.0, f64::max);
    report.trace.push(format!(
        "A: lambda_max = {:.12e}, lambda_min = {:.12e}, eigenvector residual = {:.3e}",
        af.lambda_max, af.lambda_min, eig_residual
    ));
    let b = a_to_b(&af, tol)?;
    let value = b.value();
    let psd = eig_sym(&b.b)?.lambda_min() >= -tol.rank_tol;
    let corank = b.order() - numeric_rank(&b.b, tol.rank_tol)?;
    report.trace.push(format!(
        "B': value = {value:.12e}, corank = {corank}, psd = {psd}"
    ));
    let target = cg.t.min(ch.t);
    let ok = (af.lambda_min + 1.0).abs() <= KRONECKER_TOL
        && eig_residual <= KRONECKER_TOL
        && (value - target).abs() <= KRONECKER_TOL
        && psd
        && corank == expected_corank;
    report.status = if ok {
        CorollaryStatus::Certified
    } else {
        CorollaryStatus::ConstructionFailed
    };
    report.product_corank = Some(corank);
    report.product_value = Some(value);
    report.product_dual = Some(b);
    Ok(report)
}

/// Conditions that every "all induced" / "all convex combinations"
/// conclusion forces on the factors.
#[derive(Debug, Clone, PartialEq)]
pub struct NecessaryConditions {
    pub case: ProductCase,
    pub swapped: bool,
    /// Vertices of G isolated in its skeleton.
    pub g_isolated: Vec<usize>,
    /// Vertices of G without a neighbourliness witness.
    pub g_non_neighborly: Vec<usize>,
    pub h_connected: bool,
    pub g_skeleton_connected: bool,
    pub h_skeleton_connected: bool,
    /// The skeleton and witness computations disagree on some vertex.
    pub inconsistent_neighborliness: bool,
    pub holds: bool,
    /// The supplied verdict claims a conclusion these conditions rule out.
    pub contradiction: bool,
}

pub fn necessary_conditions(g: &Graph, h: &Graph, tol: &Tolerances) -> Result<NecessaryConditions> {
    necessary_conditions_with(g, h, &chi_v(g, tol)?, &chi_v(h, tol)?, None, tol)
}

pub fn necessary_conditions_with(
    g: &Graph,
    h: &Graph,
    chi_g: &ChiResult,
    chi_h: &ChiResult,
    verdict: Option<Verdict>,
    tol: &Tolerances,
) -> Result<NecessaryConditions> {
    let (case, swapped) = split(chi_g.t, chi_h.t);
    let (g, h, cg, ch) = if swapped { (h, g, chi_h, chi_g) } else { (g, h, chi_g, chi_h) };
    let sk_g = skeleton_of(g, cg)?;
    let sk_h = skeleton_of(h, ch)?;
    let g_isolated = sk_g.graph.isolated_vertices();
    let mut g_non_neighborly = Vec::new();
    if !g.is_empty() {
        for i in 0..g.order() {
            if is_neighborly(&cg.coloring, i, tol.tight_tol)?.is_none() {
                g_non_neighborly.push(i);
            }
        }
    }
    let holds = match case {
        ProductCase::LessThan => g_isolated.is_empty() && h.is_connected(),
        ProductCase::Equal => sk_g.graph.is_connected() && sk_h.graph.is_connected(),
    };
    let contradiction = !holds
        && matches!(
            (case, verdict),
            (ProductCase::LessThan, Some(Verdict::AllInducedByG))
                | (ProductCase::Equal, Some(Verdict::AllConvexCombinations))
        );
    Ok(NecessaryConditions {
        case,
        swapped,
        inconsistent_neighborliness: !g.is_empty() && g_isolated != g_non_neighborly,
        g_isolated,
        g_non_neighborly,
        h_connected: h.is_connected(),
        g_skeleton_connected: sk_g.graph.is_connected(),
        h_skeleton_connected: sk_h.graph.is_connected(),
        holds,
        contradiction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::closed_form_1wr;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn min_identity_small() {
        let k3 = Graph::complete(3).unwrap();
        let c5 = Graph::cycle(5).unwrap();
        let r = verify_hedetniemi(&k3, &c5, true, &tol()).unwrap();
        assert!((r.vector.chi_product - libm::sqrt(5.0)).abs() < 1e-6);
        assert!(r.passed(), "{r:?}");
        let k4 = Graph::complete(4).unwrap();
        let r = verify_hedetniemi(&k4, &k4, false, &tol()).unwrap();
        assert!((r.vector.chi_product - 4.0).abs() < 1e-6);
        assert!(r.kronecker.unwrap().ok);
    }

    #[test]
    fn min_identity_with_edgeless() {
        let r = verify_hedetniemi(&Graph::cycle(5).unwrap(), &Graph::empty(3), false, &tol()).unwrap();
        assert_eq!(r.vector.chi_product, 1.0);
        assert!(r.kronecker.is_none());
        assert!(r.passed());
    }

    #[test]
    fn accounting_k3_k4() {
        let a = rank_accounting(&Graph::complete(4).unwrap(), &Graph::complete(3).unwrap(), &tol()).unwrap();
        assert!(a.swapped);
        assert_eq!(a.case, ProductCase::LessThan);
        assert_eq!(a.rk_g.exact(), Some(2));
        assert_eq!(a.rk_product.exact(), Some(2));
        assert_eq!(a.verdict, Verdict::AllInducedByG);
        assert!(a.lower_bound_holds);
    }

    #[test]
    fn accounting_k3_k3() {
        let k3 = Graph::complete(3).unwrap();
        let a = rank_accounting(&k3, &k3, &tol()).unwrap();
        assert_eq!(a.case, ProductCase::Equal);
        assert_eq!(a.rk_product.exact(), Some(4));
        assert_eq!(a.verdict, Verdict::AllConvexCombinations);
    }

    #[test]
    fn pipeline_less_than() {
        let r = corollary_pipeline(&Graph::complete(3).unwrap(), &Graph::complete(4).unwrap(), &tol()).unwrap();
        assert_eq!(r.status, CorollaryStatus::Certified, "{r:?}");
        assert_eq!(r.product_corank, Some(2));
        assert_eq!(r.epsilon, Some(1e-2));
    }

    #[test]
    fn pipeline_petersen_square_closed_form() {
        let t = tol();
        let p = Graph::kneser(5, 2).unwrap();
        let cf = closed_form_1wr(&p, &t).unwrap().into_chi();
        let r = corollary_pipeline_with(&p, &p, &cf, &cf, &t).unwrap();
        assert_eq!(r.case, ProductCase::Equal);
        assert_eq!(r.status, CorollaryStatus::Certified, "{r:?}");
        assert_eq!(r.product_corank, Some(8));
    }

    #[test]
    fn pipeline_pendant_fails_hypothesis() {
        let g = Graph::complete(3).unwrap().with_pendant(0).unwrap();
        let r = corollary_pipeline(&g, &Graph::complete(4).unwrap(), &tol()).unwrap();
        assert_eq!(r.status, CorollaryStatus::HypothesisNotMet);
        assert!(r.checks.iter().any(|c| c.name == "G dual positive diagonal" && !c.passed));
    }

    #[test]
    fn necessary_ladder() {
        let t = tol();
        let g = Graph::complete(3).unwrap().with_pendant(0).unwrap();
        let k4 = Graph::complete(4).unwrap();
        let nc = necessary_conditions(&g, &k4, &t).unwrap();
        assert_eq!(nc.g_isolated, alloc::vec![3]);
        assert_eq!(nc.g_non_neighborly, alloc::vec![3]);
        assert!(!nc.holds && !nc.inconsistent_neighborliness);
        let k3 = Graph::complete(3).unwrap();
        let two = k3.disjoint_union(&k3);
        let nc = necessary_conditions(&two, &two, &t).unwrap();
        assert_eq!(nc.case, ProductCase::Equal);
        assert!(!nc.holds);
        let c = necessary_conditions_with(
            &two,
            &two,
            &chi_v(&two, &t).unwrap(),
            &chi_v(&two, &t).unwrap(),
            Some(Verdict::AllConvexCombinations),
            &t,
        )
        .unwrap();
        assert!(c.contradiction);
        let ok = necessary_conditions(&k3, &Graph::kneser(5, 2).unwrap(), &t).unwrap();
        assert!(ok.holds);
    }
}
