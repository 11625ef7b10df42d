//! Categorical products: induced and direct-sum colorings, the min identity
//! for the product value, rank accounting, and the dual constructions
//! certifying that optimal product colorings are induced by a factor or are
//! convex combinations of induced ones.

mod analysis;
mod colorings;

pub use colorings::{
    build_product_dependency, convex_decompose, direct_sum, induced_coloring, induced_coloring_h, is_induced_by_g,
    is_induced_by_h, product_dependency_for, ConvexDecomposition,
};
pub use analysis::{
    corollary_pipeline, corollary_pipeline_with, kronecker_certificate, necessary_conditions,
    necessary_conditions_with, rank_accounting, rank_accounting_with, solve_product, verify_hedetniemi,
    verify_hedetniemi_with, CorollaryReport, CorollaryStatus, HedetniemiReport, HypothesisCheck,
    KroneckerCertificate, MinIdentity, NecessaryConditions, ProductAnalysis, ProductCase, ProductSolves,
    RankEstimate, Verdict, CHI_EQUALITY_TOL, HEDETNIEMI_TOL, KRONECKER_TOL,
};
