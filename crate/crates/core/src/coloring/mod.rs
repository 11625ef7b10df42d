//! Vector colorings on top of the conic solver: values, optimal pairs,
//! tight edges and skeletons, optimality certificates, and the conversions
//! between the dual matrix `B` and the edge-weighted form `A`.

mod chi;
mod duality;
mod types;

pub use chi::{
    chi_sv, chi_v, closed_form_1wr, closed_form_aform, eigenvalue_bound, skeleton, skeleton_of, ChiResult,
    ClosedForm, Skeleton, StrictResult,
};
pub use duality::{
    a_to_b, b_to_a, complementary_slackness, strict_complementarity, SlacknessReport, StrictComplementarity,
};
pub use types::{gram_to_vectors, tight_edges, AForm, DualWitness, VectorColoring};
