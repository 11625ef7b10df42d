//! Dense linear algebra for small symmetric problems.

mod chol;
mod eigen;
mod lp;
pub(crate) mod matrix;
mod nnls;
mod rank;
mod svd;

pub use chol::{cholesky, cholesky_psd, cholesky_solve, forward_substitute, lower_inverse, PsdCheck};
pub use eigen::{eig_sym, eigvals_sym, SpectralDecomposition};
pub use lp::{lp_feasible, lp_solve, LpOutcome, LpProblem};
pub use matrix::{dot, norm, Matrix, SymMatrix};
pub use nnls::{nnls, nnls_membership, Membership};
pub use rank::{kernel_basis, matrix_rank, null_space, numeric_rank};
pub use svd::{svd, Svd};
