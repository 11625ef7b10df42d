//! The set of optimal colorings: neighborliness and arrow relations, the
//! uniqueness test via perturbation directions `R`, and construction of a
//! second optimal coloring when one exists.

mod neighborly;
mod uvc;

pub use neighborly::{arrow_set, is_neighborly, ArrowSet, NeighborlinessWitness};
pub use uvc::{second_coloring, uvc_check, uvc_check_with, RPerturbation, UvcReport, UvcVerdict};
