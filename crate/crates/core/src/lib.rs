//! Vector colorings of graphs and of their categorical products.
//!
//! The crate computes the vector chromatic number `chi_v` (and the strict
//! variant `chi_sv`) through a self-contained primal-dual interior-point
//! solver, recovers maximum-rank optimal colorings together with optimal dual
//! certificates, and analyses the structure of the optimal set: tight edges,
//! skeletons, neighborliness, unique vector colorability and the behaviour of
//! optimal colorings of `G x H`.
//!
//! Everything here is pure computation over `alloc`; file formats, the
//! command line and certificate serialization live in the `vclab` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coloring;
pub mod config;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod product;
pub mod sdp;
pub mod structure;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use graph::Graph;
pub use linalg::{Matrix, SymMatrix};
