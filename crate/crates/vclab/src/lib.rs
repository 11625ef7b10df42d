//! Files, configuration, certificates and subcommands for `vc-lab`.
//!
//! The numerical work happens in `vclab_core`; this crate reads graphs
//! (DIMACS or JSON), runs the analyses and serializes the outcome as
//! deterministic JSON certificates.

pub mod cert;
pub mod commands;
pub mod config;
mod error;
pub mod io;

pub use cert::{Certificate, Status};
pub use config::{OutputFormat, RunConfig};
pub use error::{Error, Result};
