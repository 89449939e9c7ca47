//! Command line tool and std-side plumbing for `trilat-core`: polygon files,
//! JSON and CSV output, parallel simulation and the analytic-versus-simulated
//! comparison harness.

pub mod cli;
pub mod compare;
mod error;
pub mod parallel;
pub mod polygon;
pub mod report;

pub use error::{AppError, ExitCode};
pub use trilat_core as core;
