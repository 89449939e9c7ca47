//! Hitting probabilities for convex bodies thrown at random onto a lattice of
//! congruent triangles.
//!
//! The crate is `no_std` (it needs `alloc`). It contains the lattice geometry,
//! convex bodies described by their support functions, the general
//! probability engine built on angular autocorrelation integrals, the
//! closed-form specialisations for needles, rectangles, ellipses and half
//! discs, and a Monte Carlo throw simulator used as an independent oracle.
//!
//! File formats, the command line and parallel execution live in the `trilat`
//! companion crate.
#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies the float methods in no_std builds; whenever
// std is anywhere in the build graph the inherent methods win instead.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod body;
pub mod closedform;
pub mod elliptic;
pub mod engine;
mod error;
pub mod geom;
pub mod lattice;
pub mod quadrature;
pub mod simulate;

pub use body::{ConvexBody, Placement, Shape};
pub use closedform::ClosedFormKind;
pub use engine::{AutocorrelationIntegrals, FitCheck, HitDistribution, Method};
pub use error::{Error, Result};
pub use geom::Vec2;
pub use lattice::{CellIndex, Parity, TriangleLattice};
pub use simulate::{SimCounts, SimReport, ThrowSample};

/// Default absolute tolerance for each autocorrelation integral.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
