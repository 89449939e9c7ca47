//! Analytic probabilities against a simulation.

use serde::{Deserialize, Serialize};
use trilat_core::{HitDistribution, SimReport};

/// Largest admissible |z|.
pub const Z_LIMIT: f64 = 4.0;
/// Probabilities below this are reported but not tested.
pub const MIN_CHECKED_P: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub hits: u32,
    pub analytic: f64,
    pub simulated: f64,
    pub stderr: f64,
    /// `(simulated − analytic) / stderr`; infinite when the standard error
    /// vanishes but the values differ.
    pub z: f64,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub z_limit: f64,
    pub passed: bool,
}

impl Comparison {
    pub fn new(analytic: &HitDistribution, sim: &SimReport) -> Self {
        let top = sim.counts.len().max(6) as u32;
        let rows: Vec<ComparisonRow> = (1..=top)
            .map(|hits| {
                let analytic = analytic.p.get(hits as usize - 1).copied().unwrap_or(0.0);
                let simulated = sim.p(hits);
                let stderr = sim.stderr_of(hits);
                let diff = simulated - analytic;
                let z = if diff == 0.0 { 0.0 } else { diff / stderr };
                ComparisonRow { hits, analytic, simulated, stderr, z, checked: analytic >= MIN_CHECKED_P }
            })
            .collect();
        let passed = rows.iter().all(|r| !r.checked || r.z.abs() <= Z_LIMIT);
        Comparison { rows, z_limit: Z_LIMIT, passed }
    }

    /// Largest |z| among the tested rows.
    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().filter(|r| r.checked).map(|r| r.z.abs()).fold(0.0, f64::max)
    }
}
