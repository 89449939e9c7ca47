//! Multi-threaded simulation. Throws are split into fixed-size chunks whose
//! histograms are summed, so the counts are identical to the sequential run
//! for any number of worker threads.

use std::time::Instant;

use rayon::prelude::*;
use trilat_core::simulate::simulate_range;
use trilat_core::{ConvexBody, Error, Result, SimCounts, SimReport, TriangleLattice};

const CHUNK: u64 = 1 << 14;

/// Runs `n` throws on the global rayon pool.
pub fn run_simulation(body: &ConvexBody, lat: &TriangleLattice, n: u64, seed: u64) -> Result<SimReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one throw is required"));
    }
    let start = Instant::now();
    let chunks = n.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|k| simulate_range(body, lat, seed, k * CHUNK..((k + 1) * CHUNK).min(n)))
        .try_reduce(SimCounts::new, |mut a, b| {
            a.merge(&b);
            Ok(a)
        })?;
    Ok(SimReport::from_counts(&counts, seed, start.elapsed().as_secs_f64()))
}

/// [`run_simulation`] on a dedicated pool with `threads` workers.
pub fn run_simulation_with_threads(
    body: &ConvexBody,
    lat: &TriangleLattice,
    n: u64,
    seed: u64,
    threads: usize,
) -> Result<SimReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|_| Error::InvalidArgument("could not start worker threads"))?;
    pool.install(|| run_simulation(body, lat, n, seed))
}
