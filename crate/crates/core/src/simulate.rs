//! Monte Carlo throws with exact hit counting.
//!
//! Each throw draws the reference point uniformly in the fundamental
//! parallelogram and the rotation uniformly in `[0, 2π)`, places the body and
//! counts the lattice cells it meets. Cell tests use a GJK distance search
//! on support maps, so no shape-specific geometry is involved.
//!
//! Throw `i` of a run with seed `s` is drawn from the ChaCha8 stream `i` of
//! key `s`, so results do not depend on how a run is split across workers.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::Range;
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::body::{ConvexBody, SupportMap};
use crate::engine::check_fit;
use crate::geom::Vec2;
use crate::lattice::TriangleLattice;
use crate::{Error, Result};

/// Iteration cap of the intersection search.
pub const GJK_MAX_ITER: u32 = 128;
/// Tangency tolerance relative to the longest lattice side.
pub const GJK_REL_EPS: f64 = 1e-12;

/// One throw and its hit count.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThrowSample {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
    pub hits: u32,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Position and rotation of throw `index` under `seed`: `y` uniform in
/// `[0, h_c]`, `x − y cot α` uniform in `[0, c]`, `φ` uniform in `[0, 2π)`.
pub fn throw_position(lat: &TriangleLattice, seed: u64, index: u64) -> (f64, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let y = uniform(&mut rng) * lat.h_c();
    let x = y * lat.alpha().cos() / lat.alpha().sin() + uniform(&mut rng) * lat.c();
    let phi = uniform(&mut rng) * TAU;
    (x, y, phi)
}

/// Draws throw `index` and counts its hits.
pub fn throw(body: &ConvexBody, lat: &TriangleLattice, seed: u64, index: u64) -> Result<ThrowSample> {
    let (x, y, phi) = throw_position(lat, seed, index);
    let hits = count_hits(body, lat, x, y, phi)?;
    Ok(ThrowSample { x, y, phi, hits })
}

/// Closest point to the origin on segment `ab`, and whether both endpoints
/// are needed to express it.
fn closest_on_segment(a: Vec2, b: Vec2) -> (Vec2, bool) {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return (a, false);
    }
    let t = -a.dot(ab) / len2;
    if t <= 0.0 {
        (a, false)
    } else if t >= 1.0 {
        (b, false)
    } else {
        (a + ab * t, true)
    }
}

/// Replaces the simplex by the smallest face containing its point closest to
/// the origin and returns that point, or `None` if the origin is enclosed.
fn reduce_simplex(simplex: &mut Vec<Vec2>) -> Option<Vec2> {
    match simplex.len() {
        1 => Some(simplex[0]),
        2 => {
            let (p, interior) = closest_on_segment(simplex[0], simplex[1]);
            if !interior {
                let keep = if p == simplex[0] { simplex[0] } else { simplex[1] };
                simplex.clear();
                simplex.push(keep);
            }
            Some(p)
        }
        _ => {
            let (a, b, c) = (simplex[0], simplex[1], simplex[2]);
            let area = (b - a).cross(c - a);
            if area != 0.0 {
                let s = area.signum();
                let inside = s * (b - a).cross(-a) >= 0.0 && s * (c - b).cross(-b) >= 0.0 && s * (a - c).cross(-c) >= 0.0;
                if inside {
                    return None;
                }
            }
            let mut best: Option<(f64, Vec2, [Vec2; 2], bool)> = None;
            for (p, q) in [(a, b), (b, c), (c, a)] {
                let (v, interior) = closest_on_segment(p, q);
                let d = v.norm_sq();
                if best.is_none_or(|(bd, ..)| d < bd) {
                    best = Some((d, v, [p, q], interior));
                }
            }
            let (_, v, [p, q], interior) = best.expect("three edges");
            simplex.clear();
            if interior {
                simplex.push(p);
                simplex.push(q);
            } else {
                simplex.push(if v == p { p } else { q });
            }
            Some(v)
        }
    }
}

/// Whether two closed convex sets given by support maps meet, treating
/// distances up to `eps` as contact.
///
/// Runs the GJK distance iteration on the Minkowski difference `a − b` and
/// stops as soon as a separating lower bound above `eps` is found, the origin
/// is enclosed, or the distance bounds agree to within `eps`.
pub fn intersects<A, B>(a: &A, b: &B, eps: f64) -> Result<bool>
where
    A: SupportMap + ?Sized,
    B: SupportMap + ?Sized,
{
    let support = |d: Vec2| a.support_point(d) - b.support_point(-d);
    let mut v = support(Vec2::new(1.0, 0.0));
    let mut simplex: Vec<Vec2> = alloc::vec![v];
    for _ in 0..GJK_MAX_ITER {
        let vv = v.norm_sq();
        if vv <= eps * eps {
            return Ok(true);
        }
        let norm = vv.sqrt();
        let w = support(-v);
        let lower = v.dot(w) / norm;
        if lower > eps {
            return Ok(false);
        }
        // lower ≤ eps here, so contact within eps is settled once the
        // bounds close or the new vertex brings no progress.
        if norm - lower <= eps || simplex.contains(&w) {
            return Ok(true);
        }
        simplex.push(w);
        match reduce_simplex(&mut simplex) {
            Some(next) => v = next,
            None => return Ok(true),
        }
    }
    Err(Error::NonConvergence { iterations: GJK_MAX_ITER })
}

fn distance_to_triangle(p: Vec2, tri: &[Vec2; 3]) -> f64 {
    let area = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
    let s = area.signum();
    let inside = (0..3).all(|k| s * (tri[(k + 1) % 3] - tri[k]).cross(p - tri[k]) >= 0.0);
    if inside {
        return 0.0;
    }
    (0..3)
        .map(|k| closest_on_segment(tri[k] - p, tri[(k + 1) % 3] - p).0.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Number of cells met by the body rotated by `phi` with reference point at
/// `(x, y)`.
pub fn count_hits(body: &ConvexBody, lat: &TriangleLattice, x: f64, y: f64, phi: f64) -> Result<u32> {
    let center = Vec2::new(x, y);
    let placed = body.place(phi, center);
    let eps = GJK_REL_EPS * lat.max_side();
    let reach = body.circumradius();
    let mut hits = 0;
    for idx in lat.cells_near(center, reach) {
        let tri = lat.cell_vertices(idx);
        if distance_to_triangle(center, &tri) > reach + eps {
            continue;
        }
        if intersects(&placed, &tri, eps)? {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Histogram of hit counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimCounts {
    // by_hits[k] counts throws with exactly k hits.
    by_hits: Vec<u64>,
}

impl SimCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, hits: u32) {
        let k = hits as usize;
        if self.by_hits.len() <= k {
            self.by_hits.resize(k + 1, 0);
        }
        self.by_hits[k] += 1;
    }

    /// Adds another histogram; order does not matter.
    pub fn merge(&mut self, other: &SimCounts) {
        if self.by_hits.len() < other.by_hits.len() {
            self.by_hits.resize(other.by_hits.len(), 0);
        }
        for (a, b) in self.by_hits.iter_mut().zip(&other.by_hits) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.by_hits.iter().sum()
    }

    /// Throws with exactly `hits` hits.
    pub fn get(&self, hits: u32) -> u64 {
        self.by_hits.get(hits as usize).copied().unwrap_or(0)
    }

    pub fn max_hits(&self) -> u32 {
        self.by_hits.iter().rposition(|&c| c > 0).unwrap_or(0) as u32
    }
}

/// Simulates throws `range` of the run keyed by `seed`.
///
/// When the body passes the fit test every throw must hit between one and
/// six cells; any other count aborts with [`Error::HitBound`]. Oversized
/// bodies only require at least one hit.
pub fn simulate_range(body: &ConvexBody, lat: &TriangleLattice, seed: u64, range: Range<u64>) -> Result<SimCounts> {
    let max_hits = if check_fit(body, lat).fits(lat) { 6 } else { u32::MAX };
    let mut counts = SimCounts::new();
    for index in range {
        let s = throw(body, lat, seed, index)?;
        if s.hits == 0 || s.hits > max_hits {
            return Err(Error::HitBound { index, hits: s.hits });
        }
        counts.record(s.hits);
    }
    Ok(counts)
}

/// Aggregated simulation result.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimReport {
    pub n: u64,
    pub seed: u64,
    /// `counts[i - 1]` throws hit exactly `i` cells, up to the largest count seen.
    pub counts: Vec<u64>,
    pub p_hat: Vec<f64>,
    /// Binomial standard errors `sqrt(p̂ (1 − p̂) / n)`.
    pub stderr: Vec<f64>,
    pub elapsed_seconds: f64,
}

impl SimReport {
    pub fn from_counts(counts: &SimCounts, seed: u64, elapsed_seconds: f64) -> Self {
        let n = counts.total();
        let top = counts.max_hits().max(1);
        let counts: Vec<u64> = (1..=top).map(|i| counts.get(i)).collect();
        let nf = n as f64;
        let p_hat: Vec<f64> = counts.iter().map(|&c| if n > 0 { c as f64 / nf } else { 0.0 }).collect();
        let stderr = p_hat.iter().map(|&p| if n > 0 { (p * (1.0 - p) / nf).sqrt() } else { 0.0 }).collect();
        SimReport { n, seed, counts, p_hat, stderr, elapsed_seconds }
    }

    /// Estimated probability of exactly `hits` hits.
    pub fn p(&self, hits: u32) -> f64 {
        self.p_hat.get((hits as usize).wrapping_sub(1)).copied().unwrap_or(0.0)
    }

    pub fn stderr_of(&self, hits: u32) -> f64 {
        self.stderr.get((hits as usize).wrapping_sub(1)).copied().unwrap_or(0.0)
    }

    pub fn mean_hits(&self) -> f64 {
        self.p_hat.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum()
    }
}

/// Sequential run of `n` throws. The `trilat` crate has a parallel version
/// producing identical counts.
pub fn run_simulation(body: &ConvexBody, lat: &TriangleLattice, n: u64, seed: u64) -> Result<SimReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one throw is required"));
    }
    let counts = simulate_range(body, lat, seed, 0..n)?;
    Ok(SimReport::from_counts(&counts, seed, 0.0))
}
