//! Hitting probabilities for an arbitrary convex body.
//!
//! Everything body-specific enters through the width and support
//! autocorrelations
//!
//! ```text
//! I(x) = ∫₀^π  w(φ) w(φ + x) dφ
//! J(x) = ∫₀^2π s(φ) s(φ + x) dφ
//! ```
//!
//! evaluated at `x ∈ {0, α, β, γ}`, together with the perimeter `u` and the
//! area `F`. The formulas hold as long as the body fits inside one cell at
//! every orientation; [`check_fit`] decides that.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use num_traits::Float;

use crate::body::ConvexBody;
use crate::geom::wrap;
use crate::lattice::TriangleLattice;
use crate::quadrature::integrate;
use crate::{Error, Result};

/// Grid size of the fit-condition search.
pub const FIT_GRID: usize = 4096;
/// Branch-and-bound stops refining once the certified bound on `max c*` is
/// within this fraction of `c` of the best sample.
const FIT_REFINE_TOL: f64 = 1e-11;
/// Evaluation budget of the refinement beyond the initial grid.
const FIT_REFINE_BUDGET: usize = 1 << 20;
/// Margins down to `-FIT_SLACK * c` count as fitting: equality in the
/// condition is immaterial and the certified bound may overshoot the
/// true maximum by `FIT_REFINE_TOL * c`.
pub const FIT_SLACK: f64 = 1e-9;

/// Which formula family produced a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    /// General formulas with both `I` and `J` integrals.
    Theorem1,
    /// `w = 2s` specialisation using `I` integrals only.
    SymmetricFastPath,
    ClosedForm,
    Simulation,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Theorem1 => "theorem1",
            Method::SymmetricFastPath => "symmetric_fastpath",
            Method::ClosedForm => "closed_form",
            Method::Simulation => "simulation",
        }
    }
}

/// Probabilities of hitting exactly 1..=6 cells.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HitDistribution {
    /// `p[i - 1]` is the probability of exactly `i` hits. Raw values, not clamped.
    pub p: [f64; 6],
    pub expectation: f64,
    pub method: Method,
    /// `c - max c*(φ)`; negative when the body does not fit a cell.
    pub condition_margin: f64,
    /// Set when the fit condition failed and the caller forced evaluation.
    /// Such values are extrapolated, not guaranteed by the formulas.
    pub forced: bool,
}

/// Absolute slack tolerated when clamping probabilities for display.
pub const PROBABILITY_EPS: f64 = 1e-9;

impl HitDistribution {
    pub(crate) fn analytic(
        p: [f64; 6],
        lat: &TriangleLattice,
        perimeter: f64,
        area: f64,
        method: Method,
        condition_margin: f64,
        forced: bool,
    ) -> Self {
        HitDistribution {
            p,
            expectation: expected_hits(lat, perimeter, area),
            method,
            condition_margin,
            forced,
        }
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }

    /// `Σ i p(i)`, to compare against [`HitDistribution::expectation`].
    pub fn mean_from_probabilities(&self) -> f64 {
        self.p.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum()
    }

    /// Probabilities clamped to `[0, 1]` for presentation.
    pub fn clamped(&self) -> [f64; 6] {
        let mut out = self.p;
        for p in &mut out {
            *p = p.clamp(0.0, 1.0);
        }
        out
    }
}

/// `E[Z] = 1 + (a + b + c) u / (π Q) + 2F / Q`.
pub fn expected_hits(lat: &TriangleLattice, perimeter: f64, area: f64) -> f64 {
    let q = lat.q();
    1.0 + lat.perimeter() * perimeter / (PI * q) + 2.0 * area / q
}

/// Autocorrelation integrals at `x ∈ {0, α, β, γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AutocorrelationIntegrals {
    pub i0: f64,
    pub i_alpha: f64,
    pub i_beta: f64,
    pub i_gamma: f64,
    pub j0: f64,
    pub j_alpha: f64,
    pub j_beta: f64,
    pub j_gamma: f64,
    /// Largest error estimate among the eight integrals.
    pub tol: f64,
}

pub fn f1(i: f64, j: f64) -> f64 {
    i - j
}

pub fn f2(i: f64, j: f64) -> f64 {
    2.0 * i - 3.0 * j
}

pub fn f3(i: f64, j: f64) -> f64 {
    i - 3.0 * j
}

/// Breakpoints of `φ ↦ g(φ) g(φ + x)` on `[0, period)` for a factor `g`
/// with the given kinks.
fn product_breakpoints(kinks: &[f64], x: f64, period: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * kinks.len());
    for &k in kinks {
        out.push(wrap(k, period));
        out.push(wrap(k - x, period));
    }
    out
}

/// `I(x) = ∫₀^π w(φ) w(φ + x) dφ` and its error estimate.
pub fn width_autocorrelation(body: &ConvexBody, x: f64, abs_tol: f64) -> Result<(f64, f64)> {
    let breaks = product_breakpoints(body.kink_angles(), x, PI);
    let r = integrate(|phi| body.width(phi) * body.width(phi + x), 0.0, PI, &breaks, abs_tol)?;
    Ok((r.value, r.error))
}

/// `J(x) = ∫₀^2π s(φ) s(φ + x) dφ` and its error estimate.
pub fn support_autocorrelation(body: &ConvexBody, x: f64, abs_tol: f64) -> Result<(f64, f64)> {
    let breaks = product_breakpoints(body.kink_angles(), x, TAU);
    let r = integrate(|phi| body.support(phi) * body.support(phi + x), 0.0, TAU, &breaks, abs_tol)?;
    Ok((r.value, r.error))
}

/// All eight integrals used by the general formulas.
pub fn autocorrelation(body: &ConvexBody, lat: &TriangleLattice, abs_tol: f64) -> Result<AutocorrelationIntegrals> {
    let xs = [0.0, lat.alpha(), lat.beta(), lat.gamma()];
    let mut i = [0.0; 4];
    let mut j = [0.0; 4];
    let mut tol: f64 = 0.0;
    for (k, &x) in xs.iter().enumerate() {
        let (iv, ie) = width_autocorrelation(body, x, abs_tol)?;
        let (jv, je) = support_autocorrelation(body, x, abs_tol)?;
        i[k] = iv;
        j[k] = jv;
        tol = tol.max(ie).max(je);
    }
    Ok(AutocorrelationIntegrals {
        i0: i[0],
        i_alpha: i[1],
        i_beta: i[2],
        i_gamma: i[3],
        j0: j[0],
        j_alpha: j[1],
        j_beta: j[2],
        j_gamma: j[3],
        tol,
    })
}

/// General probabilities from precomputed integrals.
pub fn theorem1_probabilities(
    lat: &TriangleLattice,
    perimeter: f64,
    area: f64,
    ints: &AutocorrelationIntegrals,
) -> [f64; 6] {
    let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
    let pq2 = PI * q * q;
    let sq = a * a + b * b + c * c;
    let lin = lat.perimeter() * perimeter / (PI * q);
    let j0 = sq * ints.j0 / (2.0 * pq2);
    let weighted = |f: fn(f64, f64) -> f64| {
        (b * c * f(ints.i_alpha, ints.j_alpha) + c * a * f(ints.i_beta, ints.j_beta) + a * b * f(ints.i_gamma, ints.j_gamma))
            / pq2
    };
    let sum_j = (b * c * ints.j_alpha + c * a * ints.j_beta + a * b * ints.j_gamma) / pq2;
    let p6 = area / q;
    [
        1.0 - lin + j0 + weighted(f1),
        lin - 3.0 * j0 - weighted(f2),
        3.0 * j0 + weighted(f3),
        sum_j - j0 - p6,
        0.0,
        p6,
    ]
}

/// Probabilities for bodies with `w = 2s`, from `I(0), I(α), I(β), I(γ)`.
pub fn symmetric_probabilities(lat: &TriangleLattice, perimeter: f64, area: f64, i: [f64; 4]) -> [f64; 6] {
    let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
    let pq2 = PI * q * q;
    let sq = a * a + b * b + c * c;
    let lin = lat.perimeter() * perimeter / (PI * q);
    let i0 = sq * i[0] / (4.0 * pq2);
    let mixed = (b * c * i[1] + c * a * i[2] + a * b * i[3]) / (2.0 * pq2);
    let p6 = area / q;
    [1.0 - lin + i0 + mixed, lin - 3.0 * i0 - mixed, 3.0 * i0 - mixed, mixed - i0 - p6, 0.0, p6]
}

/// Side `c*` of the smallest triangle similar to a cell, with the same
/// orientation, containing the body.
///
/// `phi` is the direction of the outward normal of that triangle's side `b`
/// in the body frame; the outward normals of sides `a` and `c` are then at
/// `phi - α - β` and `phi + π - α`.
pub fn c_star(body: &ConvexBody, lat: &TriangleLattice, phi: f64) -> f64 {
    let (sa, ca) = lat.alpha().sin_cos();
    let (sb, cb) = lat.beta().sin_cos();
    body.support(phi) / sa
        + body.support(phi - lat.alpha() - lat.beta()) / sb
        + body.support(phi + PI - lat.alpha()) * (ca / sa + cb / sb)
}

/// Outcome of the fit test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitCheck {
    /// `c − M` where `M` is a certified upper bound on `max_φ c*(φ)`.
    pub margin: f64,
    /// A sufficient incircle test passed: `max w ≤ 2ρ` for centrally
    /// symmetric bodies, containment in the disc of radius `ρ` otherwise.
    pub incircle_accept: bool,
}

impl FitCheck {
    /// Whether the probability formulas apply.
    pub fn fits(&self, lat: &TriangleLattice) -> bool {
        self.incircle_accept || self.margin >= -FIT_SLACK * lat.c()
    }
}

/// Decides whether the body fits a cell at every orientation.
///
/// `c*` is sampled on [`FIT_GRID`] points and each grid interval of length
/// `h` with endpoint values `f₀, f₁` is bounded two ways:
///
/// - `(f₀ + f₁)/2 + L h/2` with `L` a Lipschitz constant of `c*`;
/// - `max(f₀, f₁) + K h²/8`, because `s + s'' ≥ 0` for any support function
///   gives `c*'' ≥ −K` with `K = R (csc α + csc β + cot α + cot β)`, `R` the
///   circumradius about the reference point.
///
/// Intervals whose bound exceeds the best sample by more than `1e-11 c` are
/// bisected. The reported maximum is the largest bound left, so the margin
/// never overstates the true one.
///
/// `max w ≤ 2ρ` alone is not sufficient without central symmetry: an
/// equilateral triangle of side `0.55` has maximal width below `2ρ` on the
/// unit equilateral lattice but needs a cell of side `1.1` when turned over.
pub fn check_fit(body: &ConvexBody, lat: &TriangleLattice) -> FitCheck {
    let incircle_accept = if body.is_centrally_symmetric() {
        body.diameter() <= 2.0 * lat.rho()
    } else {
        body.circumradius() <= lat.rho()
    };
    let (sa, ca) = lat.alpha().sin_cos();
    let (sb, cb) = lat.beta().sin_cos();
    let coeff = 1.0 / sa + 1.0 / sb + ca / sa + cb / sb;
    let lip = body.support_slope_bound() * coeff;
    let curv = body.circumradius() * coeff;

    let h = TAU / FIT_GRID as f64;
    let samples: Vec<f64> = (0..=FIT_GRID).map(|k| c_star(body, lat, k as f64 * h)).collect();
    let mut best = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = FIT_REFINE_TOL * lat.c();

    let mut stack: Vec<(f64, f64, f64, f64)> =
        (0..FIT_GRID).map(|k| (k as f64 * h, (k + 1) as f64 * h, samples[k], samples[k + 1])).collect();
    let mut upper = best;
    let mut evals = 0usize;
    while let Some((lo, hi, flo, fhi)) = stack.pop() {
        let h = hi - lo;
        let bound = (0.5 * (flo + fhi) + 0.5 * lip * h).min(flo.max(fhi) + 0.125 * curv * h * h);
        if bound <= best + tol || evals >= FIT_REFINE_BUDGET {
            upper = upper.max(bound);
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let fm = c_star(body, lat, mid);
        evals += 1;
        best = best.max(fm);
        stack.push((lo, mid, flo, fm));
        stack.push((mid, hi, fm, fhi));
    }
    upper = upper.max(best);
    FitCheck { margin: lat.c() - upper, incircle_accept }
}

fn admit(body: &ConvexBody, lat: &TriangleLattice, force: bool) -> Result<(f64, bool)> {
    let fit = check_fit(body, lat);
    if fit.fits(lat) {
        Ok((fit.margin, false))
    } else if force {
        Ok((fit.margin, true))
    } else {
        Err(Error::BodyTooLarge { margin: fit.margin })
    }
}

/// General formulas, valid for every convex body.
pub fn theorem1(body: &ConvexBody, lat: &TriangleLattice, abs_tol: f64, force: bool) -> Result<HitDistribution> {
    let (margin, forced) = admit(body, lat, force)?;
    let ints = autocorrelation(body, lat, abs_tol)?;
    let p = theorem1_probabilities(lat, body.perimeter(), body.area(), &ints);
    Ok(HitDistribution::analytic(p, lat, body.perimeter(), body.area(), Method::Theorem1, margin, forced))
}

/// `w = 2s` specialisation; only four width integrals are needed.
pub fn symmetric_fast_path(body: &ConvexBody, lat: &TriangleLattice, abs_tol: f64, force: bool) -> Result<HitDistribution> {
    if !body.is_centrally_symmetric() {
        return Err(Error::NotCentrallySymmetric);
    }
    let (margin, forced) = admit(body, lat, force)?;
    let mut i = [0.0; 4];
    for (k, x) in [0.0, lat.alpha(), lat.beta(), lat.gamma()].into_iter().enumerate() {
        i[k] = width_autocorrelation(body, x, abs_tol)?.0;
    }
    let p = symmetric_probabilities(lat, body.perimeter(), body.area(), i);
    Ok(HitDistribution::analytic(p, lat, body.perimeter(), body.area(), Method::SymmetricFastPath, margin, forced))
}

/// Picks the `w = 2s` path for centrally symmetric bodies and the general
/// formulas otherwise.
pub fn hit_probabilities(body: &ConvexBody, lat: &TriangleLattice, abs_tol: f64, force: bool) -> Result<HitDistribution> {
    if body.is_centrally_symmetric() {
        symmetric_fast_path(body, lat, abs_tol, force)
    } else {
        theorem1(body, lat, abs_tol, force)
    }
}
