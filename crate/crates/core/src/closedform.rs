//! Closed-form distributions for needles, rectangles, ellipses and half
//! discs.
//!
//! These share no code with the quadrature engine beyond the fit test and
//! the `w = 2s` combination step for ellipses, so they serve as independent
//! references for it.

use core::f64::consts::{FRAC_PI_2, PI};
use num_traits::Float;

use crate::body::ConvexBody;
use crate::elliptic::complete_second_kind;
use crate::engine::{check_fit, symmetric_probabilities, HitDistribution, Method};
use crate::lattice::TriangleLattice;
use crate::quadrature::integrate;
use crate::{Error, Result};

const RIGHT_ANGLE_TOL: f64 = 1e-12;

/// A body and lattice combination with a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", tag = "kind"))]
pub enum ClosedFormKind {
    Needle { length: f64 },
    SantaloEquilateral { length: f64 },
    RectangleAcute { g: f64, h: f64 },
    RectangleObtuse { g: f64, h: f64 },
    Ellipse { g: f64, h: f64 },
    HalfDisc { r: f64 },
}

impl ClosedFormKind {
    /// The closed form applicable to `body` on `lat`, if any.
    pub fn for_body(body: &ConvexBody, lat: &TriangleLattice) -> Option<Self> {
        use crate::body::Shape;
        match *body.shape() {
            Shape::Needle { length } if is_equilateral(lat) => Some(Self::SantaloEquilateral { length }),
            Shape::Needle { length } => Some(Self::Needle { length }),
            Shape::Rectangle { g, h } if lat.is_acute_or_right() => Some(Self::RectangleAcute { g, h }),
            Shape::Rectangle { g, h } => Some(Self::RectangleObtuse { g, h }),
            Shape::Ellipse { g, h } => Some(Self::Ellipse { g, h }),
            Shape::Disc { r } => Some(Self::Ellipse { g: 2.0 * r, h: 2.0 * r }),
            Shape::HalfDisc { r } if lat.is_acute_or_right() => Some(Self::HalfDisc { r }),
            _ => None,
        }
    }

    /// Evaluates the closed form. With `force`, bodies failing the fit test
    /// are evaluated anyway and flagged.
    pub fn evaluate(&self, lat: &TriangleLattice, abs_tol: f64, force: bool) -> Result<HitDistribution> {
        match *self {
            Self::Needle { length } => needle_impl(length, lat, force),
            Self::SantaloEquilateral { length } => {
                if !is_equilateral(lat) {
                    return Err(Error::LatticeClass("Santaló's table needs an equilateral lattice"));
                }
                // Report oversize through the fit margin, as for every other kind.
                admit(&ConvexBody::needle(length)?, lat, force)?;
                santalo_impl(length, lat, force)
            }
            Self::RectangleAcute { g, h } => rectangle_acute_impl(g, h, lat, force),
            Self::RectangleObtuse { g, h } => rectangle_obtuse_impl(g, h, lat, force),
            Self::Ellipse { g, h } => ellipse_impl(g, h, lat, abs_tol, force),
            Self::HalfDisc { r } => half_disc_impl(r, lat, force),
        }
    }
}

fn is_equilateral(lat: &TriangleLattice) -> bool {
    let [a, b, c] = lat.sides();
    let tol = 1e-12 * lat.max_side();
    (a - b).abs() <= tol && (b - c).abs() <= tol
}

fn admit(body: &ConvexBody, lat: &TriangleLattice, force: bool) -> Result<(f64, bool)> {
    let fit = check_fit(body, lat);
    match (fit.fits(lat), force) {
        (true, _) => Ok((fit.margin, false)),
        (false, true) => Ok((fit.margin, true)),
        (false, false) => Err(Error::BodyTooLarge { margin: fit.margin }),
    }
}

fn finish(p: [f64; 6], lat: &TriangleLattice, u: f64, f: f64, margin: f64, forced: bool) -> HitDistribution {
    HitDistribution::analytic(p, lat, u, f, Method::ClosedForm, margin, forced)
}

/// `αa² + βb² + γc²`.
fn weighted_squares(lat: &TriangleLattice) -> f64 {
    let (a, b, c) = (lat.a(), lat.b(), lat.c());
    lat.alpha() * a * a + lat.beta() * b * b + lat.gamma() * c * c
}

/// Markov's probability that a needle of length `ell` hits one cell:
/// `1 + ℓ²(αa² + βb² + γc²)/(2πQ²) − ℓ(4a + 4b + 4c − 3ℓ)/(2πQ)`.
pub fn markov_p1(ell: f64, lat: &TriangleLattice) -> f64 {
    let q = lat.q();
    1.0 + ell * ell * weighted_squares(lat) / (2.0 * PI * q * q)
        - ell * (4.0 * lat.perimeter() - 3.0 * ell) / (2.0 * PI * q)
}

/// Needle of length `ell` on any lattice.
pub fn needle_distribution(ell: f64, lat: &TriangleLattice) -> Result<HitDistribution> {
    needle_impl(ell, lat, false)
}

fn needle_impl(ell: f64, lat: &TriangleLattice, force: bool) -> Result<HitDistribution> {
    let body = ConvexBody::needle(ell)?;
    let (margin, forced) = admit(&body, lat, force)?;
    let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
    let s2 = a * a + b * b + c * c;
    let l2 = ell * ell;
    let aw = weighted_squares(lat);
    let p2 = lat.perimeter() * 2.0 * ell / (PI * q) - s2 * l2 / (4.0 * q * q) - aw * l2 / (2.0 * PI * q * q)
        - 3.0 * l2 / (2.0 * PI * q);
    let p3 = s2 * l2 / (2.0 * q * q) - aw * l2 / (2.0 * PI * q * q) - 3.0 * l2 / (2.0 * PI * q);
    let p4 = 3.0 * l2 / (2.0 * PI * q) - s2 * l2 / (4.0 * q * q) + aw * l2 / (2.0 * PI * q * q);
    let p = [markov_p1(ell, lat), p2, p3, p4, 0.0, 0.0];
    Ok(finish(p, lat, 2.0 * ell, 0.0, margin, forced))
}

/// Santaló's table for a needle on the equilateral lattice of side `a`;
/// requires `ell ≤ √3 a / 2`.
pub fn santalo_equilateral(ell: f64, a: f64) -> Result<HitDistribution> {
    let lat = TriangleLattice::equilateral(a)?;
    santalo_impl(ell, &lat, false)
}

fn santalo_impl(ell: f64, lat: &TriangleLattice, force: bool) -> Result<HitDistribution> {
    let body = ConvexBody::needle(ell)?;
    let a = lat.a();
    let max = 3f64.sqrt() * a / 2.0;
    if ell > max * (1.0 + 1e-12) && !force {
        return Err(Error::NeedleTooLong { ell, max });
    }
    let margin = check_fit(&body, lat).margin;
    let x = ell / a;
    let r3 = 3f64.sqrt();
    let p = [
        1.0 - 4.0 * r3 / PI * x + (r3 / PI + 2.0 / 3.0) * x * x,
        4.0 * r3 / PI * x - (r3 / PI + 5.0 / 3.0) * x * x,
        (4.0 / 3.0 - r3 / PI) * x * x,
        (r3 / PI - 1.0 / 3.0) * x * x,
        0.0,
        0.0,
    ];
    Ok(finish(p, lat, 2.0 * ell, 0.0, margin, ell > max * (1.0 + 1e-12)))
}

/// Rectangle `g × h`, choosing the acute or obtuse form from the lattice.
pub fn rectangle_distribution(g: f64, h: f64, lat: &TriangleLattice) -> Result<HitDistribution> {
    if lat.is_acute_or_right() {
        rectangle_acute(g, h, lat)
    } else {
        rectangle_obtuse(g, h, lat)
    }
}

/// Rectangle on a lattice with no angle above `π/2`.
pub fn rectangle_acute(g: f64, h: f64, lat: &TriangleLattice) -> Result<HitDistribution> {
    rectangle_acute_impl(g, h, lat, false)
}

/// Rectangle on a lattice with one angle of at least `π/2`; the lattice is
/// relabelled so that this angle is `α`.
pub fn rectangle_obtuse(g: f64, h: f64, lat: &TriangleLattice) -> Result<HitDistribution> {
    rectangle_obtuse_impl(g, h, lat, false)
}

// Terms shared by both rectangle forms: everything except the F-terms.
fn rectangle_common(g: f64, h: f64, lat: &TriangleLattice) -> [f64; 4] {
    let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
    let s2 = a * a + b * b + c * c;
    let gg = g * g + h * h;
    let lin = lat.perimeter() * 2.0 * (g + h) / (PI * q);
    let aw = weighted_squares(lat) * gg / (2.0 * PI * q * q);
    let t = 3.0 * gg / (2.0 * PI * q);
    let sq = s2 * gg / (q * q);
    [1.0 - lin + aw + t, lin - sq / 4.0 - aw - t, sq / 2.0 - aw - t, t - sq / 4.0 + aw]
}

fn rectangle_acute_impl(g: f64, h: f64, lat: &TriangleLattice, force: bool) -> Result<HitDistribution> {
    if lat.gamma().max(lat.alpha()).max(lat.beta()) > FRAC_PI_2 + RIGHT_ANGLE_TOL {
        return Err(Error::LatticeClass("acute rectangle form needs all angles at most π/2"));
    }
    let body = ConvexBody::rectangle(g, h)?;
    let (margin, forced) = admit(&body, lat, force)?;
    let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
    let s2 = a * a + b * b + c * c;
    let f = g * h;
    let sf = s2 * f / (PI * q * q);
    let fq = f / q;
    let [c1, c2, c3, c4] = rectangle_common(g, h, lat);
    let p = [c1 + sf + fq, c2 - 2.0 * sf - fq, c3 + sf - fq, c4, 0.0, fq];
    Ok(finish(p, lat, 2.0 * (g + h), f, margin, forced))
}

fn rectangle_obtuse_impl(g: f64, h: f64, lat: &TriangleLattice, force: bool) -> Result<HitDistribution> {
    let lat = lat.with_largest_angle_first();
    if lat.alpha() < FRAC_PI_2 - RIGHT_ANGLE_TOL {
        return Err(Error::LatticeClass("obtuse rectangle form needs an angle of at least π/2"));
    }
    let body = ConvexBody::rectangle(g, h)?;
    let (margin, forced) = admit(&body, &lat, force)?;
    let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
    let f = g * h;
    let pq2 = PI * q * q;
    let fq = f / q;
    let af = 2.0 * lat.alpha() * f / (PI * q);
    let [c1, c2, c3, c4] = rectangle_common(g, h, &lat);
    let p = [
        c1 + 2.0 * a * a * f / pq2 + 2.0 * fq - af,
        c2 - (3.0 * a * a + b * b + c * c) * f / pq2 - 2.0 * fq + af,
        c3 + 2.0 * (b * b + c * c) * f / pq2 - 2.0 * fq + af,
        c4 - (b * b + c * c - a * a) * f / pq2 + fq - af,
        0.0,
        fq,
    ];
    Ok(finish(p, &lat, 2.0 * (g + h), f, margin, forced))
}

/// `I(x) = g² ∫₀^π √((1 − μ² sin²φ)(1 − μ² sin²(φ + x))) dφ` for the ellipse
/// with full axes `g ≥ h`.
pub fn ellipse_width_autocorrelation(g: f64, h: f64, x: f64, abs_tol: f64) -> Result<f64> {
    if g == 0.0 {
        return Ok(0.0);
    }
    let m = 1.0 - (h / g) * (h / g);
    let root = |t: f64| {
        let s = t.sin();
        (1.0 - m * s * s).max(0.0).sqrt()
    };
    // Only the flat case h = 0 has kinks, at sin φ = 0 and sin(φ + x) = 0.
    let breaks = [crate::geom::wrap(PI - x, PI)];
    let r = integrate(|t| root(t) * root(t + x), 0.0, PI, &breaks, abs_tol / (g * g))?;
    Ok(g * g * r.value)
}

/// Ellipse with full axes `g ≥ h`.
pub fn ellipse_distribution(g: f64, h: f64, lat: &TriangleLattice, abs_tol: f64) -> Result<HitDistribution> {
    ellipse_impl(g, h, lat, abs_tol, false)
}

fn ellipse_impl(g: f64, h: f64, lat: &TriangleLattice, abs_tol: f64, force: bool) -> Result<HitDistribution> {
    let body = ConvexBody::ellipse(g, h)?;
    let (margin, forced) = admit(&body, lat, force)?;
    let mu = if g > 0.0 { (1.0 - (h / g) * (h / g)).max(0.0).sqrt() } else { 0.0 };
    let u = 2.0 * g * complete_second_kind(mu);
    let f = PI * g * h / 4.0;
    let mut i = [0.0; 4];
    for (k, x) in [0.0, lat.alpha(), lat.beta(), lat.gamma()].into_iter().enumerate() {
        i[k] = ellipse_width_autocorrelation(g, h, x, abs_tol)?;
    }
    let p = symmetric_probabilities(lat, u, f, i);
    Ok(finish(p, lat, u, f, margin, forced))
}

/// Half disc of radius `r` on a lattice with no angle above `π/2`.
pub fn half_disc_distribution(r: f64, lat: &TriangleLattice) -> Result<HitDistribution> {
    half_disc_impl(r, lat, false)
}

fn half_disc_impl(r: f64, lat: &TriangleLattice, force: bool) -> Result<HitDistribution> {
    if !lat.is_acute_or_right() {
        return Err(Error::ObtuseLatticeUnsupported);
    }
    let body = ConvexBody::half_disc(r)?;
    let (margin, forced) = admit(&body, lat, force)?;
    let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
    let (al, be, ga) = (lat.alpha(), lat.beta(), lat.gamma());
    let u = (PI + 2.0) * r;
    let f = PI * r * r / 2.0;
    let r2 = r * r;
    let q2 = q * q;
    let pq2 = PI * q2;
    let s2 = a * a + b * b + c * c;
    let pp = a * b + b * c + c * a;
    let aw = weighted_squares(lat);
    let bw = al * b * c + be * c * a + ga * a * b;
    let lin = lat.perimeter() * u / (PI * q);
    let rq = r2 / (PI * q);
    let p = [
        1.0 - lin + s2 * r2 / q2 + 4.0 * pp * r2 / pq2 - aw * r2 / (2.0 * pq2) + bw * r2 / pq2 - 4.5 * rq,
        lin - 13.0 * s2 * r2 / (4.0 * q2) - (8.0 - PI) * pp * r2 / pq2 + 5.0 * aw * r2 / (2.0 * pq2)
            - 3.0 * bw * r2 / pq2
            + 16.5 * rq,
        3.5 * s2 * r2 / q2 + (4.0 - 2.0 * PI) * pp * r2 / pq2 - 3.5 * aw * r2 / pq2 + 3.0 * bw * r2 / pq2 - 19.5 * rq,
        pp * r2 / q2 - 1.25 * s2 * r2 / q2 + 1.5 * aw * r2 / pq2 - bw * r2 / pq2 + 7.5 * rq - f / q,
        0.0,
        f / q,
    ];
    Ok(finish(p, lat, u, f, margin, forced))
}

/// `I(x)` of the half disc of radius `r` for `0 ≤ x ≤ π/2`.
pub fn half_disc_width_autocorrelation(r: f64, x: f64) -> f64 {
    r * r * ((PI + 4.0) + 0.5 * (PI - 2.0 * x) * x.cos() + x.sin())
}

/// `J(x)` of the half disc of radius `r` for `0 < x ≤ π/2`.
pub fn half_disc_support_autocorrelation(r: f64, x: f64) -> f64 {
    r * r * ((PI - x) + 0.5 * (PI - 3.0 * x) * x.cos() + 2.5 * x.sin())
}
