//! Convex bodies described through their support functions.
//!
//! `support(phi)` is the standard support function of the body in its
//! reference orientation: the largest projection of a body point, measured
//! from the reference point `O`, onto the unit vector at angle `phi`.
//! Rotating the body by `theta` turns it into `phi -> support(phi - theta)`.
//! All autocorrelation integrals and fit conditions are taken over a full
//! turn, so the choice of `phi = 0` is an arbitrary body-fixed datum.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};
use num_traits::Float;

use crate::elliptic::complete_second_kind;
use crate::geom::{shoelace, wrap, Vec2};
use crate::{Error, Result};

/// Anything that can report its farthest point in a direction.
pub trait SupportMap {
    /// A point of the set maximising `p · dir`. `dir` need not be unit length.
    fn support_point(&self, dir: Vec2) -> Vec2;
}

impl SupportMap for [Vec2; 3] {
    #[inline]
    fn support_point(&self, dir: Vec2) -> Vec2 {
        self[..].support_point(dir)
    }
}

/// Concrete shape with its reference point at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Segment of the given length along the x-axis, centred at `O`.
    Needle { length: f64 },
    /// Axis-aligned rectangle, side `g` along x, centred at `O`.
    Rectangle { g: f64, h: f64 },
    /// Ellipse with full axis lengths `g ≥ h`, major axis along x.
    Ellipse { g: f64, h: f64 },
    /// `{|p| ≤ r, p.y ≤ 0}`: `O` is the midpoint of the flat side.
    HalfDisc { r: f64 },
    Disc { r: f64 },
    /// Counter-clockwise convex hull vertices relative to the centroid.
    Polygon { vertices: Vec<Vec2> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    shape: Shape,
    perimeter: f64,
    area: f64,
    kinks: Vec<f64>,
    centrally_symmetric: bool,
    circumradius: f64,
    diameter: f64,
    slope_bound: f64,
}

#[inline]
fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn check_length(x: f64) -> Result<f64> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(Error::NegativeLength(x))
    }
}

impl ConvexBody {
    /// Line segment of length `ell`, reference point at its midpoint.
    pub fn needle(ell: f64) -> Result<Self> {
        let ell = check_length(ell)?;
        let kinks = if ell > 0.0 { alloc::vec![FRAC_PI_2, 1.5 * PI] } else { Vec::new() };
        Ok(ConvexBody {
            shape: Shape::Needle { length: ell },
            perimeter: 2.0 * ell,
            area: 0.0,
            kinks,
            centrally_symmetric: true,
            circumradius: 0.5 * ell,
            diameter: ell,
            slope_bound: 0.5 * ell,
        })
    }

    /// The degenerate body consisting of the reference point only.
    pub fn point() -> Self {
        Self::needle(0.0).expect("zero length is valid")
    }

    /// Rectangle with sides `g` (along x) and `h`, centred.
    pub fn rectangle(g: f64, h: f64) -> Result<Self> {
        let g = check_length(g)?;
        let h = check_length(h)?;
        let mut kinks = Vec::new();
        if h > 0.0 {
            kinks.extend_from_slice(&[0.0, PI]);
        }
        if g > 0.0 {
            kinks.extend_from_slice(&[FRAC_PI_2, 1.5 * PI]);
        }
        kinks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let diag = g.hypot(h);
        Ok(ConvexBody {
            shape: Shape::Rectangle { g, h },
            perimeter: 2.0 * (g + h),
            area: g * h,
            kinks,
            centrally_symmetric: true,
            circumradius: 0.5 * diag,
            diameter: diag,
            slope_bound: 0.5 * diag,
        })
    }

    /// Ellipse with full major axis `g` and full minor axis `h`, centred.
    pub fn ellipse(g: f64, h: f64) -> Result<Self> {
        let g = check_length(g)?;
        let h = check_length(h)?;
        if h > g {
            return Err(Error::AxisOrder { g, h });
        }
        let mu = if g > 0.0 { (1.0 - (h / g) * (h / g)).max(0.0).sqrt() } else { 0.0 };
        let kinks = if h == 0.0 && g > 0.0 { alloc::vec![FRAC_PI_2, 1.5 * PI] } else { Vec::new() };
        Ok(ConvexBody {
            shape: Shape::Ellipse { g, h },
            perimeter: 2.0 * g * complete_second_kind(mu),
            area: PI * g * h / 4.0,
            kinks,
            centrally_symmetric: true,
            circumradius: 0.5 * g,
            diameter: g,
            slope_bound: 0.5 * (g - h),
        })
    }

    /// Half disc of radius `r`, reference point at the middle of the flat side.
    ///
    /// The support function is `r |cos φ|` on `[0, π]` and `r` on `[π, 2π]`.
    pub fn half_disc(r: f64) -> Result<Self> {
        let r = check_length(r)?;
        let kinks = if r > 0.0 { alloc::vec![0.0, FRAC_PI_2, PI] } else { Vec::new() };
        Ok(ConvexBody {
            shape: Shape::HalfDisc { r },
            perimeter: (PI + 2.0) * r,
            area: PI * r * r / 2.0,
            kinks,
            centrally_symmetric: false,
            circumradius: r,
            diameter: 2.0 * r,
            slope_bound: r,
        })
    }

    pub fn disc(r: f64) -> Result<Self> {
        let r = check_length(r)?;
        Ok(ConvexBody {
            shape: Shape::Disc { r },
            perimeter: TAU * r,
            area: PI * r * r,
            kinks: Vec::new(),
            centrally_symmetric: true,
            circumradius: r,
            diameter: 2.0 * r,
            slope_bound: 0.0,
        })
    }

    /// Convex polygon from its vertices, reference point at the centroid.
    ///
    /// Collinear and duplicate points are merged. A point strictly inside the
    /// hull is rejected with [`Error::NotConvex`].
    pub fn polygon(points: &[Vec2]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let hull = convex_hull(points);
        if hull.len() < 2 {
            return Err(Error::TooFewVertices);
        }
        let scale = points.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let tol = 1e-12 * scale;
        if hull.len() >= 3 {
            for (index, &p) in points.iter().enumerate() {
                let on_boundary = (0..hull.len()).any(|i| {
                    let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
                    let e = b - a;
                    let len = e.norm();
                    let dist = e.cross(p - a) / len;
                    let t = (p - a).dot(e) / (len * len);
                    dist.abs() <= tol && (-1e-12..=1.0 + 1e-12).contains(&t)
                });
                if !on_boundary {
                    return Err(Error::NotConvex { index });
                }
            }
        }

        let area = shoelace(&hull);
        let centroid = if hull.len() >= 3 && area > 1e-14 * scale * scale {
            let mut cx = 0.0;
            let mut cy = 0.0;
            for i in 0..hull.len() {
                let (p, q) = (hull[i], hull[(i + 1) % hull.len()]);
                let w = p.cross(q);
                cx += (p.x + q.x) * w;
                cy += (p.y + q.y) * w;
            }
            Vec2::new(cx / (6.0 * area), cy / (6.0 * area))
        } else {
            (hull[0] + hull[hull.len() - 1]) * 0.5
        };
        let vertices: Vec<Vec2> = hull.iter().map(|&p| p - centroid).collect();

        let n = vertices.len();
        let mut perimeter = 0.0;
        let mut kinks = Vec::with_capacity(n);
        for i in 0..n {
            let e = vertices[(i + 1) % n] - vertices[i];
            perimeter += e.norm();
            // Outward normal of a counter-clockwise edge.
            kinks.push(wrap((-e.x).atan2(e.y), TAU));
        }
        kinks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        kinks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

        let circumradius = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut diameter: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                diameter = diameter.max((vertices[i] - vertices[j]).norm());
            }
        }
        let sym_tol = 1e-12 * circumradius.max(f64::MIN_POSITIVE);
        let centrally_symmetric = n.is_multiple_of(2)
            && (0..n / 2).all(|i| (vertices[i] + vertices[i + n / 2]).norm() <= sym_tol);

        Ok(ConvexBody {
            shape: Shape::Polygon { vertices },
            perimeter,
            area: area.max(0.0),
            kinks,
            centrally_symmetric,
            circumradius,
            diameter,
            slope_bound: circumradius,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Perimeter `u`.
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Area `F`.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Sorted angles in `[0, 2π)` where the support function is not smooth.
    pub fn kink_angles(&self) -> &[f64] {
        &self.kinks
    }

    /// Whether `w(φ) = 2 s(φ)` for every `φ`.
    pub fn is_centrally_symmetric(&self) -> bool {
        self.centrally_symmetric
    }

    /// Largest distance from the reference point to a body point.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Largest width, `max_φ w(φ)`.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// An upper bound on `|s'(φ)|`, the Lipschitz constant of the support function.
    pub fn support_slope_bound(&self) -> f64 {
        self.slope_bound
    }

    /// Support function `s(φ)`.
    pub fn support(&self, phi: f64) -> f64 {
        match &self.shape {
            Shape::Needle { length } => 0.5 * length * phi.cos().abs(),
            Shape::Rectangle { g, h } => {
                let (s, c) = phi.sin_cos();
                0.5 * (g * c.abs() + h * s.abs())
            }
            Shape::Ellipse { g, h } => {
                let (s, c) = phi.sin_cos();
                0.5 * ((g * c) * (g * c) + (h * s) * (h * s)).sqrt()
            }
            Shape::HalfDisc { r } => {
                let p = wrap(phi, TAU);
                if p <= PI {
                    r * p.cos().abs()
                } else {
                    *r
                }
            }
            Shape::Disc { r } => *r,
            Shape::Polygon { vertices } => {
                let u = Vec2::unit(phi);
                vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    /// Width `w(φ) = s(φ) + s(φ + π)`.
    pub fn width(&self, phi: f64) -> f64 {
        self.support(phi) + self.support(phi + PI)
    }

    /// Boundary point attaining the support value in direction `φ`.
    pub fn support_point_at(&self, phi: f64) -> Vec2 {
        self.support_point(Vec2::unit(phi))
    }

    /// Returns a copy scaled by `factor > 0` about the reference point.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match &self.shape {
            Shape::Needle { length } => Self::needle(length * factor),
            Shape::Rectangle { g, h } => Self::rectangle(g * factor, h * factor),
            Shape::Ellipse { g, h } => Self::ellipse(g * factor, h * factor),
            Shape::HalfDisc { r } => Self::half_disc(r * factor),
            Shape::Disc { r } => Self::disc(r * factor),
            Shape::Polygon { vertices } => {
                let pts: Vec<Vec2> = vertices.iter().map(|&v| v * factor).collect();
                Self::polygon(&pts)
            }
        }
    }

    /// The body rotated by `angle` and translated by `offset`.
    pub fn place(&self, angle: f64, offset: Vec2) -> Placement<'_> {
        let (sin, cos) = angle.sin_cos();
        Placement { body: self, angle, offset, sin, cos }
    }
}

impl SupportMap for ConvexBody {
    fn support_point(&self, d: Vec2) -> Vec2 {
        match &self.shape {
            Shape::Needle { length } => Vec2::new(sign(d.x) * 0.5 * length, 0.0),
            Shape::Rectangle { g, h } => Vec2::new(sign(d.x) * 0.5 * g, sign(d.y) * 0.5 * h),
            Shape::Ellipse { g, h } => {
                let (a2, b2) = (0.25 * g * g, 0.25 * h * h);
                let den = (a2 * d.x * d.x + b2 * d.y * d.y).sqrt();
                if den > 0.0 {
                    Vec2::new(a2 * d.x / den, b2 * d.y / den)
                } else {
                    Vec2::ZERO
                }
            }
            Shape::HalfDisc { r } => {
                if d.y > 0.0 {
                    Vec2::new(sign(d.x) * r, 0.0)
                } else {
                    let n = d.norm();
                    if n > 0.0 {
                        d * (r / n)
                    } else {
                        Vec2::new(*r, 0.0)
                    }
                }
            }
            Shape::Disc { r } => {
                let n = d.norm();
                if n > 0.0 {
                    d * (r / n)
                } else {
                    Vec2::new(*r, 0.0)
                }
            }
            Shape::Polygon { vertices } => vertices[..].support_point(d),
        }
    }
}

impl SupportMap for [Vec2] {
    #[inline]
    fn support_point(&self, dir: Vec2) -> Vec2 {
        let mut best = self[0];
        let mut best_dot = best.dot(dir);
        for &p in &self[1..] {
            let d = p.dot(dir);
            if d > best_dot {
                best = p;
                best_dot = d;
            }
        }
        best
    }
}

/// A body rotated about its reference point and then translated.
#[derive(Debug, Clone, Copy)]
pub struct Placement<'a> {
    body: &'a ConvexBody,
    angle: f64,
    offset: Vec2,
    sin: f64,
    cos: f64,
}

impl Placement<'_> {
    pub fn body(&self) -> &ConvexBody {
        self.body
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Position of the reference point.
    pub fn offset(&self) -> Vec2 {
        self.offset
    }

    /// `s(θ − angle) + offset · (cos θ, sin θ)`.
    pub fn support(&self, theta: f64) -> f64 {
        self.body.support(theta - self.angle) + self.offset.dot(Vec2::unit(theta))
    }

    pub fn width(&self, theta: f64) -> f64 {
        self.support(theta) + self.support(theta + PI)
    }
}

impl SupportMap for Placement<'_> {
    #[inline]
    fn support_point(&self, dir: Vec2) -> Vec2 {
        let local = dir.rotate_sc(-self.sin, self.cos);
        self.body.support_point(local).rotate_sc(self.sin, self.cos) + self.offset
    }
}

/// Andrew's monotone chain; collinear points are dropped, output is
/// counter-clockwise. Returns fewer than three points for degenerate input.
fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: &mut dyn Iterator<Item = &Vec2> =
            if pass == 0 { &mut pts.iter() } else { &mut pts.iter().rev() };
        for &p in iter {
            while hull.len() >= start + 2 {
                let n = hull.len();
                if (hull[n - 1] - hull[n - 2]).cross(p - hull[n - 2]) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        // All points collinear: keep the two extremes.
        return alloc::vec![pts[0], pts[pts.len() - 1]];
    }
    hull
}
