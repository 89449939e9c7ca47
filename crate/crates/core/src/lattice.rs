//! The lattice of congruent triangles with sides `a`, `b`, `c`.
//!
//! The reference triangle has side `c` on the x-axis from `(0, 0)` to
//! `(c, 0)`, angle `alpha` at the origin and its apex at
//! `(b cos alpha, b sin alpha)`. The lattice is generated by the translations
//! `e1 = (c, 0)` and `e2 = (b cos alpha, b sin alpha)`; every fundamental
//! parallelogram splits into a lower triangle (congruent to the reference
//! triangle) and an upper one (its point reflection).

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

use crate::geom::{shoelace, Vec2};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TriangleLattice {
    a: f64,
    b: f64,
    c: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    q: f64,
    h_a: f64,
    h_b: f64,
    h_c: f64,
    rho: f64,
}

/// Which half of a fundamental parallelogram a cell is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Lower,
    Upper,
}

/// Index of one triangle of the lattice.
///
/// `row` counts translations by `e2` (the rows between consecutive lines
/// `y = k h_c`), `col` counts translations by `e1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub row: i64,
    pub col: i64,
    pub parity: Parity,
}

impl CellIndex {
    pub const fn new(row: i64, col: i64, parity: Parity) -> Self {
        CellIndex { row, col, parity }
    }
}

impl TriangleLattice {
    /// Builds the lattice from its three side lengths. Angles are derived,
    /// never supplied.
    pub fn from_sides(a: f64, b: f64, c: f64) -> Result<Self> {
        let degenerate = Error::DegenerateTriangle { a, b, c };
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a <= 0.0 || b <= 0.0 || c <= 0.0 {
            return Err(degenerate);
        }
        if a >= b + c || b >= a + c || c >= a + b {
            return Err(degenerate);
        }
        // Kahan's stable Heron formula on the sorted sides.
        let mut s = [a, b, c];
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let [x, y, z] = s;
        let prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
        if prod <= 0.0 {
            return Err(degenerate);
        }
        let area = 0.25 * prod.sqrt();
        let longest = x;
        if area <= 1e-14 * longest * longest {
            return Err(degenerate);
        }
        let four_area = 4.0 * area;
        let alpha = four_area.atan2(b * b + c * c - a * a);
        let beta = four_area.atan2(a * a + c * c - b * b);
        let gamma = four_area.atan2(a * a + b * b - c * c);
        let q = 2.0 * area;
        Ok(TriangleLattice {
            a,
            b,
            c,
            alpha,
            beta,
            gamma,
            q,
            h_a: q / a,
            h_b: q / b,
            h_c: q / c,
            rho: q / (a + b + c),
        })
    }

    /// Equilateral lattice with side `a`.
    pub fn equilateral(a: f64) -> Result<Self> {
        Self::from_sides(a, a, a)
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }
    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }
    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }
    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }
    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    /// Area of the fundamental parallelogram (twice the cell area).
    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }
    #[inline]
    pub fn h_a(&self) -> f64 {
        self.h_a
    }
    #[inline]
    pub fn h_b(&self) -> f64 {
        self.h_b
    }
    #[inline]
    pub fn h_c(&self) -> f64 {
        self.h_c
    }
    /// Incircle radius of a cell.
    #[inline]
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn perimeter(&self) -> f64 {
        self.a + self.b + self.c
    }

    pub fn max_side(&self) -> f64 {
        self.a.max(self.b).max(self.c)
    }

    /// The same lattice with sides relabelled `(a, b, c) -> (b, c, a)`.
    pub fn rotated_labels(&self) -> Self {
        // Relabelling cannot fail for a valid lattice.
        Self::from_sides(self.b, self.c, self.a).expect("valid lattice stays valid")
    }

    /// Relabels the sides so that the largest angle is `alpha`.
    pub fn with_largest_angle_first(&self) -> Self {
        if self.alpha >= self.beta && self.alpha >= self.gamma {
            *self
        } else if self.beta >= self.gamma {
            self.rotated_labels()
        } else {
            self.rotated_labels().rotated_labels()
        }
    }

    /// True when no angle exceeds a right angle (up to `1e-12`).
    pub fn is_acute_or_right(&self) -> bool {
        self.alpha.max(self.beta).max(self.gamma) <= PI / 2.0 + 1e-12
    }

    /// Translation between neighbouring cells along side `c`.
    pub fn e1(&self) -> Vec2 {
        Vec2::new(self.c, 0.0)
    }

    /// Translation between neighbouring rows.
    pub fn e2(&self) -> Vec2 {
        let (s, c) = self.alpha.sin_cos();
        Vec2::new(self.b * c, self.b * s)
    }

    /// Parallelogram coordinates `(u, v)` with `p = u e1 + v e2`.
    pub fn to_cell_coords(&self, p: Vec2) -> (f64, f64) {
        let v = p.y / self.h_c;
        let u = (p.x - v * self.b * self.alpha.cos()) / self.c;
        (u, v)
    }

    /// The cell whose closed triangle contains `p` (ties broken towards the
    /// lower cell).
    pub fn locate(&self, p: Vec2) -> CellIndex {
        let (u, v) = self.to_cell_coords(p);
        let (col, row) = (u.floor(), v.floor());
        let parity = if (u - col) + (v - row) <= 1.0 { Parity::Lower } else { Parity::Upper };
        CellIndex::new(row as i64, col as i64, parity)
    }

    /// The three vertices of a cell, counter-clockwise.
    pub fn cell_vertices(&self, idx: CellIndex) -> [Vec2; 3] {
        let e1 = self.e1();
        let e2 = self.e2();
        let o = e1 * idx.col as f64 + e2 * idx.row as f64;
        match idx.parity {
            Parity::Lower => [o, o + e1, o + e2],
            Parity::Upper => [o + e1, o + e1 + e2, o + e2],
        }
    }

    /// Area of one cell computed from its vertices.
    pub fn cell_area(&self, idx: CellIndex) -> f64 {
        shoelace(&self.cell_vertices(idx))
    }

    /// Every cell whose triangle meets the closed disc of `radius` around
    /// `center`, plus possibly some extra neighbours.
    ///
    /// The disc is bounded in parallelogram coordinates and the box is grown
    /// by one cell on every side; exact intersection is left to the caller.
    pub fn cells_near(&self, center: Vec2, radius: f64) -> Vec<CellIndex> {
        let radius = radius.max(0.0);
        let (u, v) = self.to_cell_coords(center);
        // The lines u = const are h_b apart, the lines v = const are h_c apart.
        let du = radius / self.h_b;
        let dv = radius / self.h_c;
        let col_lo = (u - du).floor() as i64 - 1;
        let col_hi = (u + du).floor() as i64 + 1;
        let row_lo = (v - dv).floor() as i64 - 1;
        let row_hi = (v + dv).floor() as i64 + 1;
        let mut out = Vec::with_capacity(((col_hi - col_lo + 1) * (row_hi - row_lo + 1) * 2) as usize);
        for row in row_lo..=row_hi {
            for col in col_lo..=col_hi {
                out.push(CellIndex::new(row, col, Parity::Lower));
                out.push(CellIndex::new(row, col, Parity::Upper));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn equilateral_derived_quantities() {
        let lat = TriangleLattice::from_sides(1.0, 1.0, 1.0).unwrap();
        for ang in lat.angles() {
            assert!(close(ang, PI / 3.0, 1e-15));
        }
        assert!(close(lat.q(), 3f64.sqrt() / 2.0, 1e-15));
        assert!(close(lat.rho(), lat.q() / 3.0, 1e-16));
        assert!(close(lat.rho(), 0.288_675_134_594_812_9, 1e-15));
    }

    #[test]
    fn pythagorean_lattice() {
        let lat = TriangleLattice::from_sides(3.0, 4.0, 5.0).unwrap();
        assert!(close(lat.gamma(), PI / 2.0, 1e-15));
        assert!(close(lat.q(), 12.0, 1e-13));
        assert!(close(lat.rho(), 1.0, 1e-15));
        assert!(close(lat.h_c(), 12.0 / 5.0, 1e-14));
    }

    #[test]
    fn rejects_degenerate_triangles() {
        assert!(matches!(
            TriangleLattice::from_sides(1.0, 1.0, 3.0),
            Err(Error::DegenerateTriangle { .. })
        ));
        assert!(TriangleLattice::from_sides(1.0, 1.0, 2.0).is_err());
        assert!(TriangleLattice::from_sides(0.0, 1.0, 1.0).is_err());
        assert!(TriangleLattice::from_sides(-1.0, 1.0, 1.0).is_err());
        assert!(TriangleLattice::from_sides(f64::NAN, 1.0, 1.0).is_err());
        // Flat within the degeneracy threshold.
        assert!(TriangleLattice::from_sides(1.0, 1e-15, 1.0).is_err());
    }

    #[test]
    fn reference_cell_vertices() {
        let lat = TriangleLattice::equilateral(1.0).unwrap();
        let v = lat.cell_vertices(CellIndex::new(0, 0, Parity::Lower));
        assert!(close(v[0].x, 0.0, 0.0) && close(v[0].y, 0.0, 0.0));
        assert!(close(v[1].x, 1.0, 1e-15) && close(v[1].y, 0.0, 0.0));
        assert!(close(v[2].x, 0.5, 1e-15) && close(v[2].y, 3f64.sqrt() / 2.0, 1e-15));

        let w = lat.cell_vertices(CellIndex::new(1, 0, Parity::Lower));
        let e2 = lat.e2();
        for (p, q) in v.iter().zip(w.iter()) {
            assert!(close(p.x + e2.x, q.x, 1e-15) && close(p.y + e2.y, q.y, 1e-15));
        }
    }

    #[test]
    fn cell_area_is_half_q() {
        let lat = TriangleLattice::from_sides(2.0, 3.0, 4.0).unwrap();
        for row in -3..3 {
            for col in -3..3 {
                for parity in [Parity::Lower, Parity::Upper] {
                    let area = lat.cell_area(CellIndex::new(row, col, parity));
                    assert!(close(area, lat.q() / 2.0, 1e-12 * lat.q()), "{area}");
                }
            }
        }
    }

    #[test]
    fn locate_is_inverse_of_cell_vertices() {
        let lat = TriangleLattice::from_sides(2.0, 3.0, 4.0).unwrap();
        for row in -2..2 {
            for col in -2..2 {
                for parity in [Parity::Lower, Parity::Upper] {
                    let idx = CellIndex::new(row, col, parity);
                    let v = lat.cell_vertices(idx);
                    let centroid = (v[0] + v[1] + v[2]) * (1.0 / 3.0);
                    assert_eq!(lat.locate(centroid), idx);
                }
            }
        }
    }

    #[test]
    fn cells_near_contains_locating_cell() {
        let lat = TriangleLattice::from_sides(3.0, 4.0, 5.0).unwrap();
        let p = Vec2::new(1.3, 0.7);
        let cells = lat.cells_near(p, 0.0);
        assert!(cells.contains(&lat.locate(p)));
    }

    #[test]
    fn cells_near_vertex_has_all_six_incident_cells() {
        let lat = TriangleLattice::from_sides(2.0, 3.0, 4.0).unwrap();
        let vertex = lat.e1() * 2.0 + lat.e2() * -1.0;
        let cells: BTreeSet<_> = lat.cells_near(vertex, 1e-9).into_iter().collect();
        let mut incident = 0;
        for row in -4..3 {
            for col in -1..5 {
                for parity in [Parity::Lower, Parity::Upper] {
                    let idx = CellIndex::new(row, col, parity);
                    let v = lat.cell_vertices(idx);
                    if v.iter().any(|p| (*p - vertex).norm() < 1e-12) {
                        incident += 1;
                        assert!(cells.contains(&idx), "{idx:?} missing");
                    }
                }
            }
        }
        assert_eq!(incident, 6);
    }

    #[test]
    fn cells_near_area_lower_bound() {
        let lat = TriangleLattice::from_sides(2.0, 3.0, 4.0).unwrap();
        let r = 10.0 * lat.max_side();
        let cells = lat.cells_near(Vec2::new(0.3, -0.2), r);
        let bound = (PI * r * r / (lat.q() / 2.0)).floor() as usize;
        assert!(cells.len() >= bound);
    }

    #[test]
    fn two_by_two_block_tiles_without_overlap() {
        let lat = TriangleLattice::from_sides(2.0, 3.0, 4.0).unwrap();
        let mut cells = Vec::new();
        for row in 0..2 {
            for col in 0..2 {
                cells.push(CellIndex::new(row, col, Parity::Lower));
                cells.push(CellIndex::new(row, col, Parity::Upper));
            }
        }
        let total: f64 = cells.iter().map(|&i| lat.cell_area(i)).sum();
        assert!(close(total, 4.0 * lat.q(), 1e-12 * lat.q()));
        for (i, &p) in cells.iter().enumerate() {
            for &q in &cells[i + 1..] {
                let overlap = convex_overlap_area(&lat.cell_vertices(p), &lat.cell_vertices(q));
                assert!(overlap < 1e-12 * lat.q(), "{p:?} {q:?} overlap {overlap}");
            }
        }
    }

    // Sutherland-Hodgman clip of one convex polygon by another.
    fn convex_overlap_area(subject: &[Vec2], clip: &[Vec2]) -> f64 {
        let mut poly: Vec<Vec2> = subject.to_vec();
        for i in 0..clip.len() {
            let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
            let inside = |p: Vec2| (b - a).cross(p - a) >= 0.0;
            let mut next = Vec::new();
            for j in 0..poly.len() {
                let (p, q) = (poly[j], poly[(j + 1) % poly.len()]);
                let (ip, iq) = (inside(p), inside(q));
                if ip {
                    next.push(p);
                }
                if ip != iq {
                    let d = q - p;
                    let t = (b - a).cross(a - p) / (b - a).cross(d);
                    next.push(p + d * t);
                }
            }
            poly = next;
            if poly.is_empty() {
                return 0.0;
            }
        }
        shoelace(&poly).abs()
    }

    #[test]
    fn cells_near_is_monotone() {
        let lat = TriangleLattice::from_sides(2.5, 3.0, 4.0).unwrap();
        let c = Vec2::new(-0.4, 2.2);
        let mut prev: BTreeSet<_> = BTreeSet::new();
        for k in 0..20 {
            let now: BTreeSet<_> = lat.cells_near(c, 0.37 * k as f64).into_iter().collect();
            assert!(prev.is_subset(&now));
            prev = now;
        }
    }

    #[test]
    fn area_identities() {
        for &(a, b, c) in &[(1.0, 1.0, 1.0), (3.0, 4.0, 5.0), (2.0, 3.0, 4.0), (7f64.sqrt(), 1.0, 2.0)] {
            let lat = TriangleLattice::from_sides(a, b, c).unwrap();
            let q = lat.q();
            assert!(close(a * b * lat.gamma().sin(), q, 1e-12 * q));
            assert!(close(a * c * lat.beta().sin(), q, 1e-12 * q));
            assert!(close(b * c * lat.alpha().sin(), q, 1e-12 * q));
            assert!(close(lat.alpha() + lat.beta() + lat.gamma(), PI, 1e-12));
            assert!(close(lat.h_a(), b * lat.gamma().sin(), 1e-12 * lat.h_a()));
            assert!(close(lat.h_b(), a * lat.gamma().sin(), 1e-12 * lat.h_b()));
            assert!(close(lat.h_c(), a * lat.beta().sin(), 1e-12 * lat.h_c()));
        }
    }
}
