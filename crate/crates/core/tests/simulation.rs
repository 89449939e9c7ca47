use std::f64::consts::{PI, TAU};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use trilat_core::body::SupportMap;
use trilat_core::closedform::santalo_equilateral;
use trilat_core::simulate::{intersects, run_simulation, simulate_range, throw_position};
use trilat_core::{ConvexBody, Placement, TriangleLattice, Vec2};

// Upper 0.1% point of chi-square with 63 degrees of freedom.
const CHI2_63_999: f64 = 103.442_377_319_873_24;

fn chi_square(bins: &[u64]) -> f64 {
    let n: u64 = bins.iter().sum();
    let expected = n as f64 / bins.len() as f64;
    bins.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
}

#[test]
fn throw_marginals_are_uniform() {
    let lat = TriangleLattice::from_sides(3.0 * 7f64.sqrt(), 3.0, 6.0).unwrap();
    let cot = lat.alpha().cos() / lat.alpha().sin();
    let mut by = [0u64; 64];
    let mut bx = [0u64; 64];
    let mut bphi = [0u64; 64];
    let bin = |t: f64| ((t * 64.0) as usize).min(63);
    for i in 0..1_000_000 {
        let (x, y, phi) = throw_position(&lat, 2024, i);
        by[bin(y / lat.h_c())] += 1;
        bx[bin((x - y * cot) / lat.c())] += 1;
        bphi[bin(phi / TAU)] += 1;
    }
    for (name, bins) in [("y", &by), ("x - y cot α", &bx), ("φ", &bphi)] {
        let stat = chi_square(bins);
        assert!(stat < CHI2_63_999, "{name}: chi-square {stat}");
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn random_body(rng: &mut ChaCha8Rng) -> ConvexBody {
    // Curvature radii stay below 1 so the 3600-direction sweep is accurate
    // to well under 1e-6.
    match rng.next_u64() % 6 {
        0 => ConvexBody::needle(uniform(rng, 0.0, 2.0)).unwrap(),
        1 => ConvexBody::rectangle(uniform(rng, 0.0, 1.5), uniform(rng, 0.0, 1.5)).unwrap(),
        2 => {
            let g = uniform(rng, 0.1, 0.9);
            ConvexBody::ellipse(g, uniform(rng, 0.5 * g, g)).unwrap()
        }
        3 => ConvexBody::half_disc(uniform(rng, 0.05, 0.5)).unwrap(),
        4 => ConvexBody::disc(uniform(rng, 0.05, 0.5)).unwrap(),
        _ => {
            let (rx, ry) = (uniform(rng, 0.2, 1.0), uniform(rng, 0.2, 1.0));
            let mut ts: Vec<f64> = (0..6).map(|_| uniform(rng, 0.0, TAU)).collect();
            ts.sort_by(f64::total_cmp);
            let pts: Vec<Vec2> = ts.iter().map(|t| Vec2::new(rx * t.cos(), ry * t.sin())).collect();
            ConvexBody::polygon(&pts).unwrap()
        }
    }
}

fn random_triangle(rng: &mut ChaCha8Rng) -> [Vec2; 3] {
    loop {
        let t = [0, 1, 2].map(|_| Vec2::new(uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5)));
        if (t[1] - t[0]).cross(t[2] - t[0]).abs() > 0.05 {
            return t;
        }
    }
}

/// Largest gap between the projections of the two sets over 3600 uniform
/// directions plus the triangle's and the body's edge normals. Positive
/// means separated.
fn sweep_gap(placed: &Placement<'_>, tri: &[Vec2; 3]) -> f64 {
    let mut dirs: Vec<f64> = (0..3600).map(|k| k as f64 * TAU / 3600.0).collect();
    for k in 0..3 {
        let e = tri[(k + 1) % 3] - tri[k];
        let n = e.perp();
        dirs.push(n.y.atan2(n.x));
        dirs.push((-n.y).atan2(-n.x));
    }
    for &k in placed.body().kink_angles() {
        dirs.push(k + placed.angle());
    }
    dirs.iter()
        .map(|&t| {
            let u = Vec2::unit(t);
            let tri_min = tri.iter().map(|p| p.dot(u)).fold(f64::INFINITY, f64::min);
            tri_min - placed.support(t)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn gjk_agrees_with_separating_axis_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    let mut hits = 0;
    while checked < 2000 {
        let body = random_body(&mut rng);
        let offset = Vec2::new(uniform(&mut rng, -2.0, 2.0), uniform(&mut rng, -2.0, 2.0));
        let placed = body.place(uniform(&mut rng, 0.0, TAU), offset);
        let tri = random_triangle(&mut rng);
        let gap = sweep_gap(&placed, &tri);
        if gap.abs() < 1e-6 {
            continue;
        }
        let gjk = intersects(&placed, &tri, 1e-12).unwrap();
        assert_eq!(gjk, gap < 0.0, "{body:?} at {:?}, triangle {tri:?}, gap {gap}", placed.offset());
        checked += 1;
        hits += gjk as u32;
    }
    assert!(hits > 200 && hits < 1800, "{hits}");
}

#[test]
fn triangle_support_map_is_a_vertex() {
    let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
    assert_eq!(tri.support_point(Vec2::new(1.0, -0.1)), tri[1]);
    assert_eq!(tri.support_point(Vec2::new(-1.0, -1.0)), tri[0]);
}

#[test]
fn point_body_only_ever_hits_one_cell() {
    let lat = TriangleLattice::from_sides(1.0, 1.3, 1.5).unwrap();
    let r = run_simulation(&ConvexBody::point(), &lat, 100_000, 5).unwrap();
    assert_eq!(r.counts, [100_000]);
}

#[test]
fn disc_p6_matches_area_ratio() {
    let lat = TriangleLattice::equilateral(1.0).unwrap();
    let disc = ConvexBody::disc(0.2).unwrap();
    let r = run_simulation(&disc, &lat, 1_000_000, 11).unwrap();
    let expected = PI * 0.04 / lat.q();
    assert!((expected - 0.145_103_949_138_737_45).abs() < 1e-15);
    assert!((r.p(6) - expected).abs() <= 4.0 * r.stderr_of(6), "{} vs {expected}", r.p(6));
    assert!(r.counts.len() <= 6);
}

#[test]
fn santalo_needle_within_four_sigma() {
    let lat = TriangleLattice::equilateral(1.0).unwrap();
    let needle = ConvexBody::needle(0.5).unwrap();
    let r = run_simulation(&needle, &lat, 400_000, 42).unwrap();
    let d = santalo_equilateral(0.5, 1.0).unwrap();
    for i in 1..=4 {
        let z = (r.p(i) - d.p[i as usize - 1]) / r.stderr_of(i);
        assert!(z.abs() <= 4.0, "p({i}): z = {z}");
    }
    assert_eq!(r.p(5), 0.0);
}

#[test]
fn counts_do_not_depend_on_partitioning() {
    let lat = TriangleLattice::from_sides(3.0, 4.0, 5.0).unwrap();
    let hd = ConvexBody::half_disc(0.25).unwrap();
    let whole = simulate_range(&hd, &lat, 77, 0..30_000).unwrap();
    let mut pieces = simulate_range(&hd, &lat, 77, 20_000..30_000).unwrap();
    for k in 0..4 {
        pieces.merge(&simulate_range(&hd, &lat, 77, k * 5000..(k + 1) * 5000).unwrap());
    }
    assert_eq!(whole, pieces);
}
