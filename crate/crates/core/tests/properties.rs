use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use trilat_core::closedform::{
    ellipse_distribution, half_disc_distribution, half_disc_support_autocorrelation,
    half_disc_width_autocorrelation, markov_p1, needle_distribution, rectangle_acute, rectangle_distribution,
    rectangle_obtuse,
};
use trilat_core::engine::{
    autocorrelation, check_fit, f1, f2, f3, hit_probabilities, support_autocorrelation, symmetric_fast_path,
    theorem1, width_autocorrelation,
};
use trilat_core::quadrature::integrate;
use trilat_core::{ConvexBody, HitDistribution, TriangleLattice, Vec2, DEFAULT_ABS_TOL};

fn lattice() -> impl Strategy<Value = TriangleLattice> {
    (0.25f64..2.4, 0.25f64..2.4, 1.0f64..5.0).prop_filter_map("small third angle", |(al, be, scale)| {
        let ga = PI - al - be;
        (ga >= 0.2).then(|| TriangleLattice::from_sides(scale * al.sin(), scale * be.sin(), scale * ga.sin()).ok())?
    })
}

// Points on an ellipse in angular order, then sheared: always convex.
fn polygon() -> impl Strategy<Value = ConvexBody> {
    (proptest::collection::vec(0.0f64..1.0, 3..9), 0.3f64..1.0, -0.5f64..0.5).prop_filter_map(
        "degenerate polygon",
        |(mut ts, ry, shear)| {
            ts.sort_by(f64::total_cmp);
            let pts: Vec<Vec2> = ts
                .iter()
                .map(|t| {
                    let (s, c) = (2.0 * PI * t).sin_cos();
                    Vec2::new(c + shear * ry * s, ry * s)
                })
                .collect();
            ConvexBody::polygon(&pts).ok()
        },
    )
}

fn body() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        Just(ConvexBody::needle(1.0).unwrap()),
        (0.0f64..1.0).prop_map(|t| ConvexBody::rectangle(1.0, t).unwrap()),
        (0.0f64..1.0).prop_map(|t| ConvexBody::ellipse(1.0, t).unwrap()),
        Just(ConvexBody::half_disc(1.0).unwrap()),
        Just(ConvexBody::disc(1.0).unwrap()),
        polygon(),
    ]
}

/// `body` rescaled so that its largest enclosing triangle has side
/// `fill · c`.
fn fitted(body: &ConvexBody, lat: &TriangleLattice, fill: f64) -> ConvexBody {
    let cmax = lat.c() - check_fit(body, lat).margin;
    body.scaled(fill * lat.c() / cmax).unwrap()
}

fn config() -> impl Strategy<Value = (ConvexBody, TriangleLattice)> {
    (body(), lattice(), 0.02f64..0.995).prop_map(|(b, l, fill)| (fitted(&b, &l, fill), l))
}

fn tol_for(lat: &TriangleLattice) -> f64 {
    1e-12 * lat.q() * lat.q()
}

fn assert_close(a: &[f64; 6], b: &[f64; 6], tol: f64) {
    for i in 0..6 {
        assert!((a[i] - b[i]).abs() <= tol, "p({}) {} vs {} (tol {tol})", i + 1, a[i], b[i]);
    }
}

fn check_structure(d: &HitDistribution, body: &ConvexBody, lat: &TriangleLattice) {
    assert!((d.sum() - 1.0).abs() <= 1e-9, "sum {}", d.sum());
    assert!(d.p.iter().all(|&p| p >= -1e-9), "{:?}", d.p);
    assert_eq!(d.p[4], 0.0);
    assert!((d.p[5] - body.area() / lat.q()).abs() <= 1e-12);
    let closed = 1.0 + lat.perimeter() * body.perimeter() / (PI * lat.q()) + 2.0 * body.area() / lat.q();
    assert!((d.expectation - closed).abs() <= 1e-9);
    assert!((d.mean_from_probabilities() - closed).abs() <= 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn structural_identities((body, lat) in config()) {
        let d = hit_probabilities(&body, &lat, tol_for(&lat), false).unwrap();
        check_structure(&d, &body, &lat);
        prop_assert!(!d.forced && d.condition_margin >= -1e-9 * lat.c());
    }

    #[test]
    fn scale_covariance((body, lat) in config(), lambda in 0.1f64..10.0) {
        let d = hit_probabilities(&body, &lat, tol_for(&lat), false).unwrap();
        let [a, b, c] = lat.sides();
        let big = TriangleLattice::from_sides(lambda * a, lambda * b, lambda * c).unwrap();
        let e = hit_probabilities(&body.scaled(lambda).unwrap(), &big, tol_for(&big), false).unwrap();
        assert_close(&d.p, &e.p, 1e-9);
    }

    #[test]
    fn label_permutations((body, lat) in config()) {
        let d = hit_probabilities(&body, &lat, tol_for(&lat), false).unwrap();
        let [a, b, c] = lat.sides();
        for [x, y, z] in [[b, c, a], [c, a, b], [b, a, c], [a, c, b], [c, b, a]] {
            let relabelled = TriangleLattice::from_sides(x, y, z).unwrap();
            let e = hit_probabilities(&body, &relabelled, tol_for(&lat), true).unwrap();
            assert_close(&d.p, &e.p, 1e-9);
        }
    }

    #[test]
    fn fast_path_matches_general((body, lat) in config()) {
        prop_assume!(body.is_centrally_symmetric());
        let tol = DEFAULT_ABS_TOL;
        let fast = symmetric_fast_path(&body, &lat, tol, false).unwrap();
        let full = theorem1(&body, &lat, tol, false).unwrap();
        assert_close(&fast.p, &full.p, 10.0 * tol / (lat.q() * lat.q()));
    }

    #[test]
    fn integral_identities((body, lat) in config()) {
        let tol = DEFAULT_ABS_TOL;
        let ints = autocorrelation(&body, &lat, tol).unwrap();
        let pairs = [
            (0.0, ints.i0, ints.j0),
            (lat.alpha(), ints.i_alpha, ints.j_alpha),
            (lat.beta(), ints.i_beta, ints.j_beta),
            (lat.gamma(), ints.i_gamma, ints.j_gamma),
        ];
        for (x, i, j) in pairs {
            prop_assert!(i >= 0.0 && j >= 0.0);
            prop_assert!((f2(i, j) - f1(i, j) - (i - 2.0 * j)).abs() <= 1e-12 * (1.0 + i));
            prop_assert!((f1(i, j) - f3(i, j) - 2.0 * j).abs() <= 1e-12 * (1.0 + i));
            let breaks: Vec<f64> = body
                .kink_angles()
                .iter()
                .flat_map(|&k| [k, k + PI, k - x, k + PI - x])
                .map(|t| t.rem_euclid(2.0 * PI))
                .collect();
            let full = integrate(|p| body.width(p) * body.width(p + x), 0.0, 2.0 * PI, &breaks, tol).unwrap().value;
            prop_assert!((i - 0.5 * full).abs() <= 2.0 * tol, "{} vs {}", i, 0.5 * full);
            if body.is_centrally_symmetric() {
                prop_assert!((i - 2.0 * j).abs() <= 10.0 * tol);
            }
        }
        prop_assert!(ints.tol <= tol);
    }

    #[test]
    fn body_invariants(b in body(), phi in 0.0f64..(2.0 * PI)) {
        let scale = b.circumradius().max(1.0);
        prop_assert!((b.support(phi) - b.support(phi + 2.0 * PI)).abs() < 1e-12 * scale);
        prop_assert!((b.width(phi) - b.width(phi + PI)).abs() < 1e-12 * scale);
        prop_assert!((b.support_point_at(phi).dot(Vec2::unit(phi)) - b.support(phi)).abs() < 1e-12 * scale);
        if b.is_centrally_symmetric() {
            prop_assert!((b.width(phi) - 2.0 * b.support(phi)).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn cells_near_is_monotone(lat in lattice(), x in -10.0f64..10.0, y in -10.0f64..10.0, r1 in 0.0f64..3.0, dr in 0.0f64..3.0) {
        let p = Vec2::new(x, y);
        let small = lat.cells_near(p, r1);
        let large = lat.cells_near(p, r1 + dr);
        prop_assert!(small.iter().all(|c| large.contains(c)));
    }
}

#[test]
fn closed_forms_match_quadrature() {
    let lattices = [
        TriangleLattice::equilateral(1.0).unwrap(),
        TriangleLattice::from_sides(3.0, 4.0, 5.0).unwrap(),
        TriangleLattice::from_sides(2.0, 2.5, 3.0).unwrap(),
        TriangleLattice::from_sides(1.0, 1.3, 1.5).unwrap(),
        TriangleLattice::from_sides(3.0 * 7f64.sqrt(), 3.0, 6.0).unwrap(),
        TriangleLattice::from_sides(2.6, 1.0, 2.0).unwrap(),
    ];
    let tol = 1e-12;
    let mut checked = 0;
    for lat in &lattices {
        let bound = (100.0 * tol / (lat.q() * lat.q())).max(1e-8);
        for fill in [0.2, 0.5, 0.9] {
            let shapes = [
                ConvexBody::needle(1.0).unwrap(),
                ConvexBody::rectangle(1.0, 0.4).unwrap(),
                ConvexBody::ellipse(1.0, 0.6).unwrap(),
                ConvexBody::half_disc(1.0).unwrap(),
            ];
            for shape in &shapes {
                let body = fitted(shape, lat, fill);
                let closed = match *body.shape() {
                    trilat_core::Shape::Needle { length } => needle_distribution(length, lat),
                    trilat_core::Shape::Rectangle { g, h } => rectangle_distribution(g, h, lat),
                    trilat_core::Shape::Ellipse { g, h } => ellipse_distribution(g, h, lat, tol),
                    trilat_core::Shape::HalfDisc { r } if lat.is_acute_or_right() => half_disc_distribution(r, lat),
                    _ => continue,
                }
                .unwrap();
                let engine = theorem1(&body, lat, tol, false).unwrap();
                assert_close(&closed.p, &engine.p, bound);
                checked += 1;
            }
        }
    }
    assert!(checked >= 50, "{checked}");
}

fn random_lattices(count: usize, seed: u64) -> Vec<TriangleLattice> {
    let mut runner = proptest::test_runner::TestRunner::new_with_rng(
        ProptestConfig::default(),
        proptest::test_runner::TestRng::from_seed(proptest::test_runner::RngAlgorithm::ChaCha, &[seed as u8; 32]),
    );
    let strat = lattice();
    (0..count).map(|_| strat.new_tree(&mut runner).unwrap().current()).collect()
}

#[test]
fn markov_consistency() {
    for lat in random_lattices(20, 1) {
        let ell = 0.4 * lat.rho();
        let d = needle_distribution(ell, &lat).unwrap();
        let (a, b, c, q) = (lat.a(), lat.b(), lat.c(), lat.q());
        let direct = 1.0
            + ell * ell * (lat.alpha() * a * a + lat.beta() * b * b + lat.gamma() * c * c) / (2.0 * PI * q * q)
            - ell * (4.0 * (a + b + c) - 3.0 * ell) / (2.0 * PI * q);
        assert!((d.p[0] - direct).abs() <= 1e-12);
        assert!((markov_p1(ell, &lat) - direct).abs() <= 1e-12);
    }
}

#[test]
fn degeneration_chain() {
    for lat in random_lattices(10, 2) {
        let g = 0.6 * lat.rho() * 2.0;
        let e = ellipse_distribution(g, 0.0, &lat, 1e-12).unwrap();
        let r = rectangle_distribution(g, 0.0, &lat).unwrap();
        let n = needle_distribution(g, &lat).unwrap();
        assert_close(&e.p, &r.p, 1e-9);
        assert_close(&r.p, &n.p, 1e-9);
        let via_engine = hit_probabilities(&ConvexBody::ellipse(g, 0.0).unwrap(), &lat, 1e-12, false).unwrap();
        assert_close(&via_engine.p, &n.p, 1e-9);
    }
}

#[test]
fn rectangle_corollaries_agree_on_right_lattices() {
    for (a, b) in [(3.0, 4.0), (1.0, 1.0), (0.7, 2.2)] {
        let c = f64::hypot(a, b);
        // Put the right angle at α, β and γ in turn.
        for sides in [[c, a, b], [a, c, b], [a, b, c]] {
            let lat = TriangleLattice::from_sides(sides[0], sides[1], sides[2]).unwrap();
            let g = 0.5 * lat.rho();
            let acute = rectangle_acute(g, 0.5 * g, &lat).unwrap();
            let obtuse = rectangle_obtuse(g, 0.5 * g, &lat).unwrap();
            assert_close(&acute.p, &obtuse.p, 1e-12);
        }
    }
}

#[test]
fn half_disc_integrals_match_closed_forms() {
    let r = 0.7;
    let hd = ConvexBody::half_disc(r).unwrap();
    let (j0, _) = support_autocorrelation(&hd, 0.0, 1e-13).unwrap();
    assert!((j0 - 1.5 * PI * r * r).abs() <= 1e-10);
    for sides in [[1.0, 1.0, 1.0], [3.0, 4.0, 4.5], [2.0, 2.5, 3.0]] {
        let lat = TriangleLattice::from_sides(sides[0], sides[1], sides[2]).unwrap();
        for x in [lat.alpha(), lat.beta(), lat.gamma()] {
            let (i, _) = width_autocorrelation(&hd, x, 1e-13).unwrap();
            let (j, _) = support_autocorrelation(&hd, x, 1e-13).unwrap();
            assert!((i - half_disc_width_autocorrelation(r, x)).abs() <= 1e-10);
            assert!((j - half_disc_support_autocorrelation(r, x)).abs() <= 1e-10);
        }
    }
}

#[test]
fn fit_condition_edges() {
    for sides in [[1.0, 1.0, 1.0], [3.0, 4.0, 5.0], [3.0 * 7f64.sqrt(), 3.0, 6.0]] {
        let lat = TriangleLattice::from_sides(sides[0], sides[1], sides[2]).unwrap();
        let exact = check_fit(&ConvexBody::disc(lat.rho()).unwrap(), &lat);
        assert!(exact.margin.abs() <= 1e-10);
        let over = check_fit(&ConvexBody::disc(1.01 * lat.rho()).unwrap(), &lat);
        assert!(over.margin < 0.0 && !over.incircle_accept);
    }
}
