use std::f64::consts::PI;

use h2xr_core::frobenius::enumerate_simply;
use h2xr_core::h2xr_geometry::h2xr_distance;
use h2xr_core::hyperbolic_plane::{
    h2_distance, rotation_about, translate_from_origin, H2Isometry, H2Point,
};
use h2xr_core::screw_group::{compose, Letter};
use h2xr_core::{GroupContext, H2xRPoint, ScrewElement, Word};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = H2Point> {
    (0.0..3.0f64, -PI..PI).prop_map(|(r, a)| H2Point::from_polar(r, a))
}

fn space_point() -> impl Strategy<Value = H2xRPoint> {
    (point(), -3.0..3.0f64).prop_map(|(b, t)| H2xRPoint::new(b, t))
}

/// An isometry together with the squared size of the matrices it was built
/// from, which bounds its rounding error.
fn conditioned_isometry() -> impl Strategy<Value = (H2Isometry, f64)> {
    (point(), -PI..PI, point()).prop_map(|(c, angle, shift)| {
        let g = rotation_about(&c, angle).then(&translate_from_origin(&shift));
        (g, (c.x1().powi(2) * shift.x1()).powi(2))
    })
}

fn isometry() -> impl Strategy<Value = H2Isometry> {
    conditioned_isometry().prop_map(|(g, _)| g)
}

fn word() -> impl Strategy<Value = Word> {
    (prop::collection::vec(0usize..6, 0..6), -2i64..=2).prop_map(|(ls, lattice)| Word {
        letters: ls.into_iter().map(|i| Letter::ALL[i]).collect(),
        lattice,
    })
}

/// A group for a small signature with one of its admissible classes.
fn group() -> impl Strategy<Value = GroupContext> {
    let sigs = [(6u32, 4u32), (7, 3), (8, 3), (9, 3), (5, 5), (8, 4), (10, 5), (12, 6)];
    (0..sigs.len(), any::<prop::sample::Index>(), 0.3..2.0f64).prop_map(move |(i, pick, xi)| {
        let (p1, p2) = sigs[i];
        let classes: Vec<_> = enumerate_simply(p1, p2).unwrap().into_iter().collect();
        GroupContext::new(p1, p2, *pick.get(&classes), xi).unwrap()
    })
}

fn same_point(a: &H2xRPoint, b: &H2xRPoint) -> f64 {
    h2xr_distance(a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn isometries_stay_lorentzian((g, kg) in conditioned_isometry(), (h, kh) in conditioned_isometry()) {
        let gh = g.then(&h);
        prop_assert!(g.lorentz_defect() < 1e-13 * kg);
        prop_assert!(gh.lorentz_defect() < 1e-13 * kg * kh);
        prop_assert!(g.inverse().then(&g).distance_to(&H2Isometry::identity()) < 1e-13 * kg);
    }

    #[test]
    fn isometries_preserve_distance(g in isometry(), p in point(), q in point()) {
        let d = h2_distance(&p, &q);
        let e = h2_distance(&g.apply(&p), &g.apply(&q));
        prop_assert!((d - e).abs() < 1e-8 * d.max(1.0));
    }

    #[test]
    fn distance_is_a_metric(p in space_point(), q in space_point(), s in space_point()) {
        let pq = h2xr_distance(&p, &q);
        prop_assert!((pq - h2xr_distance(&q, &p)).abs() < 1e-12 * pq.max(1.0));
        prop_assert!(h2xr_distance(&p, &p) < 1e-7);
        prop_assert!(pq <= h2xr_distance(&p, &s) + h2xr_distance(&s, &q) + 1e-9);
    }

    #[test]
    fn composition_is_the_right_action(ctx in group(), u in word(), w in word(), p in space_point()) {
        let (a, b) = (ctx.element(&u), ctx.element(&w));
        let both = compose(&a, &b).apply(&p);
        let stepwise = b.apply(&a.apply(&p));
        prop_assert!(same_point(&both, &stepwise) < 1e-7);
    }

    #[test]
    fn composition_is_associative(ctx in group(), u in word(), v in word(), w in word(), p in space_point()) {
        let (a, b, c) = (ctx.element(&u), ctx.element(&v), ctx.element(&w));
        let left = compose(&compose(&a, &b), &c);
        let right = compose(&a, &compose(&b, &c));
        prop_assert!(same_point(&left.apply(&p), &right.apply(&p)) < 1e-7);
        prop_assert!((left.tau - right.tau).abs() < 1e-12);
    }

    #[test]
    fn words_multiply_by_concatenation(ctx in group(), u in word(), w in word(), p in space_point()) {
        let joined = Word {
            letters: u.letters.iter().chain(&w.letters).copied().collect(),
            lattice: u.lattice + w.lattice,
        };
        let product = compose(&ctx.element(&u), &ctx.element(&w));
        prop_assert!(same_point(&ctx.element(&joined).apply(&p), &product.apply(&p)) < 1e-7);
    }

    #[test]
    fn generator_powers_are_lattice_shifts(ctx in group()) {
        for (linear, fibre) in ctx.relation_defects() {
            prop_assert!(linear < 1e-9);
            prop_assert!(fibre < 1e-9);
        }
    }

    #[test]
    fn inverse_undoes_element(ctx in group(), u in word(), p in space_point()) {
        let g = ctx.element(&u);
        prop_assert!(same_point(&compose(&g, &g.inverse()).apply(&p), &p) < 1e-7);
    }

    #[test]
    fn neighbor_distances_survive_conjugation(
        ctx in group(),
        k in (0.05..0.6f64, -PI..PI).prop_map(|(r, a)| H2Point::from_polar(r, a)),
        phi in isometry(),
        shift in -2.0..2.0f64,
    ) {
        let kernel = H2xRPoint::new(k, 0.0);
        let orbit = ctx.orbit_neighbors(&kernel, 4, 2.0 * ctx.xi);
        let moved = |p: &H2xRPoint| H2xRPoint::new(phi.apply(&p.base), p.t + shift);
        let mk = moved(&kernel);
        for n in &orbit.neighbors {
            let d = h2xr_distance(&mk, &moved(&n.point));
            prop_assert!((d - n.distance).abs() < 1e-8 * n.distance.max(1.0));
        }
    }

    #[test]
    fn screw_inverse_round_trips(tau in -3.0..3.0f64, g in isometry(), p in space_point()) {
        let s = ScrewElement::new(g, tau);
        prop_assert!(same_point(&s.inverse().apply(&s.apply(&p)), &p) < 1e-7);
    }
}
