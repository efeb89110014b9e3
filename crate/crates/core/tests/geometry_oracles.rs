use std::f64::consts::PI;

use h2xr_core::frobenius::enumerate_simply;
use h2xr_core::h2xr_geometry::{
    ball_surface_integrand, ball_volume, ball_volume_with_tol, geodesic_point, geodesic_point_from,
    h2xr_distance, metric_tensor_at, solve_shot, solve_shot_from_seed, wrap_angle, GeodesicShot,
};
use h2xr_core::hyperbolic_plane::{h2_distance, is_hyperbolic, triangle_vertices, H2Point};
use h2xr_core::numeric::NewtonOptions;
use h2xr_core::screw_group::appendix_image;
use h2xr_core::{GroupContext, H2xRPoint};
use nalgebra::Vector3;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng) -> H2xRPoint {
    H2xRPoint::from_cylindrical(rng.gen_range(-2.0..2.0), rng.gen_range(0.0..2.5), rng.gen_range(-PI..PI))
}

#[test]
fn shooting_recovers_closed_form_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = random_point(&mut rng);
        let q = random_point(&mut rng);
        let exact = h2xr_distance(&p, &q);
        let guess = solve_shot(&p, &q).unwrap();
        let seed = GeodesicShot::canonical(
            guess.u + rng.gen_range(-0.05..0.05),
            guess.v + rng.gen_range(-0.05..0.05),
            guess.length * rng.gen_range(0.95..1.05),
        );
        let shot = solve_shot_from_seed(&p, &q, seed, NewtonOptions::default()).unwrap();
        let end = geodesic_point_from(&p, &shot, shot.length);
        let miss = h2_distance(&end.base, &q.base).hypot(end.t - q.t);
        worst = worst.max((shot.length - exact).abs()).max(miss);
    }
    assert!(worst < 1e-9, "worst deviation {worst:e}");
}

/// Uniform-ish point of the open triangle ABC, via barycentric weights in the Klein model.
fn triangle_point(rng: &mut ChaCha8Rng, p1: u32, p2: u32) -> H2Point {
    let tri = triangle_vertices(p1, p2).unwrap();
    let mut w: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.02..1.0));
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    let klein = |p: &H2Point| (p.x2() / p.x1(), p.x3() / p.x1());
    let verts = [klein(&tri.a), klein(&tri.b), klein(&tri.c)];
    let kx: f64 = (0..3).map(|i| w[i] * verts[i].0).sum();
    let ky: f64 = (0..3).map(|i| w[i] * verts[i].1).sum();
    H2Point::normalize(1.0, kx, ky).unwrap()
}

#[test]
fn appendix_images_match_matrix_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let signatures: Vec<(u32, u32)> = (3..=24)
        .flat_map(|p1| (3..=8).map(move |p2| (p1, p2)))
        .filter(|&(p1, p2)| p1 >= p2 && is_hyperbolic(p1, p2))
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let &(p1, p2) = signatures.choose(&mut rng).unwrap();
        let classes: Vec<_> = enumerate_simply(p1, p2).unwrap().into_iter().collect();
        let class = *classes.choose(&mut rng).unwrap();
        let xi = rng.gen_range(0.1..3.0);
        let ctx = GroupContext::new(p1, p2, class, xi).unwrap();
        let (r, alpha) = triangle_point(&mut rng, p1, p2).to_polar();
        let k = H2xRPoint::from_cylindrical(0.0, r, alpha);
        for i in 0..3 {
            let closed = appendix_image(r, alpha, i, p1, p2, class.part(i), xi);
            let matrix = ctx.generator_image(&k, i).projective();
            let scale = matrix.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
            for j in 0..4 {
                worst = worst.max((closed[j] - matrix[j]).abs() / scale);
            }
        }
    }
    assert!(worst < 1e-9, "worst deviation {worst:e}");
}

#[test]
fn geodesics_have_unit_speed() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let shot = GeodesicShot::canonical(rng.gen_range(-PI..PI), rng.gen_range(-1.4..1.4), 1.0);
        let tau = rng.gen_range(0.2..3.0);
        let (t0, r0, a0) = geodesic_point(&shot, tau - h).cylindrical();
        let (t1, r1, a1) = geodesic_point(&shot, tau + h).cylindrical();
        let (_, rm, _) = geodesic_point(&shot, tau).cylindrical();
        let d = Vector3::new((t1 - t0) / (2.0 * h), (r1 - r0) / (2.0 * h), wrap_angle(a1 - a0) / (2.0 * h));
        let speed = (d.transpose() * metric_tensor_at(rm) * d)[0].sqrt();
        worst = worst.max((speed - 1.0).abs());
    }
    assert!(worst < 1e-7, "worst speed defect {worst:e}");
}

#[test]
fn small_balls_are_flat() {
    let rho: f64 = 0.01;
    let flat = 4.0 / 3.0 * PI * rho.powi(3);
    let v = ball_volume(rho).unwrap();
    assert!(((v - flat) / flat).abs() < 1e-4);
}

#[test]
fn volume_derivative_is_surface_area() {
    let h = 1e-3;
    for rho in [0.2, 0.40707, 1.0, 2.52789, 4.0] {
        let v = |x: f64| ball_volume_with_tol(x, 1e-12).unwrap();
        let fd = (8.0 * (v(rho + h) - v(rho - h)) - (v(rho + 2.0 * h) - v(rho - 2.0 * h))) / (12.0 * h);
        let area = ball_surface_integrand(rho, 1e-12).unwrap();
        assert!(((fd - area) / area).abs() < 1e-6, "rho {rho}: {fd} vs {area}");
    }
}

#[test]
fn distance_splits_into_base_and_fibre() {
    let p = H2xRPoint::from_cylindrical(0.3, 0.0, 0.0);
    let q = H2xRPoint::from_cylindrical(-0.1, 0.7, 1.1);
    let d = h2xr_distance(&p, &q);
    assert!((d - 0.7_f64.hypot(0.4)).abs() < 1e-14);
}
