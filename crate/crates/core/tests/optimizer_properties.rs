use std::f64::consts::PI;
use std::time::Instant;

use h2xr_core::frobenius::enumerate_simply;
use h2xr_core::h2xr_geometry::h2xr_distance;
use h2xr_core::hyperbolic_plane::{fundamental_domain_area, translate_from_origin, H2Point};
use h2xr_core::packing_optimizer::{
    density_at_kernel, endpoint_residual, global_optimum, solve_endpoint_system, solve_multiply,
    solve_simply, validate_packing, Mode,
};
use h2xr_core::reference::worked_endpoint_state;
use h2xr_core::{Error, KernelSite, PackingSolution, SolverOptions, TranslationClass};

fn class(s: &str) -> TranslationClass {
    s.parse().unwrap()
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn interior_optimum_equalizes_generator_images() {
    for c in ["0,0,0", "0,1/2,1/2", "1/2,1/2,0", "1/2,0,1/2"] {
        let s = solve_simply(6, 4, class(c), &opts()).unwrap();
        let ctx = s.context().unwrap();
        for i in 0..3 {
            let d = h2xr_distance(&s.kernel, &ctx.generator_image(&s.kernel, i));
            assert!((d - s.xi).abs() < 1e-8, "{c}: generator {i} at {d}, xi {}", s.xi);
        }
        assert!((s.xi - 2.0 * s.rho).abs() < 1e-12);
    }
}

#[test]
fn interior_optimum_is_locally_maximal() {
    for (p1, p2, c) in [(6, 4, "0,1/2,1/2"), (7, 3, "0,0,0"), (8, 5, "1/2,1/2,0")] {
        let s = solve_simply(p1, p2, class(c), &opts()).unwrap();
        let lift = translate_from_origin(&s.kernel.base);
        for step in [1e-3, 1e-2] {
            for j in 0..8 {
                let nearby = lift.apply(&H2Point::from_polar(step, j as f64 * PI / 4.0));
                let (_, delta) = density_at_kernel(p1, p2, class(c), &nearby, &opts()).unwrap();
                assert!(delta <= s.density + 1e-9, "(2,{p1},{p2}) {c}: {delta} > {}", s.density);
            }
        }
    }
}

fn assert_dv_consistent(s: &PackingSolution) {
    let area = fundamental_domain_area(s.p1, s.p2).unwrap();
    let expect = area * s.xi * s.stabilizer_order as f64;
    assert!((s.vol_dv - expect).abs() < 1e-12 * expect);
    assert!((s.density - s.vol_ball / s.vol_dv).abs() < 1e-14);
    assert_eq!(s.stabilizer_order, s.site.stabilizer_order(s.p1, s.p2));
}

#[test]
fn dirichlet_voronoi_volume_is_a_prism() {
    assert_dv_consistent(&solve_simply(9, 3, class("0,1/3,1/3"), &opts()).unwrap());
    assert_dv_consistent(&solve_multiply(20, 4, KernelSite::B, class("1/2,0,1/2"), &opts()).unwrap());
    assert_dv_consistent(&solve_multiply(6, 5, KernelSite::C, class("1/2,1/2,0"), &opts()).unwrap());
    assert_dv_consistent(&solve_multiply(5, 5, KernelSite::A, class("0,2/5,2/5"), &opts()).unwrap());
}

#[test]
fn worked_endpoint_state_solves_the_system() {
    let (p1, p2, c, printed) = worked_endpoint_state();
    let (state, residual) = solve_endpoint_system(p1, p2, c, &printed, &opts()).unwrap();
    assert!(residual < 1e-8);
    assert!(endpoint_residual(p1, p2, c, &state).unwrap().norm() < 1e-8);
    let got = state.to_vector();
    let want = printed.to_vector();
    for j in 0..9 {
        assert!((got[j] - want[j]).abs() < 5e-5, "component {j}: {} vs {}", got[j], want[j]);
    }
}

#[test]
fn sixty_two_accepted_sixty_three_rejected() {
    let ok = solve_multiply(62, 6, KernelSite::B, class("1/2,0,1/2"), &opts()).unwrap();
    assert!(ok.validated);
    assert!((ok.density - 0.78913).abs() < 5e-5);
    match solve_multiply(63, 6, KernelSite::B, class("1/2,0,1/2"), &opts()) {
        Err(Error::Overlap { distance, required, .. }) => assert!(distance < required),
        other => panic!("expected an overlap, got {other:?}"),
    }
}

#[test]
fn validator_rejects_a_shrunken_lattice() {
    let mut s = solve_simply(6, 4, class("0,1/2,1/2"), &opts()).unwrap();
    s.xi *= 0.9;
    assert!(matches!(validate_packing(&s, &opts()), Err(Error::Overlap { .. })));
}

#[test]
fn worked_signature_is_fast() {
    let start = Instant::now();
    for c in enumerate_simply(6, 4).unwrap() {
        solve_simply(6, 4, c, &opts()).unwrap();
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn small_sweep_reports_every_class() {
    let report = global_optimum(4, 5..=8, &[], Mode::Simply, &opts()).unwrap();
    let best = report.best_row().unwrap();
    assert_eq!((best.p1, best.p2), (6, 4));
    assert_eq!(report.representatives().len(), 4);
    assert!(report.rows.iter().all(|r| r.status == "ok"));
}

#[test]
fn solutions_round_trip_through_json() {
    let s = solve_multiply(20, 4, KernelSite::B, class("1/2,0,1/2"), &opts()).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: PackingSolution = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
}
