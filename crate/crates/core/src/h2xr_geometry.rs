//! Points, geodesics, distances and ball volumes in H2xR.
//!
//! A space point is a base point of the hyperbolic plane together with a fibre
//! coordinate `t`. The projective picture used for export is
//! `(1, e^t x1, e^t x2, e^t x3)`; cylindrical coordinates `(t, r, alpha)` put
//! the base point at distance `r` and bearing `alpha` from the origin.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic_plane::{
    h2_distance, minkowski, translate_from_origin, translate_to_origin, H2Point,
};
use crate::numeric::{newton, NewtonOptions};
use crate::quadrature::{integrate, QuadratureOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2xRPoint {
    pub base: H2Point,
    pub t: f64,
}

impl H2xRPoint {
    pub fn new(base: H2Point, t: f64) -> Self {
        Self { base, t }
    }

    pub fn origin() -> Self {
        Self::new(H2Point::ORIGIN, 0.0)
    }

    pub fn from_cylindrical(t: f64, r: f64, alpha: f64) -> Self {
        Self::new(H2Point::from_polar(r, alpha), t)
    }

    /// `(t, r, alpha)` with `alpha` in `(-pi, pi]`.
    pub fn cylindrical(&self) -> (f64, f64, f64) {
        let (r, alpha) = self.base.to_polar();
        (self.t, r, alpha)
    }

    /// Homogeneous coordinates `(1, e^t x1, e^t x2, e^t x3)`.
    pub fn projective(&self) -> [f64; 4] {
        let s = self.t.exp();
        [1.0, s * self.base.x1(), s * self.base.x2(), s * self.base.x3()]
    }

    /// Inverse of [`H2xRPoint::projective`]; accepts any positive multiple.
    pub fn from_projective(h: [f64; 4]) -> Result<Self> {
        if h[0] <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "projective point {h:?} has non-positive homogenizing coordinate"
            )));
        }
        let v = Vector3::new(h[1], h[2], h[3]) / h[0];
        let q = minkowski(&v, &v);
        if !(q > 0.0) || v[0] <= 0.0 {
            return Err(Error::InvalidPoint { product: q });
        }
        let t = 0.5 * q.ln();
        let base = H2Point::normalize(v[0], v[1], v[2])?;
        Ok(Self::new(base, t))
    }
}

/// Initial direction of a unit speed geodesic leaving the origin, plus its length.
///
/// `u` is the bearing in the base plane, `v` the elevation towards the fibre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicShot {
    pub u: f64,
    pub v: f64,
    pub length: f64,
}

impl GeodesicShot {
    /// Folds an arbitrary `(u, v, length)` into `u in (-pi, pi]`,
    /// `v in [-pi/2, pi/2]`, `length >= 0`.
    pub fn canonical(mut u: f64, mut v: f64, mut length: f64) -> Self {
        if length < 0.0 {
            length = -length;
            v = -v;
            u += PI;
        }
        v = wrap_angle(v);
        if v > FRAC_PI_2 {
            v = PI - v;
            u += PI;
        } else if v < -FRAC_PI_2 {
            v = -PI - v;
            u += PI;
        }
        Self {
            u: wrap_angle(u),
            v,
            length,
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Point at arc length `tau` on the geodesic from the origin described by `shot`.
pub fn geodesic_point(shot: &GeodesicShot, tau: f64) -> H2xRPoint {
    let (sv, cv) = shot.v.sin_cos();
    H2xRPoint::from_cylindrical(tau * sv, tau * cv, shot.u)
}

/// Same as [`geodesic_point`] but starting at `start`, with the shot
/// measured in the frame obtained by translating `start` to the origin.
pub fn geodesic_point_from(start: &H2xRPoint, shot: &GeodesicShot, tau: f64) -> H2xRPoint {
    let local = geodesic_point(shot, tau);
    H2xRPoint::new(
        translate_from_origin(&start.base).apply(&local.base),
        local.t + start.t,
    )
}

/// Geodesic distance in H2xR: base and fibre parts combine like a product metric.
pub fn h2xr_distance(p: &H2xRPoint, q: &H2xRPoint) -> f64 {
    h2_distance(&p.base, &q.base).hypot(q.t - p.t)
}

fn local_target(p: &H2xRPoint, q: &H2xRPoint) -> H2xRPoint {
    H2xRPoint::new(translate_to_origin(&p.base).apply(&q.base), q.t - p.t)
}

/// Shooting solve for the geodesic from `p` to `q`, seeded with the product-form answer.
pub fn solve_shot(p: &H2xRPoint, q: &H2xRPoint) -> Result<GeodesicShot> {
    let target = local_target(p, q);
    let (dt, r, alpha) = target.cylindrical();
    let length = r.hypot(dt);
    let seed = GeodesicShot::canonical(alpha, dt.atan2(r), length);
    solve_shot_from_seed(p, q, seed, NewtonOptions::default())
}

/// Newton solve of the endpoint equations `geodesic_point(u, v, L) = q` from an explicit seed.
pub fn solve_shot_from_seed(
    p: &H2xRPoint,
    q: &H2xRPoint,
    seed: GeodesicShot,
    opts: NewtonOptions,
) -> Result<GeodesicShot> {
    let target = local_target(p, q);
    let (dt, r, _) = target.cylindrical();
    if r < 1e-12 {
        // Pure fibre geodesic; the bearing is irrelevant.
        let v = if dt >= 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
        return Ok(GeodesicShot::canonical(0.0, v, dt.abs()));
    }
    let h = target.projective();
    let scale = h[1].abs().max(h[2].abs()).max(h[3].abs()).max(1.0);
    let f = |x: &DVector<f64>| {
        let pt = geodesic_point(
            &GeodesicShot {
                u: x[0],
                v: x[1],
                length: x[2],
            },
            x[2],
        )
        .projective();
        let res = DVector::from_vec(vec![
            (pt[1] - h[1]) / scale,
            (pt[2] - h[2]) / scale,
            (pt[3] - h[3]) / scale,
        ]);
        res.iter().all(|c| c.is_finite()).then_some(res)
    };
    let out = newton(f, DVector::from_vec(vec![seed.u, seed.v, seed.length]), opts)?;
    Ok(GeodesicShot::canonical(out.x[0], out.x[1], out.x[2]))
}

/// Metric tensor in cylindrical coordinates `(t, r, alpha)`.
pub fn metric_tensor_at(r: f64) -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, r.sinh().powi(2)))
}

/// Volume of the prism over a base region of the given area and fibre height.
pub fn prism_volume(area: f64, height: f64) -> f64 {
    area * height
}

/// Area density of the sphere of radius `rho`: `2 pi int rho sinh(rho cos v) dv`.
pub fn ball_surface_integrand(rho: f64, tol: f64) -> Result<f64> {
    let inner = integrate(
        |v| rho * (rho * v.cos()).sinh(),
        -FRAC_PI_2,
        FRAC_PI_2,
        QuadratureOptions {
            abs_tol: tol,
            ..Default::default()
        },
    )?;
    Ok(2.0 * PI * inner)
}

/// Volume of the geodesic ball of radius `rho`.
///
/// Integrates `tau sinh(tau cos v)` over `v in [-pi/2, pi/2]` (inner) and
/// `tau in [0, rho]` (outer), times `2 pi`. The tolerance is absolute but
/// capped relative to the flat volume so tiny balls keep their digits.
pub fn ball_volume_with_tol(rho: f64, tol: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::InvalidInput(format!("ball radius {rho} must be >= 0")));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let flat = 4.0 / 3.0 * PI * rho.powi(3);
    let outer_tol = tol * flat.min(1.0);
    let inner_tol = (outer_tol / (2.0 * PI * rho)).max(1e-300);
    let mut failure = None;
    let outer = integrate(
        |tau| {
            let inner = integrate(
                |v| (tau * v.cos()).sinh(),
                -FRAC_PI_2,
                FRAC_PI_2,
                QuadratureOptions {
                    abs_tol: inner_tol,
                    max_evals: 100_000,
                },
            );
            match inner {
                Ok(val) => tau * val,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        0.0,
        rho,
        QuadratureOptions {
            abs_tol: outer_tol.max(1e-300),
            max_evals: 10_000,
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * PI * outer)
}

pub fn ball_volume(rho: f64) -> Result<f64> {
    ball_volume_with_tol(rho, 1e-8)
}

/// Precomputed ball volumes with Hermite interpolation between samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallVolumeTable {
    /// `(rho, volume, d volume / d rho)`.
    pub samples: Vec<(f64, f64, f64)>,
    pub quadrature_tol: f64,
}

impl BallVolumeTable {
    pub fn build(rho_max: f64, intervals: usize, quadrature_tol: f64) -> Result<Self> {
        if !(rho_max > 0.0) || intervals == 0 {
            return Err(Error::InvalidInput("empty ball volume table".into()));
        }
        let samples = (0..=intervals)
            .map(|i| {
                let rho = rho_max * i as f64 / intervals as f64;
                Ok((
                    rho,
                    ball_volume_with_tol(rho, quadrature_tol)?,
                    ball_surface_integrand(rho, quadrature_tol * 1e-2)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            samples,
            quadrature_tol,
        })
    }

    pub fn rho_max(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.0)
    }

    /// Interpolated volume, or `None` outside the tabulated range.
    pub fn volume(&self, rho: f64) -> Option<f64> {
        if !(0.0..=self.rho_max()).contains(&rho) {
            return None;
        }
        let i = self
            .samples
            .partition_point(|s| s.0 <= rho)
            .clamp(1, self.samples.len() - 1);
        let (x0, y0, d0) = self.samples[i - 1];
        let (x1, y1, d1) = self.samples[i];
        let h = x1 - x0;
        let s = (rho - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        Some(
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0
                + (s3 - 2.0 * s2 + s) * h * d0
                + (-2.0 * s3 + 3.0 * s2) * y1
                + (s3 - s2) * h * d1,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pure_fibre_geodesic() {
        let p = geodesic_point(
            &GeodesicShot {
                u: 0.3,
                v: FRAC_PI_2,
                length: 1.0,
            },
            1.0,
        );
        assert!(h2_distance(&p.base, &H2Point::ORIGIN) < 1e-15);
        assert_abs_diff_eq!(p.t, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn base_plane_geodesic() {
        let r = 0.8;
        let p = geodesic_point(
            &GeodesicShot {
                u: 0.0,
                v: 0.0,
                length: r,
            },
            r,
        );
        assert_abs_diff_eq!(p.base.x1(), r.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(p.base.x2(), r.sinh(), epsilon = 1e-14);
        assert_eq!(p.t, 0.0);
    }

    #[test]
    fn fibre_offset_distance() {
        let base = H2Point::from_polar(0.3, 1.0);
        let d = h2xr_distance(&H2xRPoint::new(base, -0.2), &H2xRPoint::new(base, 0.5));
        assert_abs_diff_eq!(d, 0.7, epsilon = 1e-15);
    }

    #[test]
    fn pythagorean_distance_matches_shooting() {
        let p = H2xRPoint::origin();
        let q = H2xRPoint::from_cylindrical(0.8, 0.6, 0.0);
        assert_abs_diff_eq!(h2xr_distance(&p, &q), 1.0, epsilon = 1e-15);
        let seed = GeodesicShot {
            u: 0.2,
            v: 0.5,
            length: 1.3,
        };
        let shot = solve_shot_from_seed(&p, &q, seed, NewtonOptions::default()).unwrap();
        assert_abs_diff_eq!(shot.length, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn shot_straight_up() {
        let base = H2Point::from_polar(0.4, -1.0);
        let s = solve_shot(&H2xRPoint::new(base, 0.1), &H2xRPoint::new(base, 0.6)).unwrap();
        assert_abs_diff_eq!(s.v, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.length, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn shot_in_base_plane() {
        let q = H2xRPoint::from_cylindrical(0.0, 1.2, -0.7);
        let s = solve_shot(&H2xRPoint::origin(), &q).unwrap();
        assert_abs_diff_eq!(s.u, -0.7, epsilon = 1e-10);
        assert_abs_diff_eq!(s.v, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s.length, 1.2, epsilon = 1e-10);
    }

    #[test]
    fn projective_round_trip() {
        let p = H2xRPoint::from_cylindrical(-0.4, 1.7, 2.5);
        let q = H2xRPoint::from_projective(p.projective().map(|c| 3.0 * c)).unwrap();
        assert!(h2xr_distance(&p, &q) < 1e-12);
    }

    #[test]
    fn canonical_shot_ranges() {
        let s = GeodesicShot::canonical(3.0, 2.0, -1.0);
        assert!(s.u > -PI && s.u <= PI);
        assert!(s.v.abs() <= FRAC_PI_2);
        assert!(s.length >= 0.0);
        let a = geodesic_point(&s, s.length);
        let b = geodesic_point(
            &GeodesicShot {
                u: 3.0,
                v: 2.0,
                length: 1.0,
            },
            -1.0,
        );
        assert!(h2xr_distance(&a, &b) < 1e-12);
    }

    #[test]
    fn ball_volume_values() {
        assert_eq!(ball_volume(0.0).unwrap(), 0.0);
        let small = ball_volume(0.01).unwrap();
        let flat = 4.0 / 3.0 * PI * 1e-6;
        assert!(((small - flat) / flat).abs() < 1e-4);
        let v = ball_volume(0.40707).unwrap();
        assert!(((v - 0.28568) / 0.28568).abs() < 1e-4, "{v}");
        let big = ball_volume(2.52789).unwrap();
        assert!(((big - 102.32545) / 102.32545).abs() < 1e-4);
        assert!(ball_volume(-1.0).is_err());
    }

    #[test]
    fn prism_values() {
        assert_eq!(prism_volume(1.0, 1.0), 1.0);
        assert_abs_diff_eq!(prism_volume(PI / 6.0, 0.814141), 0.42628, epsilon = 5e-6);
        assert_abs_diff_eq!(prism_volume(0.149600, 2.0 * 0.54527 * 7.0), 1.14204, epsilon = 5e-5);
    }

    #[test]
    fn metric_tensor_values() {
        assert_eq!(metric_tensor_at(0.0), Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0)));
        let g = metric_tensor_at(1.0);
        assert_abs_diff_eq!(g[(2, 2)], 1f64.sinh().powi(2), epsilon = 1e-15);
    }

    #[test]
    fn volume_table_interpolates() {
        let table = BallVolumeTable::build(3.0, 60, 1e-10).unwrap();
        for rho in [0.05, 0.40707, 1.3, 2.52789] {
            let exact = ball_volume_with_tol(rho, 1e-10).unwrap();
            let approx = table.volume(rho).unwrap();
            assert!((approx - exact).abs() < 1e-7 * exact.max(1.0), "{rho}");
        }
        assert!(table.volume(3.5).is_none());
    }
}
