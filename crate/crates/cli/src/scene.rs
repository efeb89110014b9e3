//! Ball configurations exported for external viewers.
//!
//! Coordinates are projective `(1, e^t x1, e^t x2, e^t x3)`; see the README
//! for the full schema.

use std::f64::consts::{FRAC_PI_2, PI};

use h2xr_core::h2xr_geometry::{geodesic_point_from, GeodesicShot};
use h2xr_core::hyperbolic_plane::{rotation_at_origin, translate_from_origin, H2Isometry};
use h2xr_core::{H2Point, H2xRPoint, KernelSite, PackingSolution, SolverOptions, TranslationClass};
use serde::{Deserialize, Serialize};

use crate::config::Conjugation;
use crate::error::CliResult;

pub const MODEL_TAG: &str = "projective-H2xR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneMetadata {
    pub signature: [u32; 3],
    pub class: TranslationClass,
    pub site: KernelSite,
    pub density: f64,
    pub rho: f64,
    pub xi: f64,
    /// Sphere mesh resolution `[u, v]`.
    pub mesh: [usize; 2],
    pub word_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneBall {
    pub center: [f64; 4],
    pub rho: f64,
    /// Group word carrying the kernel onto this ball; `e` for the kernel.
    pub word: String,
    /// `u`-major grid of surface points, `mesh[0] * mesh[1]` entries.
    pub mesh: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneTriangle {
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub c: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneExport {
    pub model: String,
    pub metadata: SceneMetadata,
    pub triangle: SceneTriangle,
    pub balls: Vec<SceneBall>,
}

/// Directions of the sphere mesh: `u` over `(-pi, pi]`, `v` over `[-pi/2, pi/2]` with both ends.
fn mesh_directions(nu: usize, nv: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = -PI + (i + 1) as f64 * 2.0 * PI / nu as f64;
        for j in 0..nv {
            let v = -FRAC_PI_2 + j as f64 * PI / (nv - 1) as f64;
            out.push((u, v));
        }
    }
    out
}

fn sphere_mesh(center: &H2xRPoint, rho: f64, dirs: &[(f64, f64)]) -> Vec<[f64; 4]> {
    dirs.iter()
        .map(|&(u, v)| geodesic_point_from(center, &GeodesicShot { u, v, length: rho }, rho).projective())
        .collect()
}

fn lift(p: &H2Point) -> [f64; 4] {
    H2xRPoint::new(*p, 0.0).projective()
}

impl SceneExport {
    /// Kernel ball plus every orbit ball whose centre lies within `reach * 2 rho`.
    pub fn build(sol: &PackingSolution, opts: &SolverOptions, mesh: (usize, usize), reach: f64) -> CliResult<Self> {
        let ctx = sol.context()?;
        let cap = reach * 2.0 * sol.rho * (1.0 + 1e-9);
        let orbit = ctx.orbit_neighbors(&sol.kernel, opts.word_len, cap);
        let dirs = mesh_directions(mesh.0, mesh.1);
        let ball = |center: H2xRPoint, word: String| SceneBall {
            center: center.projective(),
            rho: sol.rho,
            word,
            mesh: sphere_mesh(&center, sol.rho, &dirs),
        };
        let mut balls = vec![ball(sol.kernel, "e".into())];
        balls.extend(
            orbit
                .neighbors
                .iter()
                .filter(|n| n.distance <= cap)
                .map(|n| ball(n.point, n.word.to_string())),
        );
        Ok(SceneExport {
            model: MODEL_TAG.into(),
            metadata: SceneMetadata {
                signature: [2, sol.p1, sol.p2],
                class: sol.class,
                site: sol.site,
                density: sol.density,
                rho: sol.rho,
                xi: sol.xi,
                mesh: [mesh.0, mesh.1],
                word_len: opts.word_len,
            },
            triangle: SceneTriangle {
                a: lift(&ctx.triangle.a),
                b: lift(&ctx.triangle.b),
                c: lift(&ctx.triangle.c),
            },
            balls,
        })
    }

    /// Moves every point of the scene by the isometry `conj`.
    pub fn conjugated(&self, conj: &Conjugation) -> CliResult<Self> {
        let iso: H2Isometry =
            rotation_at_origin(conj.angle).then(&translate_from_origin(&H2Point::from_polar(conj.r, conj.alpha)));
        let map = |h: &[f64; 4]| -> CliResult<[f64; 4]> {
            let p = H2xRPoint::from_projective(*h)?;
            Ok(H2xRPoint::new(iso.apply(&p.base), p.t + conj.t).projective())
        };
        let mut out = self.clone();
        for b in &mut out.balls {
            b.center = map(&b.center)?;
            for m in &mut b.mesh {
                *m = map(m)?;
            }
        }
        out.triangle = SceneTriangle {
            a: map(&self.triangle.a)?,
            b: map(&self.triangle.b)?,
            c: map(&self.triangle.c)?,
        };
        Ok(out)
    }

    /// Pairwise centre distances, sorted.
    pub fn center_distances(&self) -> CliResult<Vec<f64>> {
        let pts = self
            .balls
            .iter()
            .map(|b| H2xRPoint::from_projective(b.center))
            .collect::<Result<Vec<_>, _>>()?;
        let mut d = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d.push(h2xr_core::h2xr_geometry::h2xr_distance(&pts[i], &pts[j]));
            }
        }
        d.sort_by(f64::total_cmp);
        Ok(d)
    }
}
