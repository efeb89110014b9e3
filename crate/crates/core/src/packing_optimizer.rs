//! Optimal ball packings for each signature, translation class and kernel site.
//!
//! A packing is the orbit of a kernel point `K` under the screw group; its
//! balls have radius `rho` equal to half the distance from `K` to its nearest
//! orbit image and the lattice parameter is `xi = 2 rho`. The Dirichlet-Voronoi
//! cell of `K` is a prism of volume `area * xi * stabilizer_order`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::{dedupe_equivariant, enumerate_multiply, enumerate_simply, KernelSite, TranslationClass};
use crate::h2xr_geometry::{ball_volume_with_tol, geodesic_point, solve_shot, GeodesicShot, H2xRPoint};
use crate::hyperbolic_plane::{h2_distance, is_hyperbolic, translate_to_origin, triangle_vertices, H2Point};
use crate::numeric::{extrapolate_to_zero, golden_section_max, newton, NewtonOptions};
use crate::screw_group::GroupContext;

/// Knobs shared by all solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub quadrature_tol: f64,
    pub newton_tol: f64,
    /// Maximal word length scanned by the overlap validator.
    pub word_len: usize,
    /// Validator radius as a multiple of `xi`.
    pub radius_cap_factor: f64,
    /// Seeds per side of the kernel seed grid over the triangle.
    pub seed_grid: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            quadrature_tol: 1e-8,
            newton_tol: 1e-12,
            word_len: 8,
            radius_cap_factor: 2.5,
            seed_grid: 8,
        }
    }
}

impl SolverOptions {
    fn newton(&self) -> NewtonOptions {
        NewtonOptions {
            tol: self.newton_tol,
            max_iter: 50,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.quadrature_tol > 0.0 && self.newton_tol > 0.0 && self.radius_cap_factor > 0.0)
            || self.word_len == 0
            || self.seed_grid == 0
        {
            return Err(Error::InvalidInput("solver tolerances and limits must be positive".into()));
        }
        Ok(())
    }
}

/// Kernel in the interior (trivial stabilizer) or on a rotation centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simply,
    Multiply,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Simply => "simply",
            Mode::Multiply => "multiply",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simply" => Ok(Mode::Simply),
            "multiply" => Ok(Mode::Multiply),
            _ => Err(Error::InvalidInput(format!("unknown mode {s:?} (simply|multiply)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingSolution {
    pub p1: u32,
    pub p2: u32,
    pub site: KernelSite,
    pub class: TranslationClass,
    pub kernel: H2xRPoint,
    pub rho: f64,
    pub xi: f64,
    pub vol_ball: f64,
    pub vol_dv: f64,
    pub density: f64,
    pub stabilizer_order: u32,
    /// Orbit words whose images touch the kernel ball, i.e. sit at distance `2 rho`.
    pub active_constraints: Vec<String>,
    pub validated: bool,
    /// Geodesics from the kernel to its three generator images, in the frame
    /// where the kernel is the origin (interior kernels only).
    pub shots: Option<[GeodesicShot; 3]>,
    /// Norm of the endpoint equations for those geodesics.
    pub endpoint_residual: Option<f64>,
}

impl PackingSolution {
    /// Kernel in projective plane coordinates `(x2 / x1, x3 / x1)`.
    pub fn kernel_klein(&self) -> (f64, f64) {
        let b = &self.kernel.base;
        (b.x2() / b.x1(), b.x3() / b.x1())
    }

    /// `(r, alpha)` of the kernel about the triangle vertex C.
    pub fn kernel_polar(&self) -> (f64, f64) {
        self.kernel.base.to_polar()
    }

    pub fn context(&self) -> Result<GroupContext> {
        GroupContext::new(self.p1, self.p2, self.class, self.xi)
    }
}

fn vol_dv(p1: u32, p2: u32, xi: f64, stab: u32) -> Result<f64> {
    Ok(triangle_vertices(p1, p2)?.area_fd * xi * stab as f64)
}

/// Upper bound on `xi` imposed by the images of `k` under the three generators,
/// ignoring images that coincide with `k`. Each image at base distance `b` with
/// fibre fraction `q` stays outside the kernel ball while `xi <= b / sqrt(1 - q^2)`.
fn contact_lattice_parameter(ctx: &GroupContext, k: &H2Point) -> Option<f64> {
    (0..3)
        .filter_map(|i| {
            let b = h2_distance(k, &ctx.generator(i).linear.apply(k));
            let q = ctx.class.as_f64()[i].abs();
            if b < 1e-6 && q == 0.0 {
                None
            } else {
                Some(b / (1.0 - q * q).sqrt())
            }
        })
        .min_by(f64::total_cmp)
}

/// Density of the packing with interior kernel `k` when `xi` is pushed to the
/// first generator contact, together with that `xi`.
pub fn density_at_kernel(
    p1: u32,
    p2: u32,
    class: TranslationClass,
    k: &H2Point,
    opts: &SolverOptions,
) -> Result<(f64, f64)> {
    let ctx = GroupContext::new(p1, p2, class, 1.0)?;
    let xi = contact_lattice_parameter(&ctx, k)
        .ok_or_else(|| Error::InvalidInput("kernel is fixed by every generator".into()))?;
    let v = ball_volume_with_tol(xi / 2.0, opts.quadrature_tol)?;
    Ok((xi, v / vol_dv(p1, p2, xi, 1)?))
}

/// Equalization residuals `b_i / sqrt(1 - r_i^2) - xi` at the kernel `(r, alpha)`.
fn equalization(ctx: &GroupContext, x: &DVector<f64>) -> Option<DVector<f64>> {
    if !(x[2] > 0.0) || x[0].abs() > 30.0 {
        return None;
    }
    let k = H2Point::from_polar(x[0], x[1]);
    let q = ctx.class.as_f64();
    Some(DVector::from_iterator(
        3,
        (0..3).map(|i| {
            let b = h2_distance(&k, &ctx.generator(i).linear.apply(&k));
            b / (1.0 - q[i] * q[i]).sqrt() - x[2]
        }),
    ))
}

/// Shots from the kernel to its generator images and the endpoint residual norm.
fn endpoint_system(ctx: &GroupContext, k: &H2xRPoint) -> Result<([GeodesicShot; 3], f64)> {
    let mut shots = [GeodesicShot {
        u: 0.0,
        v: 0.0,
        length: 0.0,
    }; 3];
    let mut res2 = 0.0;
    for (i, shot) in shots.iter_mut().enumerate() {
        let image = ctx.generator_image(k, i);
        *shot = solve_shot(k, &image)?;
        let target = local_image(k, &image).projective();
        let reached = geodesic_point(shot, ctx.xi).projective();
        res2 += (1..4).map(|j| (reached[j] - target[j]).powi(2)).sum::<f64>();
    }
    Ok((shots, res2.sqrt()))
}

fn local_image(k: &H2xRPoint, image: &H2xRPoint) -> H2xRPoint {
    H2xRPoint::new(translate_to_origin(&k.base).apply(&image.base), image.t - k.t)
}

/// State of the full endpoint system: three shots plus the kernel and lattice parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointState {
    /// `(u_i, v_i)` for the generators 0, 1, 2.
    pub directions: [(f64, f64); 3],
    pub r: f64,
    pub alpha: f64,
    pub xi: f64,
}

impl EndpointState {
    pub fn to_vector(&self) -> DVector<f64> {
        let d = self.directions;
        DVector::from_vec(vec![d[0].0, d[0].1, d[1].0, d[1].1, d[2].0, d[2].1, self.r, self.alpha, self.xi])
    }

    pub fn from_vector(x: &DVector<f64>) -> Self {
        Self {
            directions: [(x[0], x[1]), (x[2], x[3]), (x[4], x[5])],
            r: x[6],
            alpha: x[7],
            xi: x[8],
        }
    }
}

/// The nine endpoint equations: the geodesic of length `xi` leaving the kernel
/// (moved to the origin) in direction `(u_i, v_i)` must end at the image of the
/// kernel under generator `i`.
pub fn endpoint_residual(p1: u32, p2: u32, class: TranslationClass, state: &EndpointState) -> Result<DVector<f64>> {
    let ctx = GroupContext::new(p1, p2, class, state.xi.abs().max(1e-12))?;
    let k = H2xRPoint::from_cylindrical(0.0, state.r, state.alpha);
    let mut out = Vec::with_capacity(9);
    for i in 0..3 {
        let target = local_image(&k, &ctx.generator_image(&k, i)).projective();
        let (u, v) = state.directions[i];
        let reached = geodesic_point(&GeodesicShot { u, v, length: state.xi }, state.xi).projective();
        out.extend((1..4).map(|j| reached[j] - target[j]));
    }
    Ok(DVector::from_vec(out))
}

/// Newton solve of the nine endpoint equations from an explicit seed.
pub fn solve_endpoint_system(
    p1: u32,
    p2: u32,
    class: TranslationClass,
    seed: &EndpointState,
    opts: &SolverOptions,
) -> Result<(EndpointState, f64)> {
    GroupContext::new(p1, p2, class, 1.0)?;
    let f = |x: &DVector<f64>| {
        if !(x[8] > 0.0) {
            return None;
        }
        endpoint_residual(p1, p2, class, &EndpointState::from_vector(x)).ok()
    };
    let out = newton(f, seed.to_vector(), opts.newton())?;
    Ok((EndpointState::from_vector(&out.x), out.residual))
}

fn seed_points(ctx: &GroupContext, n: usize) -> Vec<H2Point> {
    let t = &ctx.triangle;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let u = (i as f64 + 0.5) / n as f64;
            let w = (j as f64 + 0.5) / n as f64;
            let mix = |c: usize| {
                (1.0 - u) * t.c.coords()[c] + u * ((1.0 - w) * t.a.coords()[c] + w * t.b.coords()[c])
            };
            if let Ok(p) = H2Point::normalize(mix(0), mix(1), mix(2)) {
                out.push(p);
            }
        }
    }
    out
}

fn assemble(
    ctx: &GroupContext,
    site: KernelSite,
    kernel: H2xRPoint,
    rho: f64,
    stab: u32,
    opts: &SolverOptions,
) -> Result<PackingSolution> {
    let vol_ball = ball_volume_with_tol(rho, opts.quadrature_tol)?;
    let vol_dv = vol_dv(ctx.p1, ctx.p2, ctx.xi, stab)?;
    Ok(PackingSolution {
        p1: ctx.p1,
        p2: ctx.p2,
        site,
        class: ctx.class,
        kernel,
        rho,
        xi: ctx.xi,
        vol_ball,
        vol_dv,
        density: vol_ball / vol_dv,
        stabilizer_order: stab,
        active_constraints: Vec::new(),
        validated: false,
        shots: None,
        endpoint_residual: None,
    })
}

/// Optimal packing with a kernel of trivial stabilizer.
///
/// Solves the three equalization conditions `d(K, K^{g_i}) = xi` for the
/// kernel `(r, alpha)` and `xi` from a grid of seeds, discards roots whose
/// kernel is fixed by some element or whose orbit overlaps, and returns the
/// densest survivor. The nine endpoint equations are evaluated at the result
/// as a cross-check.
pub fn solve_simply(p1: u32, p2: u32, class: TranslationClass, opts: &SolverOptions) -> Result<PackingSolution> {
    opts.check()?;
    let ctx1 = GroupContext::new(p1, p2, class, 1.0)?;
    let mut roots: Vec<(f64, f64, f64)> = Vec::new();
    for seed in seed_points(&ctx1, opts.seed_grid) {
        let (r0, a0) = seed.to_polar();
        let xi0 = match contact_lattice_parameter(&ctx1, &seed) {
            Some(x) => x,
            None => continue,
        };
        let Ok(out) = newton(
            |x| equalization(&ctx1, x),
            DVector::from_vec(vec![r0, a0, xi0]),
            opts.newton(),
        ) else {
            continue;
        };
        let (mut r, mut a, xi) = (out.x[0], out.x[1], out.x[2]);
        if r < 0.0 {
            r = -r;
            a += std::f64::consts::PI;
        }
        a = crate::h2xr_geometry::wrap_angle(a);
        if !roots.iter().any(|&(r2, a2, x2)| {
            (x2 - xi).abs() < 1e-9 && h2_distance(&H2Point::from_polar(r, a), &H2Point::from_polar(r2, a2)) < 1e-7
        }) {
            roots.push((r, a, xi));
        }
    }
    let fail = |reason: String| Error::Unsolved {
        p1,
        p2,
        class: class.to_string(),
        reason,
    };
    if roots.is_empty() {
        return Err(fail("equalization system has no root from any seed".into()));
    }
    let mut candidates = Vec::new();
    for &(r, a, xi) in &roots {
        let ctx = GroupContext::new(p1, p2, class, xi)?;
        let kernel = H2xRPoint::from_cylindrical(0.0, r, a);
        if ctx.stabilizer_order(&kernel.base) != 1 {
            continue;
        }
        let sol = assemble(&ctx, KernelSite::Interior, kernel, xi / 2.0, 1, opts)?;
        if sol.density >= 1.0 {
            continue;
        }
        candidates.push(sol);
    }
    candidates.sort_by(|a, b| b.density.total_cmp(&a.density));
    let mut first_overlap = None;
    for sol in candidates {
        match validate_packing(&sol, opts) {
            Ok(mut valid) => {
                let ctx = valid.context()?;
                let (shots, residual) = endpoint_system(&ctx, &valid.kernel)?;
                valid.shots = Some(shots);
                valid.endpoint_residual = Some(residual);
                return Ok(valid);
            }
            Err(e @ Error::Overlap { .. }) => {
                first_overlap.get_or_insert(e);
            }
            Err(Error::Unsolved { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(first_overlap.unwrap_or_else(|| fail("every root has a fixed kernel or density >= 1".into())))
}

/// Optimal packing with the kernel on the rotation centre `site`.
///
/// The ball radius is limited by the fibre lattice and by the generator
/// images of the kernel. The lattice parameter maximizing the density on the
/// branch `xi = 2 rho` is found by golden-section search and snapped onto the
/// contact value when the maximum sits there.
pub fn solve_multiply(
    p1: u32,
    p2: u32,
    site: KernelSite,
    class: TranslationClass,
    opts: &SolverOptions,
) -> Result<PackingSolution> {
    opts.check()?;
    let Some(gi) = site.generator_index() else {
        return Err(Error::InvalidInput("multiply transitive kernels sit at A, B or C".into()));
    };
    let allowed = enumerate_multiply(p1, p2, site)?;
    if !allowed.contains(&class) {
        return Err(Error::InadmissibleClass {
            p1,
            p2,
            class: class.to_string(),
            detail: format!(" at vertex {site}: its translation part must vanish"),
        });
    }
    let ctx1 = GroupContext::new(p1, p2, class, 1.0)?;
    let k = *ctx1.center(gi);
    let stab = site.stabilizer_order(p1, p2);
    let q = class.as_f64();
    let images: Vec<(f64, f64)> = (0..3)
        .filter_map(|i| {
            let b = h2_distance(&k, &ctx1.generator(i).linear.apply(&k));
            (b >= 1e-6 || q[i] != 0.0).then_some((b, q[i].abs()))
        })
        .collect();
    let rho_of = |xi: f64| {
        images
            .iter()
            .map(|&(b, qi)| b.hypot(qi * xi))
            .fold(xi, f64::min)
            / 2.0
    };
    let area = ctx1.triangle.area_fd;
    let density = |xi: f64| {
        ball_volume_with_tol(rho_of(xi), opts.quadrature_tol).map_or(f64::NAN, |v| v / (area * xi * stab as f64))
    };
    let contact = images
        .iter()
        .map(|&(b, qi)| b / (1.0 - qi * qi).sqrt())
        .fold(f64::INFINITY, f64::min);
    // Past the contact value the generator images recede slower than the
    // ball volume grows, so only the branch xi = 2 rho is searched.
    let [ab, _, _] = ctx1.triangle.side_lengths();
    let upper = contact.min(4.0 * ab);
    let mut xi = golden_section_max(density, 1e-3, upper, 1e-10);
    if (upper - xi).abs() <= 1e-6 * upper && density(upper * (1.0 - 1e-6)) <= density(upper) {
        xi = upper;
    }
    let ctx = GroupContext::new(p1, p2, class, xi)?;
    let sol = assemble(&ctx, site, H2xRPoint::new(k, 0.0), rho_of(xi), stab, opts)?;
    validate_packing(&sol, opts)
}

/// Scans the orbit of the kernel for images closer than `2 rho`.
///
/// On success the returned copy lists the touching images and is marked validated.
pub fn validate_packing(sol: &PackingSolution, opts: &SolverOptions) -> Result<PackingSolution> {
    let ctx = sol.context()?;
    let cap = opts.radius_cap_factor * sol.xi;
    let orbit = ctx.orbit_neighbors(&sol.kernel, opts.word_len, cap);
    let expected = sol.site.stabilizer_order(sol.p1, sol.p2);
    if orbit.stabilizer_order != expected || (expected == 1 && !orbit.stabilizer_words.is_empty()) {
        return Err(Error::Unsolved {
            p1: sol.p1,
            p2: sol.p2,
            class: sol.class.to_string(),
            reason: format!(
                "kernel stabilizer has order {} (words {:?}), expected {expected}",
                orbit.stabilizer_order,
                orbit.stabilizer_words.iter().map(|w| w.to_string()).collect::<Vec<_>>()
            ),
        });
    }
    let required = 2.0 * sol.rho;
    if let Some(bad) = orbit.neighbors.iter().find(|n| n.distance < required - 1e-7) {
        return Err(Error::Overlap {
            word: bad.word.to_string(),
            distance: bad.distance,
            required,
        });
    }
    let touch = 1e-7 * required.max(1.0);
    let mut out = sol.clone();
    out.active_constraints = orbit
        .neighbors
        .iter()
        .take_while(|n| n.distance <= required + touch)
        .map(|n| n.word.to_string())
        .collect();
    out.validated = true;
    Ok(out)
}

/// Solves one case, dispatching on the site.
pub fn solve_case(
    p1: u32,
    p2: u32,
    site: KernelSite,
    class: TranslationClass,
    opts: &SolverOptions,
) -> Result<PackingSolution> {
    match site {
        KernelSite::Interior => solve_simply(p1, p2, class, opts),
        _ => solve_multiply(p1, p2, site, class, opts),
    }
}

/// One case of a sweep: the solution, or the reason there is none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p1: u32,
    pub p2: u32,
    pub site: KernelSite,
    pub class: TranslationClass,
    pub solution: Option<PackingSolution>,
    /// `ok`, or a short reason such as `overlap via g1 g0`.
    pub status: String,
}

impl SweepRow {
    pub fn density(&self) -> Option<f64> {
        self.solution.as_ref().filter(|s| s.validated).map(|s| s.density)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub mode: Mode,
    pub p2: u32,
    pub p1_range: (u32, u32),
    pub sites: Vec<KernelSite>,
    /// Ordered by `p1`, then site, then class.
    pub rows: Vec<SweepRow>,
    /// Index of the densest validated row.
    pub best: Option<usize>,
}

const TIE: f64 = 1e-8;

/// Index of the densest row among `idx`; near-ties go to the earliest row.
fn densest(rows: &[SweepRow], idx: impl Iterator<Item = usize>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in idx {
        if let Some(d) = rows[i].density() {
            match best {
                Some((_, bd)) if d <= bd + TIE => {}
                _ => best = Some((i, d)),
            }
        }
    }
    best.map(|b| b.0)
}

impl SweepReport {
    /// Densest validated row for each `p1`, in increasing `p1`.
    pub fn representatives(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < self.rows.len() {
            let p1 = self.rows[start].p1;
            let end = start + self.rows[start..].iter().take_while(|r| r.p1 == p1).count();
            if let Some(i) = densest(&self.rows, start..end) {
                out.push(i);
            }
            start = end;
        }
        out
    }

    pub fn best_row(&self) -> Option<&SweepRow> {
        self.best.map(|i| &self.rows[i])
    }
}

fn status_of(err: &Error) -> String {
    match err {
        Error::Overlap { word, .. } => format!("rejected: overlap via {word}"),
        other => format!("unsolved: {other}"),
    }
}

/// Solves every class at every site for each hyperbolic `p1` in the range.
pub fn global_optimum(
    p2: u32,
    p1_range: RangeInclusive<u32>,
    sites: &[KernelSite],
    mode: Mode,
    opts: &SolverOptions,
) -> Result<SweepReport> {
    opts.check()?;
    if p1_range.is_empty() {
        return Err(Error::InvalidInput("empty p1 range".into()));
    }
    let sites: Vec<KernelSite> = match mode {
        Mode::Simply => vec![KernelSite::Interior],
        Mode::Multiply => {
            let mut s: Vec<KernelSite> = sites.iter().copied().filter(|s| *s != KernelSite::Interior).collect();
            if s.is_empty() {
                s = KernelSite::VERTICES.to_vec();
            }
            s.sort();
            s.dedup();
            s
        }
    };
    let mut tasks = Vec::new();
    for p1 in p1_range.clone().filter(|&p1| is_hyperbolic(p1, p2)) {
        for &site in &sites {
            let classes = match site {
                KernelSite::Interior => enumerate_simply(p1, p2)?,
                _ => enumerate_multiply(p1, p2, site)?,
            };
            for class in dedupe_equivariant(&classes) {
                tasks.push((p1, site, class));
            }
        }
    }
    if tasks.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no hyperbolic signature (2,p1,{p2}) with p1 in {}..={}",
            p1_range.start(),
            p1_range.end()
        )));
    }
    let rows: Vec<SweepRow> = tasks
        .par_iter()
        .map(|&(p1, site, class)| {
            let (solution, status) = match solve_case(p1, p2, site, class, opts) {
                Ok(s) => (Some(s), "ok".to_string()),
                Err(e) => (None, status_of(&e)),
            };
            SweepRow {
                p1,
                p2,
                site,
                class,
                solution,
                status,
            }
        })
        .collect();
    let best = densest(&rows, 0..rows.len());
    Ok(SweepReport {
        mode,
        p2,
        p1_range: (*p1_range.start(), *p1_range.end()),
        sites,
        rows,
        best,
    })
}

/// Parity of the `p1` sequence used to approach `p1 -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn samples(&self) -> [u32; 3] {
        match self {
            Parity::Even => [100, 200, 400],
            Parity::Odd => [101, 201, 401],
        }
    }
}

/// Estimated `p1 -> infinity` limit of a family of optimal packings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub p2: u32,
    pub site: KernelSite,
    pub class: TranslationClass,
    pub parity: Parity,
    pub rho: f64,
    pub vol_ball: f64,
    pub density: f64,
    /// Gap between quadratic and linear extrapolants.
    pub rho_err: f64,
    pub density_err: f64,
    pub samples: Vec<PackingSolution>,
}

/// Extrapolates the optimal packing of `(2, p1, p2)` to `p1 -> infinity`
/// in `h = 1 / p1` from three large `p1` of the given parity.
pub fn limit_case(
    p2: u32,
    site: KernelSite,
    class: TranslationClass,
    parity: Parity,
    opts: &SolverOptions,
) -> Result<LimitEstimate> {
    let samples = parity
        .samples()
        .iter()
        .map(|&p1| solve_case(p1, p2, site, class, opts))
        .collect::<Result<Vec<_>>>()?;
    let series = |f: fn(&PackingSolution) -> f64| -> (f64, f64) {
        let pts: Vec<(f64, f64)> = samples.iter().map(|s| (1.0 / s.p1 as f64, f(s))).collect();
        let full = extrapolate_to_zero(&pts);
        let linear = extrapolate_to_zero(&pts[1..]);
        (full, (full - linear).abs())
    };
    let (rho, rho_err) = series(|s| s.rho);
    let (vol_ball, _) = series(|s| s.vol_ball);
    let (density, density_err) = series(|s| s.density);
    Ok(LimitEstimate {
        p2,
        site,
        class,
        parity,
        rho,
        vol_ball,
        density,
        rho_err,
        density_err,
        samples,
    })
}

/// Orders rows by `(p1, site, class)`.
pub fn row_order(a: &SweepRow, b: &SweepRow) -> Ordering {
    (a.p1, a.site, a.class).cmp(&(b.p1, b.site, b.class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn class(s: &str) -> TranslationClass {
        s.parse().unwrap()
    }

    #[test]
    fn worked_interior_case() {
        let s = solve_simply(6, 4, class("0,1/2,1/2"), &SolverOptions::default()).unwrap();
        assert_abs_diff_eq!(s.rho, 0.40707, epsilon = 5e-5);
        assert_abs_diff_eq!(s.density, 0.67018, epsilon = 5e-5);
        let (x, y) = s.kernel_klein();
        assert_abs_diff_eq!(x, 0.268182, epsilon = 5e-6);
        assert_abs_diff_eq!(y, -0.365808, epsilon = 5e-6);
        assert!(s.validated);
        assert!(s.endpoint_residual.unwrap() < 1e-8);
    }

    #[test]
    fn zero_class_and_odd_case() {
        let opts = SolverOptions::default();
        let s = solve_simply(6, 4, TranslationClass::zero(), &opts).unwrap();
        assert_abs_diff_eq!(s.rho, 0.35877, epsilon = 5e-5);
        assert_abs_diff_eq!(s.density, 0.51930, epsilon = 5e-5);
        let s = solve_simply(5, 4, class("1/2,0,1/2"), &opts).unwrap();
        assert_abs_diff_eq!(s.rho, 0.30618, epsilon = 5e-5);
        assert_abs_diff_eq!(s.density, 0.62892, epsilon = 5e-5);
    }

    #[test]
    fn vertex_cases() {
        let opts = SolverOptions::default();
        let s = solve_multiply(20, 4, KernelSite::B, class("1/2,0,1/2"), &opts).unwrap();
        assert_abs_diff_eq!(s.rho, 2.52789, epsilon = 5e-5);
        assert_abs_diff_eq!(s.vol_ball, 102.32545, epsilon = 1e-2);
        assert_abs_diff_eq!(s.density, 0.80529, epsilon = 5e-5);
        let s = solve_multiply(9, 3, KernelSite::B, TranslationClass::zero(), &opts).unwrap();
        assert_abs_diff_eq!(s.density, 0.607267, epsilon = 5e-6);
        let s = solve_multiply(6, 5, KernelSite::C, class("1/2,1/2,0"), &opts).unwrap();
        assert_abs_diff_eq!(s.rho, 1.08335, epsilon = 5e-5);
        assert_abs_diff_eq!(s.density, 0.63431, epsilon = 5e-5);
    }

    #[test]
    fn transition_at_21() {
        let opts = SolverOptions::default();
        let r = solve_multiply(21, 4, KernelSite::B, class("1/2,0,1/2"), &opts);
        assert!(matches!(r, Err(Error::Overlap { .. })), "{r:?}");
    }

    #[test]
    fn vertex_class_must_vanish_at_site() {
        let r = solve_multiply(20, 4, KernelSite::C, class("1/2,0,1/2"), &SolverOptions::default());
        assert!(matches!(r, Err(Error::InadmissibleClass { .. })));
    }

    #[test]
    fn xi_is_twice_rho() {
        let opts = SolverOptions::default();
        for s in [
            solve_simply(7, 3, TranslationClass::zero(), &opts).unwrap(),
            solve_multiply(5, 5, KernelSite::A, class("0,2/5,2/5"), &opts).unwrap(),
        ] {
            assert_abs_diff_eq!(s.xi, 2.0 * s.rho, epsilon = 1e-9);
            assert_abs_diff_eq!(s.density * s.vol_dv, s.vol_ball, epsilon = 1e-9);
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("Simply".parse::<Mode>().unwrap(), Mode::Simply);
        assert!("both".parse::<Mode>().is_err());
    }

    #[test]
    fn empty_range_rejected() {
        #[allow(clippy::reversed_empty_ranges)]
        let r = global_optimum(4, 9..=5, &[], Mode::Simply, &SolverOptions::default());
        assert!(r.is_err());
    }
}
