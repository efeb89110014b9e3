//! Hyperbolic plane in the hyperboloid model.
//!
//! Points live on the upper sheet `x1^2 - x2^2 - x3^2 = 1`; orientation
//! preserving isometries are 3x3 Lorentz matrices acting on column vectors.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minkowski bilinear form with signature (+,-,-), so `mink(p, p) = 1` on the sheet.
pub fn minkowski(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2]
}

fn lorentz_gram() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0))
}

/// A point of the hyperbolic plane, stored in hyperboloid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct H2Point {
    coords: Vector3<f64>,
}

impl H2Point {
    pub const ORIGIN: H2Point = H2Point {
        coords: Vector3::new(1.0, 0.0, 0.0),
    };

    /// Builds a point from hyperboloid coordinates.
    ///
    /// A Minkowski square below `1 - 1e-9` is rejected; anything above is
    /// rescaled onto the sheet. Use [`H2Point::normalize`] for projective input.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = Vector3::new(x1, x2, x3);
        let q = minkowski(&v, &v);
        if !(q >= 1.0 - 1e-9) || x1 <= 0.0 || !q.is_finite() {
            return Err(Error::InvalidPoint { product: q });
        }
        Ok(Self::renormalized(v / q.sqrt()))
    }

    /// Projectively rescales any timelike vector with positive first entry.
    pub fn normalize(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = Vector3::new(x1, x2, x3);
        let q = minkowski(&v, &v);
        if !(q > 0.0) || x1 <= 0.0 {
            return Err(Error::InvalidPoint { product: q });
        }
        Ok(Self::renormalized(v / q.sqrt()))
    }

    /// Polar coordinates about the origin: distance `r`, bearing `alpha`.
    pub fn from_polar(r: f64, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self::renormalized(Vector3::new(r.cosh(), r.sinh() * c, r.sinh() * s))
    }

    /// Recomputes `x1` from the spatial part so the point sits exactly on the sheet.
    pub(crate) fn renormalized(v: Vector3<f64>) -> Self {
        let x1 = (1.0 + v[1] * v[1] + v[2] * v[2]).sqrt();
        Self {
            coords: Vector3::new(x1, v[1], v[2]),
        }
    }

    pub fn x1(&self) -> f64 {
        self.coords[0]
    }
    pub fn x2(&self) -> f64 {
        self.coords[1]
    }
    pub fn x3(&self) -> f64 {
        self.coords[2]
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.coords
    }

    /// Distance from the origin and bearing, inverse of [`H2Point::from_polar`].
    pub fn to_polar(&self) -> (f64, f64) {
        let rho = self.x2().hypot(self.x3());
        (rho.asinh(), self.x3().atan2(self.x2()))
    }

    /// Poincare disk coordinates, handy for plotting.
    pub fn to_disk(&self) -> (f64, f64) {
        let d = 1.0 + self.x1();
        (self.x2() / d, self.x3() / d)
    }

    pub fn minkowski_norm(&self) -> f64 {
        minkowski(&self.coords, &self.coords)
    }
}

impl From<H2Point> for [f64; 3] {
    fn from(p: H2Point) -> Self {
        [p.x1(), p.x2(), p.x3()]
    }
}

impl TryFrom<[f64; 3]> for H2Point {
    type Error = Error;
    /// Keeps coordinates that already lie on the sheet bit for bit, so
    /// serialized points read back unchanged.
    fn try_from(a: [f64; 3]) -> Result<Self> {
        let v = Vector3::new(a[0], a[1], a[2]);
        let q = minkowski(&v, &v);
        if a[0] > 0.0 && (q - 1.0).abs() <= 1e-12 * a[0] * a[0] {
            return Ok(H2Point { coords: v });
        }
        H2Point::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for H2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.9}, {:.9}, {:.9})", self.x1(), self.x2(), self.x3())
    }
}

/// Hyperbolic distance between two points of the plane.
///
/// Uses the chord form `2 asinh(|P - Q|_M / 2)` which stays accurate for
/// nearby points where `acosh` loses half the digits.
pub fn h2_distance(p: &H2Point, q: &H2Point) -> f64 {
    let d = p.coords - q.coords;
    // For points on the sheet -<d,d> = 2(<p,q> - 1) >= 0.
    let chord2 = (-minkowski(&d, &d)).max(0.0);
    let near = 2.0 * (0.5 * chord2.sqrt()).asinh();
    if near < 1.0 {
        near
    } else {
        minkowski(&p.coords, &q.coords).max(1.0).acosh()
    }
}

/// Orientation preserving isometry of the plane as a Lorentz matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H2Isometry {
    m: Matrix3<f64>,
}

impl H2Isometry {
    pub fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
        }
    }

    /// Wraps a matrix after checking Lorentz orthogonality and sheet preservation.
    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        let iso = Self { m };
        let err = iso.lorentz_defect();
        if err > 1e-9 || m[(0, 0)] < 1.0 - 1e-12 || m.determinant() <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "matrix is not an orientation preserving Lorentz map (defect {err:e})"
            )));
        }
        Ok(iso)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Largest entry of `m^T J m - J`.
    pub fn lorentz_defect(&self) -> f64 {
        let j = lorentz_gram();
        (self.m.transpose() * j * self.m - j).amax()
    }

    pub fn apply(&self, p: &H2Point) -> H2Point {
        H2Point::renormalized(self.m * p.coords)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &H2Isometry) -> H2Isometry {
        H2Isometry { m: next.m * self.m }
    }

    pub fn inverse(&self) -> H2Isometry {
        // J m^T J is the inverse of a Lorentz matrix.
        let j = lorentz_gram();
        H2Isometry {
            m: j * self.m.transpose() * j,
        }
    }

    /// Integer power by repeated multiplication; squaring loses more digits
    /// for rotations about far-away centres.
    pub fn pow(&self, n: i64) -> H2Isometry {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = H2Isometry::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    /// Max-entry distance to another isometry.
    pub fn distance_to(&self, other: &H2Isometry) -> f64 {
        (self.m - other.m).amax()
    }
}

/// Counterclockwise rotation by `angle` about the origin.
pub fn rotation_at_origin(angle: f64) -> H2Isometry {
    let (s, c) = angle.sin_cos();
    H2Isometry {
        m: Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
    }
}

/// Pure translation (boost) taking the origin to `k`.
pub fn translate_from_origin(k: &H2Point) -> H2Isometry {
    let (x1, x2, x3) = (k.x1(), k.x2(), k.x3());
    let w = 1.0 + x1;
    H2Isometry {
        m: Matrix3::new(
            x1,
            x2,
            x3,
            x2,
            1.0 + x2 * x2 / w,
            x2 * x3 / w,
            x3,
            x2 * x3 / w,
            1.0 + x3 * x3 / w,
        ),
    }
}

/// Pure translation taking `k` to the origin.
pub fn translate_to_origin(k: &H2Point) -> H2Isometry {
    let back = H2Point::renormalized(Vector3::new(k.x1(), -k.x2(), -k.x3()));
    translate_from_origin(&back)
}

/// Rotation by `angle` about `center`, counterclockwise in the tangent plane.
pub fn rotation_about(center: &H2Point, angle: f64) -> H2Isometry {
    translate_to_origin(center)
        .then(&rotation_at_origin(angle))
        .then(&translate_from_origin(center))
}

/// Angle at `vertex` between the geodesics towards `a` and `b`.
pub fn angle_at(vertex: &H2Point, a: &H2Point, b: &H2Point) -> f64 {
    let v = vertex.coords();
    let tangent = |p: &H2Point| {
        // Component of p orthogonal to v in the Minkowski sense.
        let t = p.coords() - v * minkowski(p.coords(), v);
        let n = (-minkowski(&t, &t)).sqrt();
        t / n
    };
    let (ta, tb) = (tangent(a), tangent(b));
    (-minkowski(&ta, &tb)).clamp(-1.0, 1.0).acos()
}

fn check_signature(p1: u32, p2: u32) -> Result<()> {
    // 1/p1 + 1/p2 < 1/2  <=>  2 (p1 + p2) < p1 p2
    if p1 < 3 || p2 < 3 || 2 * (p1 as u64 + p2 as u64) >= p1 as u64 * p2 as u64 {
        return Err(Error::NonHyperbolic { p1, p2 });
    }
    Ok(())
}

/// Whether `(2, p1, p2)` is a hyperbolic triangle group.
pub fn is_hyperbolic(p1: u32, p2: u32) -> bool {
    check_signature(p1, p2).is_ok()
}

/// Area of the fundamental domain of the rotation group `(2, p1, p2)`,
/// twice the area of the triangle with angles pi/2, pi/p1, pi/p2.
pub fn fundamental_domain_area(p1: u32, p2: u32) -> Result<f64> {
    check_signature(p1, p2)?;
    Ok(2.0 * (PI - PI / 2.0 - PI / p1 as f64 - PI / p2 as f64))
}

/// The triangle A (right angle), B (angle pi/p1), C (angle pi/p2, at the origin).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleGeometry {
    pub p1: u32,
    pub p2: u32,
    pub a: H2Point,
    pub b: H2Point,
    pub c: H2Point,
    pub area_fd: f64,
}

impl TriangleGeometry {
    /// Interior angles at A, B, C measured from tangent vectors.
    pub fn measured_angles(&self) -> [f64; 3] {
        [
            angle_at(&self.a, &self.b, &self.c),
            angle_at(&self.b, &self.a, &self.c),
            angle_at(&self.c, &self.a, &self.b),
        ]
    }

    /// Side lengths |AB|, |BC|, |CA| from the closed forms.
    pub fn side_lengths(&self) -> [f64; 3] {
        let (a1, a2) = (PI / self.p1 as f64, PI / self.p2 as f64);
        [
            (a2.cos() / a1.sin()).acosh(),
            (1.0 / (a1.tan() * a2.tan())).acosh(),
            (a1.cos() / a2.sin()).acosh(),
        ]
    }
}

pub fn triangle_vertices(p1: u32, p2: u32) -> Result<TriangleGeometry> {
    check_signature(p1, p2)?;
    let (a1, a2) = (PI / p1 as f64, PI / p2 as f64);
    let s = (1.0 - a2.sin().powi(2) / a1.cos().powi(2)).sqrt();
    let ha = a1.cos() / a2.sin();
    let a = H2Point::normalize(ha, 0.0, -ha * s)?;
    let (t1, t2) = (a1.tan(), a2.tan());
    let b = H2Point::normalize(1.0 / (t1 * t2), s / t1, -s / (t1 * t2))?;
    Ok(TriangleGeometry {
        p1,
        p2,
        a,
        b,
        c: H2Point::ORIGIN,
        area_fd: fundamental_domain_area(p1, p2)?,
    })
}
