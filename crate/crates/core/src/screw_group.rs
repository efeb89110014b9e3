//! Screw motion groups over the rotation triangle group `(2, p1, p2)`.
//!
//! Elements act on the right: `P^(ab) = (P^a)^b`, so [`compose`]`(a, b)` is
//! "apply `a`, then `b`". Generators: `g0` is the half-turn about A, `g2` the
//! rotation by `2 pi / p2` about C, and `g1 = g0 g2` rotates about B.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::frobenius::{reduce_mod_one, TranslationClass};
use crate::h2xr_geometry::{h2xr_distance, H2xRPoint};
use crate::hyperbolic_plane::{
    h2_distance, rotation_about, translate_from_origin, triangle_vertices, H2Isometry, H2Point, TriangleGeometry,
};

/// Orientation preserving screw motion: a plane rotation times a fibre shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScrewElement {
    pub linear: H2Isometry,
    pub tau: f64,
}

impl ScrewElement {
    pub fn new(linear: H2Isometry, tau: f64) -> Self {
        Self { linear, tau }
    }

    pub fn identity() -> Self {
        Self::new(H2Isometry::identity(), 0.0)
    }

    pub fn fibre_shift(tau: f64) -> Self {
        Self::new(H2Isometry::identity(), tau)
    }

    pub fn apply(&self, p: &H2xRPoint) -> H2xRPoint {
        H2xRPoint::new(self.linear.apply(&p.base), p.t + self.tau)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.linear.inverse(), -self.tau)
    }

    pub fn pow(&self, n: i64) -> Self {
        Self::new(self.linear.pow(n), self.tau * n as f64)
    }
}

/// `a` followed by `b`.
pub fn compose(a: &ScrewElement, b: &ScrewElement) -> ScrewElement {
    ScrewElement::new(a.linear.then(&b.linear), a.tau + b.tau)
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub const ALL: [Letter; 6] = [
        Letter { generator: 0, inverse: false },
        Letter { generator: 0, inverse: true },
        Letter { generator: 1, inverse: false },
        Letter { generator: 1, inverse: true },
        Letter { generator: 2, inverse: false },
        Letter { generator: 2, inverse: true },
    ];
}

/// Group word: generator letters applied left to right, then a lattice shift.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<Letter>,
    pub lattice: i64,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty() && self.lattice == 0
    }

    fn pushed(&self, l: Letter) -> Word {
        let mut letters = self.letters.clone();
        letters.push(l);
        Word { letters, lattice: self.lattice }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        let mut parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| format!("g{}{}", l.generator, if l.inverse { "^-1" } else { "" }))
            .collect();
        if self.lattice != 0 {
            parts.push(format!("L^{}", self.lattice));
        }
        f.write_str(&parts.join(" "))
    }
}

/// Orbit point reachable by a word, with its exact accumulated fibre fraction.
#[derive(Debug, Clone)]
pub struct OrbitState {
    pub base: H2Point,
    /// Image of a fixed generic point near the kernel, used to tell trivial
    /// relators from genuine stabilizer elements.
    probe: H2Point,
    /// Sum of the letters' translation parts, in units of the lattice parameter.
    pub fibre: Rational64,
    pub word: Word,
}

/// A neighbor of the kernel in its orbit.
#[derive(Debug, Clone)]
pub struct Neighbor {
    pub point: H2xRPoint,
    pub word: Word,
    pub distance: f64,
    pub base_distance: f64,
    /// Fibre offset from the kernel in units of the lattice parameter.
    pub fibre_offset: f64,
}

#[derive(Debug, Clone)]
pub struct OrbitNeighbors {
    /// Sorted by distance, then by word length.
    pub neighbors: Vec<Neighbor>,
    /// Non-trivial words found to fix the kernel.
    pub stabilizer_words: Vec<Word>,
    pub stabilizer_order: u32,
}

/// The screw group for one signature, translation class and lattice parameter.
#[derive(Debug, Clone)]
pub struct GroupContext {
    pub p1: u32,
    pub p2: u32,
    pub triangle: TriangleGeometry,
    pub class: TranslationClass,
    pub xi: f64,
    generators: [ScrewElement; 3],
    linear_letters: [H2Isometry; 6],
}

/// Base points closer than this are the same orbit point.
const COINCIDENT: f64 = 1e-6;

fn quantize(p: &H2Point) -> (i64, i64) {
    // Relative grid so far-out points are keyed at the precision they carry.
    let scale = 1e-8 * p.x1().log2().ceil().exp2();
    ((p.x2() / scale).round() as i64, (p.x3() / scale).round() as i64)
}

impl GroupContext {
    pub fn new(p1: u32, p2: u32, class: TranslationClass, xi: f64) -> Result<Self> {
        let triangle = triangle_vertices(p1, p2)?;
        class.require_admissible(p1, p2)?;
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(crate::Error::InvalidInput(format!("lattice parameter {xi} must be positive")));
        }
        let g0 = rotation_about(&triangle.a, PI);
        let g2 = rotation_about(&triangle.c, 2.0 * PI / p2 as f64);
        let g1 = g0.then(&g2);
        let r = class.as_f64();
        let generators = [
            ScrewElement::new(g0, r[0] * xi),
            ScrewElement::new(g1, r[1] * xi),
            ScrewElement::new(g2, r[2] * xi),
        ];
        let linear_letters = Letter::ALL.map(|l| {
            let g = generators[l.generator as usize].linear;
            if l.inverse {
                g.inverse()
            } else {
                g
            }
        });
        Ok(Self {
            p1,
            p2,
            triangle,
            class,
            xi,
            generators,
            linear_letters,
        })
    }

    pub fn generator(&self, i: usize) -> &ScrewElement {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[ScrewElement; 3] {
        &self.generators
    }

    /// Rotation centre of generator `i`.
    pub fn center(&self, i: usize) -> &H2Point {
        match i {
            0 => &self.triangle.a,
            1 => &self.triangle.b,
            _ => &self.triangle.c,
        }
    }

    pub fn order(&self, i: usize) -> u32 {
        [2, self.p1, self.p2][i]
    }

    /// Element represented by a word.
    pub fn element(&self, w: &Word) -> ScrewElement {
        let mut acc = ScrewElement::identity();
        for l in &w.letters {
            let g = &self.generators[l.generator as usize];
            acc = compose(&acc, &if l.inverse { g.inverse() } else { *g });
        }
        compose(&acc, &ScrewElement::fibre_shift(w.lattice as f64 * self.xi))
    }

    /// For each generator: how far `g_i^{order}` is from a pure lattice translation.
    ///
    /// Returns `(linear defect, fibre remainder in units of xi)` per generator.
    /// The linear defect is the max-entry distance to the identity divided by
    /// `x1^2` of the rotation centre, the conditioning of the boost that
    /// conjugates the rotation to the origin.
    pub fn relation_defects(&self) -> [(f64, f64); 3] {
        std::array::from_fn(|i| {
            let e = self.generators[i].pow(self.order(i) as i64);
            let k = e.tau / self.xi;
            let scale = self.center(i).x1().powi(2);
            (e.linear.distance_to(&H2Isometry::identity()) / scale, (k - k.round()).abs())
        })
    }

    /// Order of the subgroup fixing `k`: `p_i` at a rotation centre whose
    /// translation part vanishes, 1 otherwise.
    pub fn stabilizer_order(&self, k: &H2Point) -> u32 {
        (0..3)
            .find(|&i| h2_distance(k, self.center(i)) < COINCIDENT && self.class.part(i) == 0.into())
            .map_or(1, |i| self.order(i))
    }

    /// Breadth-first orbit of the base point `k` under words of length up to
    /// `word_len`, expanding only states within `base_cap` of `k`.
    ///
    /// Returns the distinct orbit states (identity included) and the words
    /// found to fix `k`.
    pub fn scan_orbit(&self, k: &H2Point, word_len: usize, base_cap: f64) -> (Vec<OrbitState>, Vec<Word>) {
        let zero = Rational64::from(0);
        let r = self.class.parts();
        let mut seen: HashMap<((i64, i64), Rational64), ()> = HashMap::new();
        seen.insert((quantize(k), zero), ());
        let probe = translate_from_origin(k).apply(&H2Point::from_polar(0.25, 0.7));
        let mut states = vec![OrbitState {
            base: *k,
            probe,
            fibre: zero,
            word: Word::default(),
        }];
        let mut stabilizers = Vec::new();
        let mut frontier = vec![0usize];
        for _ in 0..word_len {
            let mut next = Vec::new();
            for &idx in &frontier {
                if h2_distance(&states[idx].base, k) > base_cap {
                    continue;
                }
                let s = states[idx].clone();
                for (li, letter) in Letter::ALL.iter().enumerate() {
                    let base = self.linear_letters[li].apply(&s.base);
                    let moved = self.linear_letters[li].apply(&s.probe);
                    let part = r[letter.generator as usize];
                    let fibre = if letter.inverse { s.fibre - part } else { s.fibre + part };
                    let reduced = reduce_mod_one(fibre);
                    if reduced == zero && h2_distance(&base, k) < COINCIDENT {
                        let w = s.word.pushed(*letter);
                        let trivial = h2_distance(&moved, &probe) < COINCIDENT;
                        if !trivial && stabilizers.len() < 16 && !stabilizers.contains(&w) {
                            stabilizers.push(w);
                        }
                        continue;
                    }
                    let key = (quantize(&base), reduced);
                    if seen.insert(key, ()).is_some() {
                        continue;
                    }
                    let word = s.word.pushed(*letter);
                    states.push(OrbitState {
                        base,
                        probe: moved,
                        fibre,
                        word,
                    });
                    next.push(states.len() - 1);
                }
            }
            frontier = next;
        }
        (states, stabilizers)
    }

    /// All orbit images of `k` (words of length up to `word_len`, any lattice
    /// shift) within `radius_cap`, excluding `k` itself.
    pub fn orbit_neighbors(&self, k: &H2xRPoint, word_len: usize, radius_cap: f64) -> OrbitNeighbors {
        let (states, stabilizer_words) = self.scan_orbit(&k.base, word_len, radius_cap);
        let mut neighbors = Vec::new();
        let reach = (radius_cap / self.xi).ceil() as i64 + 1;
        for s in &states {
            let reduced = reduce_mod_one(s.fibre);
            let base_distance = h2_distance(&s.base, &k.base);
            if base_distance > radius_cap {
                continue;
            }
            let frac = *reduced.numer() as f64 / *reduced.denom() as f64;
            for m in -reach..=reach {
                let offset = frac + m as f64;
                if s.word.letters.is_empty() && m == 0 {
                    continue;
                }
                let distance = base_distance.hypot(offset * self.xi);
                if distance > radius_cap {
                    continue;
                }
                let shift = reduced + Rational64::from(m) - s.fibre;
                debug_assert!(shift.is_integer());
                let point = H2xRPoint::new(s.base, k.t + offset * self.xi);
                neighbors.push(Neighbor {
                    point,
                    word: Word {
                        letters: s.word.letters.clone(),
                        lattice: shift.to_integer(),
                    },
                    distance,
                    base_distance,
                    fibre_offset: offset,
                });
            }
        }
        neighbors.sort_by(|a, b| {
            a.distance
                .total_cmp(&b.distance)
                .then(a.word.len().cmp(&b.word.len()))
        });
        OrbitNeighbors {
            neighbors,
            stabilizer_words,
            stabilizer_order: self.stabilizer_order(&k.base),
        }
    }

    /// Image of `k` under generator `i` through the matrix path.
    pub fn generator_image(&self, k: &H2xRPoint, i: usize) -> H2xRPoint {
        self.generators[i].apply(k)
    }
}

/// Distance between a point and its image under `g`.
pub fn displacement(g: &ScrewElement, p: &H2xRPoint) -> f64 {
    h2xr_distance(p, &g.apply(p))
}

fn csgn(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        log::warn!("csgn argument {x:e} is numerically zero");
    }
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Closed-form projective image `(1, x, y, z)` of the kernel
/// `(cosh r, sinh r cos alpha, sinh r sin alpha)` at `t = 0` under generator `i`
/// with translation part `r_i xi`.
///
/// The y-coordinate of the `g1` image uses the corrected expression
/// `(2/S)(c s cosh r sin 2a + sinh r (sin alpha (c - S/2) sin 2a - (S/2) cos alpha cos 2a))`
/// times the same csgn factor, with `S = sin^2(pi/p2)`, `c = cos^2(pi/p1)`,
/// `2a = 2 pi / p2`.
pub fn appendix_image(r: f64, alpha: f64, i: usize, p1: u32, p2: u32, r_i: Rational64, xi: f64) -> [f64; 4] {
    let ri = *r_i.numer() as f64 / *r_i.denom() as f64;
    let e = (xi * ri).exp();
    let (a1, a2) = (PI / p1 as f64, PI / p2 as f64);
    let s2 = a2.sin().powi(2);
    let c1 = a1.cos().powi(2);
    let root = (1.0 - s2 / c1).sqrt();
    let (ch, sh) = (r.cosh(), r.sinh());
    let (sa, ca) = alpha.sin_cos();
    let fold_x = (2.0 * c1 * (ch + sh * sa * root) - s2 * ch).abs() / s2;
    match i {
        0 => [
            1.0,
            e * fold_x,
            -e * sh * ca,
            -2.0 * e / s2 * (c1 * ch * root + sh * sa * (c1 - 0.5 * s2)),
        ],
        1 => {
            let th = 2.0 * a2;
            let sign = csgn(2.0 * sh * sa * c1 * root - ch * (s2 - 2.0 * c1));
            let y = 2.0 / s2
                * (c1 * root * ch * th.sin() + sh * (sa * (c1 - 0.5 * s2) * th.sin() - 0.5 * s2 * ca * th.cos()))
                * sign;
            let z = -2.0 / s2
                * (ch * th.cos() * a1.cos() * (a2.cos().powi(2) - a1.sin().powi(2)).sqrt()
                    - sh * (a2.cos().powi(3) * (a2 - alpha).sin()
                        + a2.cos().powi(2) * sa * (1.5 - 2.0 * c1)
                        - 0.5 * ca * th.sin()
                        + 0.5 * sa * (2.0 * a1).cos()))
                * sign;
            [1.0, e * fold_x, e * y, e * z]
        }
        _ => {
            let b = alpha + 2.0 * a2;
            [1.0, e * ch, e * sh * b.cos(), e * sh * b.sin()]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic_plane::rotation_at_origin;
    use approx::assert_abs_diff_eq;

    fn ctx(p1: u32, p2: u32, class: &str, xi: f64) -> GroupContext {
        GroupContext::new(p1, p2, class.parse().unwrap(), xi).unwrap()
    }

    #[test]
    fn compose_identity_and_half_turn() {
        let g = ctx(6, 4, "0,1/2,1/2", 0.8);
        let x = *g.generator(1);
        let y = compose(&x, &ScrewElement::identity());
        assert!(y.linear.distance_to(&x.linear) < 1e-15);
        assert_eq!(y.tau, x.tau);
        let h = ctx(6, 4, "1/2,0,1/2", 0.8);
        let sq = compose(h.generator(0), h.generator(0));
        assert!(sq.linear.distance_to(&H2Isometry::identity()) < 1e-12);
        assert_abs_diff_eq!(sq.tau, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn g0_then_g1_is_g2() {
        let g = ctx(6, 4, "1/2,1/2,0", 1.1);
        let c = compose(g.generator(0), g.generator(1));
        let rot = rotation_about(&g.triangle.c, 2.0 * PI / 4.0);
        assert!(c.linear.distance_to(&rot) < 1e-12);
        let d = c.tau - g.generator(2).tau;
        assert_abs_diff_eq!(d / 1.1, (d / 1.1).round(), epsilon = 1e-12);
    }

    #[test]
    fn generators_fix_their_centres() {
        let g = ctx(20, 4, "1/2,0,1/2", 5.0);
        for i in 0..3 {
            let c = g.center(i);
            assert!(h2_distance(&g.generator(i).linear.apply(c), c) < 1e-9);
        }
        assert!(h2_distance(&g.generator(2).linear.apply(&H2Point::ORIGIN), &H2Point::ORIGIN) < 1e-15);
    }

    #[test]
    fn relations_hold_modulo_lattice() {
        for (p1, p2, c) in [(6, 4, "0,1/2,1/2"), (9, 3, "0,1/3,1/3"), (8, 4, "1/2,1/4,-1/4"), (62, 6, "1/2,0,1/2")] {
            let g = ctx(p1, p2, c, 0.9);
            for (lin, frac) in g.relation_defects() {
                assert!(lin < 1e-9, "{p1} {p2} {c}: {lin}");
                assert!(frac < 1e-9);
            }
        }
    }

    #[test]
    fn stabilizer_at_b_is_reported() {
        let g = ctx(7, 3, "0,0,0", 1.0);
        let k = H2xRPoint::new(g.triangle.b, 0.0);
        let n = g.orbit_neighbors(&k, 2, 3.0);
        assert_eq!(n.stabilizer_order, 7);
        assert!(n.stabilizer_words.iter().any(|w| w.letters == vec![Letter { generator: 1, inverse: false }]));
        assert!(n.neighbors.iter().all(|nb| nb.distance > 1e-6));
    }

    #[test]
    fn single_letter_orbit_of_interior_point() {
        let g = ctx(6, 4, "0,0,0", 0.7);
        let k = H2xRPoint::from_cylindrical(0.0, 0.3, -0.6);
        let n = g.orbit_neighbors(&k, 1, 10.0);
        let mut expected: Vec<H2xRPoint> = Vec::new();
        for l in Letter::ALL {
            let e = g.element(&Word { letters: vec![l], lattice: 0 });
            expected.push(e.apply(&k));
        }
        for e in &expected {
            assert!(n.neighbors.iter().any(|nb| h2xr_distance(&nb.point, e) < 1e-9));
        }
        // Pure lattice images sit straight above and below the kernel.
        assert!(n.neighbors.iter().any(|nb| nb.word.letters.is_empty() && nb.word.lattice == 1));
        let base_points = n.neighbors.iter().filter(|nb| nb.base_distance > 1e-9).map(|nb| quantize(&nb.point.base));
        let distinct: std::collections::HashSet<_> = base_points.collect();
        // g0 and its inverse share the half-turn image.
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn neighbor_words_reproduce_points() {
        let g = ctx(6, 4, "0,1/2,1/2", 0.814141);
        let k = H2xRPoint::from_cylindrical(0.0, 0.489201, -0.938184);
        let n = g.orbit_neighbors(&k, 3, 2.0);
        for nb in &n.neighbors {
            let p = g.element(&nb.word).apply(&k);
            assert!(h2xr_distance(&p, &nb.point) < 1e-9, "{}", nb.word);
        }
    }

    #[test]
    fn appendix_matches_matrices_on_worked_case() {
        let (r, alpha, xi) = (0.489201, -0.938184, 0.814141);
        let class: TranslationClass = "0,1/2,1/2".parse().unwrap();
        let g = GroupContext::new(6, 4, class, xi).unwrap();
        let k = H2xRPoint::from_cylindrical(0.0, r, alpha);
        for i in 0..3 {
            let closed = appendix_image(r, alpha, i, 6, 4, class.part(i), xi);
            let matrix = g.generator_image(&k, i).projective();
            for j in 0..4 {
                assert_abs_diff_eq!(closed[j], matrix[j], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn appendix_fixes_a() {
        let t = triangle_vertices(6, 4).unwrap();
        let (r, alpha) = t.a.to_polar();
        let img = appendix_image(r, alpha, 0, 6, 4, 0.into(), 0.5);
        let back = H2xRPoint::from_projective(img).unwrap();
        assert!(h2xr_distance(&back, &H2xRPoint::new(t.a, 0.0)) < 1e-12);
    }

    #[test]
    fn word_display() {
        let w = Word {
            letters: vec![Letter { generator: 1, inverse: false }, Letter { generator: 0, inverse: true }],
            lattice: -1,
        };
        assert_eq!(w.to_string(), "g1 g0^-1 L^-1");
        assert_eq!(Word::default().to_string(), "e");
    }

    #[test]
    fn displacement_of_rotation_at_origin() {
        let g = ScrewElement::new(rotation_at_origin(PI), 0.0);
        let p = H2xRPoint::from_cylindrical(0.0, 0.5, 0.0);
        assert_abs_diff_eq!(displacement(&g, &p), 1.0, epsilon = 1e-12);
    }
}
