//! Admissible fibre translation parts of screw motion groups over `(2, p1, p2)`.
//!
//! A class stores `r_i = tau_i / xi` as exact rationals in `(-1/2, 1/2]`. The
//! generators must satisfy `2 r0, p1 r1, p2 r2, p2 (r0 + r1)` integral and the
//! relation `r2 = r0 + r1 (mod 1)` coming from `g2 = g0 g1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic_plane::is_hyperbolic;

/// Reduces a rational modulo 1 into `(-1/2, 1/2]`.
pub fn reduce_mod_one(r: Rational64) -> Rational64 {
    let half = Rational64::new(1, 2);
    r - (r - half).ceil()
}

fn is_integer(r: Rational64) -> bool {
    r.is_integer()
}

/// Fibre translation parts `(r0, r1, r2)` of the three generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TranslationClass {
    r: [Rational64; 3],
}

impl TranslationClass {
    pub fn new(r0: Rational64, r1: Rational64, r2: Rational64) -> Self {
        Self {
            r: [reduce_mod_one(r0), reduce_mod_one(r1), reduce_mod_one(r2)],
        }
    }

    pub fn zero() -> Self {
        Self::new(0.into(), 0.into(), 0.into())
    }

    /// Builds a class from `(numerator, denominator)` pairs.
    pub fn from_fractions(f: [(i64, i64); 3]) -> Self {
        Self::new(
            Rational64::new(f[0].0, f[0].1),
            Rational64::new(f[1].0, f[1].1),
            Rational64::new(f[2].0, f[2].1),
        )
    }

    pub fn parts(&self) -> [Rational64; 3] {
        self.r
    }

    pub fn part(&self, i: usize) -> Rational64 {
        self.r[i]
    }

    pub fn as_f64(&self) -> [f64; 3] {
        self.r.map(|x| *x.numer() as f64 / *x.denom() as f64)
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.r[0], -self.r[1], -self.r[2])
    }

    /// Representative of `{c, -c}`: the lexicographically larger triple.
    pub fn canonical(&self) -> Self {
        (*self).max(self.negated())
    }

    /// The four displayed integrality conditions.
    pub fn satisfies_congruences(&self, p1: u32, p2: u32) -> bool {
        let [r0, r1, r2] = self.r;
        let (p1, p2) = (Rational64::from(p1 as i64), Rational64::from(p2 as i64));
        is_integer(r0 * 2)
            && is_integer(r1 * p1)
            && is_integer(r2 * p2)
            && is_integer((r1 + r0) * p2)
    }

    /// Congruences plus the composition relation `r2 = r0 + r1 (mod 1)`.
    pub fn is_admissible(&self, p1: u32, p2: u32) -> bool {
        let [r0, r1, r2] = self.r;
        self.satisfies_congruences(p1, p2) && reduce_mod_one(r0 + r1) == r2
    }

    pub fn require_admissible(&self, p1: u32, p2: u32) -> Result<()> {
        if self.is_admissible(p1, p2) {
            Ok(())
        } else {
            Err(Error::InadmissibleClass {
                p1,
                p2,
                class: self.to_string(),
                detail: String::new(),
            })
        }
    }
}

impl fmt::Display for TranslationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.r;
        write!(f, "({a},{b},{c})")
    }
}

impl From<TranslationClass> for String {
    fn from(c: TranslationClass) -> Self {
        c.to_string()
    }
}

impl TryFrom<String> for TranslationClass {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for TranslationClass {
    type Err = Error;

    /// Accepts `0,1/2,1/2`, `(0, 1/2, -1/2)` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse translation class {s:?}"));
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut r = [Rational64::from(0); 3];
        for (slot, text) in r.iter_mut().zip(parts) {
            *slot = match text.split_once('/') {
                Some((n, d)) => {
                    let n: i64 = n.trim().parse().map_err(|_| bad())?;
                    let d: i64 = d.trim().parse().map_err(|_| bad())?;
                    if d == 0 {
                        return Err(bad());
                    }
                    Rational64::new(n, d)
                }
                None => Rational64::from(text.parse::<i64>().map_err(|_| bad())?),
            };
        }
        Ok(Self::new(r[0], r[1], r[2]))
    }
}

/// Where the kernel point sits relative to the triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelSite {
    #[serde(rename = "interior")]
    Interior,
    A,
    B,
    C,
}

impl KernelSite {
    pub const VERTICES: [KernelSite; 3] = [KernelSite::A, KernelSite::B, KernelSite::C];

    /// Order of the rotation group fixing a kernel at this site.
    pub fn stabilizer_order(&self, p1: u32, p2: u32) -> u32 {
        match self {
            KernelSite::Interior => 1,
            KernelSite::A => 2,
            KernelSite::B => p1,
            KernelSite::C => p2,
        }
    }

    /// Index of the generator whose rotation centre is this vertex.
    pub fn generator_index(&self) -> Option<usize> {
        match self {
            KernelSite::Interior => None,
            KernelSite::A => Some(0),
            KernelSite::B => Some(1),
            KernelSite::C => Some(2),
        }
    }
}

impl fmt::Display for KernelSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelSite::Interior => "interior",
            KernelSite::A => "A",
            KernelSite::B => "B",
            KernelSite::C => "C",
        })
    }
}

impl FromStr for KernelSite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "interior" | "i" => Ok(KernelSite::Interior),
            "a" => Ok(KernelSite::A),
            "b" => Ok(KernelSite::B),
            "c" => Ok(KernelSite::C),
            _ => Err(Error::InvalidInput(format!("unknown kernel site {s:?}"))),
        }
    }
}

fn check(p1: u32, p2: u32) -> Result<()> {
    if is_hyperbolic(p1, p2) {
        Ok(())
    } else {
        Err(Error::NonHyperbolic { p1, p2 })
    }
}

/// Closed-form list of all admissible classes (both signs of each).
///
/// `r0 = 0`: `r1 = r2 = m / gcd(p1, p2)`.
/// `r0 = 1/2`: `r1 = k / h`, `r2 = r1 + 1/2` with `h = gcd(p1, 2 p2)` and
/// `(2 p2 / h) k = p2 (mod 2)`.
pub fn enumerate_simply(p1: u32, p2: u32) -> Result<BTreeSet<TranslationClass>> {
    check(p1, p2)?;
    let (p1, p2) = (p1 as i64, p2 as i64);
    let half = Rational64::new(1, 2);
    let mut out = BTreeSet::new();
    let g = p1.gcd(&p2);
    for m in 0..g {
        let r = Rational64::new(m, g);
        out.insert(TranslationClass::new(0.into(), r, r));
    }
    let h = p1.gcd(&(2 * p2));
    for k in 0..h {
        if ((2 * p2 / h) * k - p2).rem_euclid(2) == 0 {
            let r = Rational64::new(k, h);
            out.insert(TranslationClass::new(half, r, r + half));
        }
    }
    Ok(out)
}

/// Classes for a kernel fixed by the rotation at `site` (its translation part vanishes).
pub fn enumerate_multiply(p1: u32, p2: u32, site: KernelSite) -> Result<BTreeSet<TranslationClass>> {
    let all = enumerate_simply(p1, p2)?;
    Ok(match site.generator_index() {
        None => all,
        Some(i) => all.into_iter().filter(|c| c.part(i) == 0.into()).collect(),
    })
}

/// Exhaustive search over `r_i in (1/N) Z / Z` with `N = lcm(2, p1, p2)`.
pub fn brute_force_congruences(p1: u32, p2: u32) -> Result<BTreeSet<TranslationClass>> {
    check(p1, p2)?;
    let n = 2i64.lcm(&(p1 as i64)).lcm(&(p2 as i64));
    let grid = |mult: i64| -> Vec<Rational64> {
        (0..n)
            .map(|j| Rational64::new(j, n))
            .filter(|r| (r * mult).is_integer())
            .collect()
    };
    let (c0, c1, c2) = (grid(2), grid(p1 as i64), grid(p2 as i64));
    let mut out = BTreeSet::new();
    for &a in &c0 {
        for &b in &c1 {
            for &c in &c2 {
                let class = TranslationClass::new(a, b, c);
                if class.is_admissible(p1, p2) {
                    out.insert(class);
                }
            }
        }
    }
    Ok(out)
}

/// Collapses sign-equivalent classes to their canonical representatives.
pub fn dedupe_equivariant<'a, I>(classes: I) -> BTreeSet<TranslationClass>
where
    I: IntoIterator<Item = &'a TranslationClass>,
{
    classes.into_iter().map(TranslationClass::canonical).collect()
}
