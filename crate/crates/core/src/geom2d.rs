//! Planar points, the order-m rotation group, and circular sectors.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x1: 0.0, x2: 0.0 };

    /// Unchecked constructor for hot loops.
    #[inline]
    pub const fn new(x1: f64, x2: f64) -> Self {
        Point2 { x1, x2 }
    }

    /// Constructor that rejects NaN and infinite components.
    pub fn try_new(x1: f64, x2: f64) -> Result<Self> {
        if x1.is_finite() && x2.is_finite() {
            Ok(Point2 { x1, x2 })
        } else {
            Err(Error::Domain(format!("non-finite point ({x1}, {x2})")))
        }
    }

    #[inline]
    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point2::new(r * c, r * s)
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2
    }

    /// z-component of the cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x1 * o.x2 - self.x2 * o.x1
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    /// Counterclockwise quarter turn, (x1, x2) -> (-x2, x1).
    #[inline]
    pub fn perp(self) -> Self {
        Point2::new(-self.x2, self.x1)
    }

    /// Polar angle in [0, 2π).
    #[inline]
    pub fn angle(self) -> f64 {
        normalize_angle(self.x2.atan2(self.x1))
    }

    #[inline]
    pub fn rotated(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x1 - s * self.x2, s * self.x1 + c * self.x2)
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    /// Component i, with i = 1 or 2.
    pub fn component(self, i: usize) -> f64 {
        if i == 1 {
            self.x1
        } else {
            self.x2
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Point2) {
        self.x1 += o.x1;
        self.x2 += o.x2;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x1, -self.x2)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x1 * s, self.x2 * s)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    #[inline]
    fn mul(self, p: Point2) -> Point2 {
        p * self
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn div(self, s: f64) -> Point2 {
        Point2::new(self.x1 / s, self.x2 / s)
    }
}

/// Symmetric 2x2 matrix, used for Hessians and quadratic forms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2 {
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

impl Sym2 {
    pub const fn new(h11: f64, h12: f64, h22: f64) -> Self {
        Sym2 { h11, h12, h22 }
    }

    pub fn trace(&self) -> f64 {
        self.h11 + self.h22
    }

    /// Entry (i, j), indices 1 or 2.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (1, 1) => self.h11,
            (2, 2) => self.h22,
            _ => self.h12,
        }
    }

    pub fn scale(&self, s: f64) -> Sym2 {
        Sym2::new(self.h11 * s, self.h12 * s, self.h22 * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.h11.abs().max(self.h12.abs()).max(self.h22.abs())
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.h11 * p.x1 + self.h12 * p.x2,
            self.h12 * p.x1 + self.h22 * p.x2,
        )
    }
}

impl Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2::new(self.h11 + o.h11, self.h12 + o.h12, self.h22 + o.h22)
    }
}

impl Sub for Sym2 {
    type Output = Sym2;
    fn sub(self, o: Sym2) -> Sym2 {
        Sym2::new(self.h11 - o.h11, self.h12 - o.h12, self.h22 - o.h22)
    }
}

/// Wraps an angle into [0, 2π).
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Signed angular difference a - b wrapped into (-π, π].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// The cyclic group generated by the counterclockwise rotation by 2π/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: u32,
    cos: f64,
    sin: f64,
}

impl Rotation {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("rotation order must be at least 1".into()));
        }
        let (sin, cos) = (TAU / m as f64).sin_cos();
        Ok(Rotation { m, cos, sin })
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn angle(&self) -> f64 {
        TAU / self.m as f64
    }

    /// Applies O^k. Negative powers rotate clockwise. The power is reduced
    /// mod m and evaluated from the exact angle, so O^m is the identity up
    /// to rounding of sin/cos.
    pub fn pow(&self, p: Point2, k: i64) -> Point2 {
        let k = k.rem_euclid(self.m as i64);
        match k {
            0 => p,
            1 => Point2::new(self.cos * p.x1 - self.sin * p.x2, self.sin * p.x1 + self.cos * p.x2),
            _ => p.rotated(self.angle() * k as f64),
        }
    }
}

/// O^k p for the order-m rotation `rot`.
pub fn rotate(p: Point2, k: i64, rot: &Rotation) -> Point2 {
    rot.pow(p, k)
}

/// Σ_{i<m} O^i y (O^i y · x) for any m ≥ 1.
pub fn rotation_sum(x: Point2, y: Point2, m: u32) -> Result<Point2> {
    let rot = Rotation::new(m)?;
    let mut acc = Point2::ZERO;
    for i in 0..m {
        let z = rot.pow(y, i as i64);
        acc += z * z.dot(x);
    }
    Ok(acc)
}

/// |Σ_{i<m} O^i y (O^i y · x) − (m/2) x |y|²|. Defined for m ≥ 3 only;
/// the identity fails for m = 2.
pub fn rotation_identity_residual(x: Point2, y: Point2, m: u32) -> Result<f64> {
    if m < 3 {
        return Err(Error::Domain(format!("rotation identity needs m >= 3, got {m}")));
    }
    let lhs = rotation_sum(x, y, m)?;
    let rhs = x * (0.5 * m as f64 * y.norm_sq());
    Ok((lhs - rhs).norm())
}

/// Unit-radius circular sector with half-angle `alpha` around direction `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SectorSpec")]
pub struct Sector {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct SectorSpec {
    alpha: f64,
    beta: f64,
}

impl TryFrom<SectorSpec> for Sector {
    type Error = Error;
    fn try_from(s: SectorSpec) -> Result<Self> {
        Sector::new(s.alpha, s.beta)
    }
}

impl Sector {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Domain("sector angles must be finite".into()));
        }
        if !(alpha > 0.0 && alpha <= PI) {
            return Err(Error::Domain(format!("half-angle {alpha} outside (0, pi]")));
        }
        Ok(Sector { alpha, beta: normalize_angle(beta) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Start and end angle of the arc, counterclockwise, end > start.
    pub fn angular_range(&self) -> (f64, f64) {
        (self.beta - self.alpha, self.beta + self.alpha)
    }

    pub fn rotated(&self, theta: f64) -> Sector {
        Sector { alpha: self.alpha, beta: normalize_angle(self.beta + theta) }
    }

    pub fn is_full_disc(&self) -> bool {
        self.alpha >= PI
    }

    pub fn contains(&self, p: Point2) -> bool {
        sector_contains(self, p)
    }
}

/// Closed membership: |p| ≤ 1 and the angle of p within `alpha` of `beta`.
pub fn sector_contains(s: &Sector, p: Point2) -> bool {
    let r2 = p.norm_sq();
    if r2 > 1.0 {
        return false;
    }
    if r2 == 0.0 || s.is_full_disc() {
        return true;
    }
    angle_diff(p.x2.atan2(p.x1), s.beta).abs() <= s.alpha
}

const OVERLAP_TOL: f64 = 1e-12;

/// Finite union of sectors with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SectorUnionSpec")]
pub struct SectorUnion {
    sectors: Vec<Sector>,
}

#[derive(Deserialize)]
struct SectorUnionSpec {
    sectors: Vec<Sector>,
}

impl TryFrom<SectorUnionSpec> for SectorUnion {
    type Error = Error;
    fn try_from(s: SectorUnionSpec) -> Result<Self> {
        SectorUnion::new(s.sectors)
    }
}

impl SectorUnion {
    pub fn new(sectors: Vec<Sector>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::Domain("sector union needs at least one sector".into()));
        }
        for i in 0..sectors.len() {
            for j in i + 1..sectors.len() {
                let (a, b) = (&sectors[i], &sectors[j]);
                let d = angle_diff(a.beta, b.beta).abs();
                if d < a.alpha + b.alpha - OVERLAP_TOL {
                    return Err(Error::Overlap { first: i, second: j });
                }
            }
        }
        Ok(SectorUnion { sectors })
    }

    pub fn single(s: Sector) -> Self {
        SectorUnion { sectors: vec![s] }
    }

    /// `count` copies of S^alpha(beta0 + 2πk/count).
    pub fn symmetric(alpha: f64, beta0: f64, count: u32) -> Result<Self> {
        let sectors = (0..count)
            .map(|k| Sector::new(alpha, beta0 + TAU * k as f64 / count as f64))
            .collect::<Result<Vec<_>>>()?;
        SectorUnion::new(sectors)
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.sectors.iter().any(|s| s.contains(p))
    }

    pub fn rotated(&self, theta: f64) -> SectorUnion {
        SectorUnion { sectors: self.sectors.iter().map(|s| s.rotated(theta)).collect() }
    }

    /// Union of all rotations of `self` by multiples of 2π/m. Coincident
    /// copies are merged; a genuine overlap is an error.
    pub fn symmetrize(&self, m: u32) -> Result<SectorUnion> {
        let rot = Rotation::new(m)?;
        let mut out: Vec<Sector> = Vec::new();
        for k in 0..m {
            for s in &self.sectors {
                let r = s.rotated(rot.angle() * k as f64);
                let dup = out.iter().any(|o| {
                    (o.alpha - r.alpha).abs() < OVERLAP_TOL
                        && angle_diff(o.beta, r.beta).abs() < 1e-9
                });
                if !dup {
                    out.push(r);
                }
            }
        }
        SectorUnion::new(out)
    }

    /// True when every sector rotated by 2π/m coincides with a sector of the union.
    pub fn is_invariant(&self, m: u32) -> bool {
        let Ok(rot) = Rotation::new(m) else { return false };
        self.sectors.iter().all(|s| {
            let r = s.rotated(rot.angle());
            self.sectors.iter().any(|o| {
                (o.alpha - r.alpha).abs() < OVERLAP_TOL && angle_diff(o.beta, r.beta).abs() < 1e-9
            })
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sector union serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}
