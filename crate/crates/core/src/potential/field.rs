//! Bounded source terms g with declared rotational symmetry.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom2d::{Point2, Rotation, SectorUnion};
use crate::quadrature::{clip_half_plane, Region};

pub type ScalarFn = Arc<dyn Fn(Point2) -> f64 + Send + Sync>;

/// Node values on a rectangular grid, bilinear inside, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    pub min: Point2,
    pub max: Point2,
    pub nx: usize,
    pub ny: usize,
    /// (nx+1)·(ny+1) node values, rows of constant x2.
    pub values: Vec<f64>,
}

impl SampledGrid {
    pub fn new(min: Point2, max: Point2, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || !(max.x1 > min.x1 && max.x2 > min.x2) {
            return Err(Error::Domain("degenerate sampling grid".into()));
        }
        if values.len() != (nx + 1) * (ny + 1) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid values must be finite, one per node".into()));
        }
        Ok(SampledGrid { min, max, nx, ny, values })
    }

    pub fn from_fn(min: Point2, max: Point2, nx: usize, ny: usize, f: impl Fn(Point2) -> f64) -> Result<Self> {
        let hx = (max.x1 - min.x1) / nx as f64;
        let hy = (max.x2 - min.x2) / ny as f64;
        let mut values = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                values.push(f(Point2::new(min.x1 + i as f64 * hx, min.x2 + j as f64 * hy)));
            }
        }
        SampledGrid::new(min, max, nx, ny, values)
    }

    fn cell_size(&self) -> (f64, f64) {
        ((self.max.x1 - self.min.x1) / self.nx as f64, (self.max.x2 - self.min.x2) / self.ny as f64)
    }

    pub fn value(&self, p: Point2) -> f64 {
        if p.x1 < self.min.x1 || p.x1 > self.max.x1 || p.x2 < self.min.x2 || p.x2 > self.max.x2 {
            return 0.0;
        }
        let (hx, hy) = self.cell_size();
        let fx = (p.x1 - self.min.x1) / hx;
        let fy = (p.x2 - self.min.x2) / hy;
        let i = (fx.floor() as usize).min(self.nx - 1);
        let j = (fy.floor() as usize).min(self.ny - 1);
        let s = fx - i as f64;
        let t = fy - j as f64;
        let at = |a: usize, b: usize| self.values[b * (self.nx + 1) + a];
        (1.0 - s) * (1.0 - t) * at(i, j) + s * (1.0 - t) * at(i + 1, j) + (1.0 - s) * t * at(i, j + 1)
            + s * t * at(i + 1, j + 1)
    }

    fn cells(&self) -> Vec<Region> {
        let (hx, hy) = self.cell_size();
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                let lo = Point2::new(self.min.x1 + i as f64 * hx, self.min.x2 + j as f64 * hy);
                out.push(Region::Rect { min: lo, max: Point2::new(lo.x1 + hx, lo.x2 + hy) });
            }
        }
        out
    }
}

/// Closed-form source term with its non-smooth points.
#[derive(Clone)]
pub struct AnalyticField {
    pub f: ScalarFn,
    pub singular_points: Vec<Point2>,
}

impl fmt::Debug for AnalyticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticField").field("singular_points", &self.singular_points).finish()
    }
}

/// What the source term is.
#[derive(Debug, Clone)]
pub enum FieldSource {
    SectorChar(SectorUnion),
    /// χ of {0 ≤ y1 ≤ 1, 0 ≤ y2 ≤ c·y1}.
    TriangleChar(f64),
    /// χ of a union of closed rectangles with disjoint interiors, (min, max) corners.
    RectChar(Vec<(Point2, Point2)>),
    /// χ of the rose {r ≤ sin(nθ)}; n petals.
    RoseChar(u32),
    Sampled(SampledGrid),
    Analytic(AnalyticField),
}

/// Whether a region carries the constant density 1 or the field's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Density {
    One,
    Field,
}

/// Source term g of Δψ = g: bounded, compactly supported, with a declared
/// (and verified) symmetry order.
#[derive(Debug, Clone)]
pub struct Field2D {
    source: FieldSource,
    symmetry_order: u32,
    support_radius: f64,
    sup_norm: f64,
}

const SYMMETRY_SAMPLES: usize = 1000;
const SYMMETRY_TOL: f64 = 1e-9;

impl Field2D {
    pub fn sector_union(u: SectorUnion) -> Self {
        Field2D { source: FieldSource::SectorChar(u), symmetry_order: 1, support_radius: 1.0, sup_norm: 1.0 }
    }

    pub fn triangle(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("triangle slope {c} must be positive")));
        }
        Ok(Field2D {
            source: FieldSource::TriangleChar(c),
            symmetry_order: 1,
            support_radius: (1.0 + c * c).sqrt(),
            sup_norm: 1.0,
        })
    }

    pub fn rects(rects: Vec<(Point2, Point2)>) -> Result<Self> {
        if rects.is_empty() || rects.iter().any(|(a, b)| !(b.x1 > a.x1 && b.x2 > a.x2)) {
            return Err(Error::Domain("rectangles need positive extent".into()));
        }
        let support_radius = rects
            .iter()
            .flat_map(|(a, b)| [*a, *b, Point2::new(a.x1, b.x2), Point2::new(b.x1, a.x2)])
            .map(|p| p.norm())
            .fold(0.0, f64::max);
        Ok(Field2D { source: FieldSource::RectChar(rects), symmetry_order: 1, support_radius, sup_norm: 1.0 })
    }

    pub fn rose(petals: u32) -> Result<Self> {
        if petals == 0 {
            return Err(Error::Domain("rose needs at least one petal".into()));
        }
        Ok(Field2D { source: FieldSource::RoseChar(petals), symmetry_order: 1, support_radius: 1.0, sup_norm: 1.0 })
    }

    pub fn sampled(grid: SampledGrid) -> Self {
        let corners = [grid.min, grid.max, Point2::new(grid.min.x1, grid.max.x2), Point2::new(grid.max.x1, grid.min.x2)];
        let support_radius = corners.iter().map(|p| p.norm()).fold(0.0, f64::max);
        let sup_norm = grid.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        Field2D { source: FieldSource::Sampled(grid), symmetry_order: 1, support_radius, sup_norm }
    }

    /// A closed-form g vanishing outside B(0, support_radius), with |g| ≤ sup_norm.
    pub fn analytic(f: ScalarFn, support_radius: f64, sup_norm: f64, singular_points: Vec<Point2>) -> Result<Self> {
        if !(support_radius > 0.0 && support_radius.is_finite() && sup_norm >= 0.0) {
            return Err(Error::Domain("analytic field needs a finite support radius".into()));
        }
        let field = Field2D {
            source: FieldSource::Analytic(AnalyticField { f, singular_points }),
            symmetry_order: 1,
            support_radius,
            sup_norm,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..SYMMETRY_SAMPLES {
            let p = field.random_point(&mut rng);
            let v = field.value(p);
            if !v.is_finite() || v.abs() > sup_norm * (1.0 + 1e-12) + 1e-300 {
                return Err(Error::Domain(format!("|g({}, {})| = {} exceeds declared sup-norm {sup_norm}", p.x1, p.x2, v.abs())));
            }
        }
        Ok(field)
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Point2 {
        let r = self.support_radius * 1.05 * rng.gen::<f64>().sqrt();
        Point2::from_polar(r, TAU * rng.gen::<f64>())
    }

    /// Declares symmetry of order m, verified on seeded random points.
    pub fn with_symmetry(mut self, m: u32) -> Result<Self> {
        let rot = Rotation::new(m)?;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut worst = 0.0f64;
        for _ in 0..SYMMETRY_SAMPLES {
            let p = self.random_point(&mut rng);
            worst = worst.max((self.value(p) - self.value(rot.pow(p, 1))).abs());
        }
        if worst > SYMMETRY_TOL {
            return Err(Error::Asymmetry { order: m, residual: worst });
        }
        self.symmetry_order = m;
        Ok(self)
    }

    pub fn source(&self) -> &FieldSource {
        &self.source
    }

    pub fn symmetry_order(&self) -> u32 {
        self.symmetry_order
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn is_indicator(&self) -> bool {
        !matches!(self.source, FieldSource::Sampled(_) | FieldSource::Analytic(_))
    }

    pub fn value(&self, p: Point2) -> f64 {
        let ind = |b: bool| if b { 1.0 } else { 0.0 };
        match &self.source {
            FieldSource::SectorChar(u) => ind(u.contains(p)),
            FieldSource::TriangleChar(c) => ind(p.x1 >= 0.0 && p.x1 <= 1.0 && p.x2 >= 0.0 && p.x2 <= c * p.x1),
            FieldSource::RectChar(rs) => {
                ind(rs.iter().any(|(a, b)| p.x1 >= a.x1 && p.x1 <= b.x1 && p.x2 >= a.x2 && p.x2 <= b.x2))
            }
            FieldSource::RoseChar(n) => {
                let r = p.norm();
                let th = p.x2.atan2(p.x1);
                ind(r == 0.0 || r <= (*n as f64 * th).sin())
            }
            FieldSource::Sampled(g) => g.value(p),
            FieldSource::Analytic(a) => {
                if p.norm() > self.support_radius {
                    0.0
                } else {
                    (a.f)(p)
                }
            }
        }
    }

    /// Points where g is not smooth inside its regions.
    pub fn singular_points(&self) -> Vec<Point2> {
        match &self.source {
            FieldSource::Analytic(a) => a.singular_points.clone(),
            _ => Vec::new(),
        }
    }

    /// Regions covering the support, with the density to integrate on each.
    pub(crate) fn regions(&self) -> Vec<(Region, Density)> {
        match &self.source {
            FieldSource::SectorChar(u) => {
                u.sectors().iter().map(|s| (Region::SectorRegion(*s), Density::One)).collect()
            }
            FieldSource::TriangleChar(c) => vec![(Region::Triangle { c: *c }, Density::One)],
            FieldSource::RectChar(rs) => {
                rs.iter().map(|(a, b)| (Region::Rect { min: *a, max: *b }, Density::One)).collect()
            }
            FieldSource::RoseChar(n) => {
                let w = PI / *n as f64;
                (0..*n)
                    .map(|k| {
                        let t0 = 2.0 * k as f64 * w;
                        (Region::Petal { petals: *n, t0, t1: t0 + w }, Density::One)
                    })
                    .collect()
            }
            FieldSource::Sampled(g) => g.cells().into_iter().map(|r| (r, Density::Field)).collect(),
            FieldSource::Analytic(_) => {
                vec![(Region::Disc { center: Point2::ZERO, radius: self.support_radius }, Density::Field)]
            }
        }
    }

    /// Regions restricted to the wedge 0 ≤ θ ≤ 2π/m.
    pub(crate) fn wedge_regions(&self, m: u32) -> Vec<(Region, Density)> {
        let w = TAU / m as f64;
        let mut out = Vec::new();
        for (r, d) in self.regions() {
            for piece in clip_to_wedge(&r, w) {
                out.push((piece, d));
            }
        }
        out
    }
}

fn angular_overlap(a: f64, b: f64, w: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for k in -2..=2 {
        let s = a + k as f64 * TAU;
        let e = b + k as f64 * TAU;
        let lo = s.max(0.0);
        let hi = e.min(w);
        if hi - lo > 1e-14 {
            out.push((lo, hi));
        }
    }
    out
}

fn polygon_of(r: &Region) -> Option<Vec<Point2>> {
    match r {
        Region::Triangle { c } => Some(vec![Point2::ZERO, Point2::new(1.0, 0.0), Point2::new(1.0, *c)]),
        Region::Rect { min, max } => Some(vec![*min, Point2::new(max.x1, min.x2), *max, Point2::new(min.x1, max.x2)]),
        Region::Polygon(v) => Some(v.clone()),
        _ => None,
    }
}

fn clip_to_wedge(r: &Region, w: f64) -> Vec<Region> {
    if w >= TAU {
        return vec![r.clone()];
    }
    if let Some(mut poly) = polygon_of(r) {
        if crate::quadrature::region_signed_area(&poly) < 0.0 {
            poly.reverse();
        }
        let e = Point2::from_polar(1.0, w);
        let mut c = clip_half_plane(&poly, Point2::ZERO, Point2::new(0.0, -1.0));
        if c.len() >= 3 {
            c = clip_half_plane(&c, Point2::ZERO, e.perp());
        }
        let scale = poly.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if c.len() >= 3 && crate::quadrature::region_signed_area(&c).abs() > 1e-14 * scale * scale {
            return vec![Region::Polygon(c)];
        }
        return Vec::new();
    }
    match r {
        Region::Disc { center, radius } if *center == Point2::ZERO => {
            vec![Region::PolarBox { center: Point2::ZERO, r0: 0.0, r1: *radius, t0: 0.0, t1: w }]
        }
        Region::SectorRegion(s) => {
            let (a, b) = s.angular_range();
            angular_overlap(a, b, w)
                .into_iter()
                .map(|(t0, t1)| Region::PolarBox { center: Point2::ZERO, r0: 0.0, r1: 1.0, t0, t1 })
                .collect()
        }
        Region::PolarBox { center, r0, r1, t0, t1 } if *center == Point2::ZERO => angular_overlap(*t0, *t1, w)
            .into_iter()
            .map(|(a, b)| Region::PolarBox { center: Point2::ZERO, r0: *r0, r1: *r1, t0: a, t1: b })
            .collect(),
        Region::Petal { petals, t0, t1 } => angular_overlap(*t0, *t1, w)
            .into_iter()
            .map(|(a, b)| Region::Petal { petals: *petals, t0: a, t1: b })
            .collect(),
        _ => vec![r.clone()],
    }
}
