//! Adaptive quadrature over planar regions and intervals.

mod cubature;
mod line;
mod region;
mod rule;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{Point2, Rotation};

pub use line::{integrate_1d, integrate_line};
pub use region::Region;
pub(crate) use region::{clip_half_plane, signed_area as region_signed_area};

/// Tolerances and limits of the adaptive engines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Refinement depth limit per cell, counted in quadrisections.
    pub max_subdivisions: u32,
    /// Singular points closer than this to a region are treated as lying on it.
    pub singular_split_radius: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-10, max_subdivisions: 24, singular_split_radius: 1e-6 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.singular_split_radius > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions < 4 {
            return Err(Error::Config("max_subdivisions must be at least 4".into()));
        }
        Ok(())
    }

    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureConfig { rel_tol, abs_tol, ..Default::default() }
    }
}

/// Integral value with its heuristic error estimate and the number of cells used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub cells: usize,
}

pub(crate) fn norm_inf<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Max-heap entry: largest error first, ties by lowest id.
pub(crate) struct HeapKey {
    pub err: f64,
    pub id: usize,
}

impl PartialEq for HeapKey {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for HeapKey {}
impl PartialOrd for HeapKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for HeapKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then_with(|| o.id.cmp(&self.id))
    }
}

/// Integrates `f` over `region`. `singular` lists points where `f` is
/// singular or non-smooth; cells are split and Duffy-collapsed there.
pub fn integrate<F>(f: F, region: &Region, singular: &[Point2], cfg: &QuadratureConfig) -> Result<Estimate<f64>>
where
    F: Fn(Point2) -> f64,
{
    let e = integrate_regions(|p, _| [f(p)], std::slice::from_ref(region), singular, cfg)?;
    Ok(Estimate { value: e.value[0], error: e.error, cells: e.cells })
}

/// Integrates a vector-valued `f(y, region_index)` over the union of `regions`.
pub fn integrate_regions<const N: usize, F>(
    f: F,
    regions: &[Region],
    singular: &[Point2],
    cfg: &QuadratureConfig,
) -> Result<Estimate<[f64; N]>>
where
    F: Fn(Point2, usize) -> [f64; N],
{
    cfg.validate()?;
    let mut pieces = Vec::new();
    for (tag, r) in regions.iter().enumerate() {
        pieces.extend(r.pieces(tag, singular, cfg)?);
    }
    if pieces.is_empty() {
        return Ok(Estimate { value: [0.0; N], error: 0.0, cells: 0 });
    }
    cubature::cubature(&pieces, &f, cfg)
}

/// ∫_{B₁₀(0)} |Σ_{i=1}^{m} (x − Oⁱy)/|x − Oⁱy|²| dy / |x|.
pub fn scaled_kernel_bound(x: Point2, m: u32, cfg: &QuadratureConfig) -> Result<f64> {
    let r = x.norm();
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("scaled kernel bound needs 0 < |x| <= 1, got {r}")));
    }
    let rot = Rotation::new(m)?;
    let images: Vec<Point2> = (0..m).map(|i| rot.pow(x, i as i64)).collect();
    let f = |y: Point2| {
        let mut acc = Point2::ZERO;
        for i in 1..=m {
            let d = x - rot.pow(y, i as i64);
            let r2 = d.norm_sq();
            if r2 > 0.0 {
                acc += d / r2;
            }
        }
        acc.norm()
    };
    let disc = Region::Disc { center: Point2::ZERO, radius: 10.0 };
    let e = integrate(f, &disc, &images, cfg)?;
    Ok(e.value / r)
}
