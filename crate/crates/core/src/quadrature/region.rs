//! Integration regions and their decomposition into mapped pieces.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::cubature::{Chart, Param, Piece};
use super::QuadratureConfig;
use crate::error::{Error, Result};
use crate::geom2d::{Point2, Sector};

/// A bounded planar region of positive measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Disc { center: Point2, radius: f64 },
    SectorRegion(Sector),
    /// {0 ≤ y1 ≤ 1, 0 ≤ y2 ≤ c·y1}.
    Triangle { c: f64 },
    Rect { min: Point2, max: Point2 },
    /// Convex polygon, vertices in either orientation.
    Polygon(Vec<Point2>),
    /// {center + r(cos θ, sin θ): r0 ≤ r ≤ r1, t0 ≤ θ ≤ t1}.
    PolarBox { center: Point2, r0: f64, r1: f64, t0: f64, t1: f64 },
    /// {r(cos θ, sin θ): 0 ≤ r ≤ sin(petals·θ), t0 ≤ θ ≤ t1}; the angular
    /// range must lie inside one petal.
    Petal { petals: u32, t0: f64, t1: f64 },
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Region::Disc { center, radius } => center.is_finite() && *radius > 0.0,
            Region::SectorRegion(_) => true,
            Region::Triangle { c } => *c > 0.0 && c.is_finite(),
            Region::Rect { min, max } => max.x1 > min.x1 && max.x2 > min.x2,
            Region::Polygon(v) => v.len() >= 3 && signed_area(v).abs() > 0.0,
            Region::PolarBox { r0, r1, t0, t1, .. } => {
                *r0 >= 0.0 && r1 > r0 && t1 > t0 && t1 - t0 <= TAU + 1e-12
            }
            Region::Petal { petals, t0, t1 } => {
                let w = PI / *petals as f64;
                let k = (t0 / w + 1e-9).floor();
                *petals >= 1 && t1 > t0 && *t1 <= (k + 1.0) * w + 1e-12 && (k as i64) % 2 == 0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("degenerate region {self:?}")))
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Disc { radius, .. } => PI * radius * radius,
            Region::SectorRegion(s) => s.alpha(),
            Region::Triangle { c } => 0.5 * c,
            Region::Rect { min, max } => (max.x1 - min.x1) * (max.x2 - min.x2),
            Region::Polygon(v) => signed_area(v).abs(),
            Region::PolarBox { r0, r1, t0, t1, .. } => 0.5 * (r1 * r1 - r0 * r0) * (t1 - t0),
            Region::Petal { petals, t0, t1 } => {
                let n = *petals as f64;
                let g = |t: f64| 0.5 * (0.5 * t - (2.0 * n * t).sin() / (4.0 * n));
                g(*t1) - g(*t0)
            }
        }
    }

    pub(crate) fn pieces(&self, tag: usize, singular: &[Point2], cfg: &QuadratureConfig) -> Result<Vec<Piece>> {
        self.validate()?;
        let mut out = Vec::new();
        match self {
            Region::Disc { center, radius } => {
                polar_pieces(*center, 0.0, *radius, 0.0, TAU, tag, singular, &mut out)
            }
            Region::SectorRegion(s) => {
                let (a, b) = s.angular_range();
                polar_pieces(Point2::ZERO, 0.0, 1.0, a, b, tag, singular, &mut out)
            }
            Region::PolarBox { center, r0, r1, t0, t1 } => {
                polar_pieces(*center, *r0, *r1, *t0, *t1, tag, singular, &mut out)
            }
            Region::Petal { petals, t0, t1 } => {
                let chart = Chart::Rose { n: *petals as f64, t0: *t0, dt: t1 - t0 };
                chart_pieces(chart, &[], tag, singular, &mut out)
            }
            Region::Triangle { c } => polygon_pieces(
                &[Point2::ZERO, Point2::new(1.0, 0.0), Point2::new(1.0, *c)],
                tag,
                singular,
                cfg,
                &mut out,
            ),
            Region::Rect { min, max } => polygon_pieces(
                &[*min, Point2::new(max.x1, min.x2), *max, Point2::new(min.x1, max.x2)],
                tag,
                singular,
                cfg,
                &mut out,
            ),
            Region::Polygon(v) => polygon_pieces(v, tag, singular, cfg, &mut out),
        }
        Ok(out)
    }
}

pub(crate) fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() * 0.5
}

#[allow(clippy::too_many_arguments)]
fn polar_pieces(
    c: Point2,
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
    tag: usize,
    singular: &[Point2],
    out: &mut Vec<Piece>,
) {
    let chunks = ((t1 - t0) / FRAC_PI_2 - 1e-9).ceil().max(1.0) as usize;
    let dt = (t1 - t0) / chunks as f64;
    let dr = r1 - r0;
    for k in 0..chunks {
        let chart = Chart::Polar { c, r0, dr, t0: t0 + k as f64 * dt, dt };
        let mut grading = Vec::new();
        for s in singular {
            let rho = (*s - c).norm();
            if rho <= 1e-15 * r1 {
                continue;
            }
            let mut q = 2.0 * rho;
            while q < r1 {
                if q > r0 {
                    grading.push((q - r0) / dr);
                }
                q *= 2.0;
            }
            if 0.5 * rho > r0 {
                grading.push((0.5 * rho - r0) / dr);
            }
        }
        chart_pieces(chart, &grading, tag, singular, out);
    }
}

const SNAP: f64 = 0.1;

/// Splits the chart square at the singular points' coordinates (and the
/// extra radial breaks), Duffy-collapsing every sub-rectangle at its
/// singular corner.
fn chart_pieces(chart: Chart, extra_u: &[f64], tag: usize, singular: &[Point2], out: &mut Vec<Piece>) {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in singular {
        if let Some((u, v)) = chart.inverse(*s) {
            if u.is_finite()
                && v.is_finite()
                && (-SNAP..=1.0 + SNAP).contains(&u)
                && (-SNAP..=1.0 + SNAP).contains(&v)
            {
                let q = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
                if !pts.iter().any(|p| (p.0 - q.0).abs() < 1e-14 && (p.1 - q.1).abs() < 1e-14) {
                    pts.push(q);
                }
            }
        }
    }
    let mut us = vec![0.0, 1.0];
    let mut vs = vec![0.0, 1.0];
    for p in &pts {
        us.push(p.0);
        vs.push(p.1);
    }
    if !pts.is_empty() {
        us.extend(extra_u.iter().filter(|u| **u > 0.0 && **u < 1.0));
    }
    for v in [&mut us, &mut vs] {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    }
    for i in 0..us.len() - 1 {
        for j in 0..vs.len() - 1 {
            rect_pieces(chart, (us[i], us[i + 1], vs[j], vs[j + 1]), &pts, tag, out, 0);
        }
    }
}

fn rect_pieces(
    chart: Chart,
    (u0, u1, v0, v1): (f64, f64, f64, f64),
    pts: &[(f64, f64)],
    tag: usize,
    out: &mut Vec<Piece>,
    level: u32,
) {
    if u1 - u0 <= 0.0 || v1 - v0 <= 0.0 {
        return;
    }
    let corners = [(u0, v0), (u1, v0), (u1, v1), (u0, v1)];
    let tol = 1e-14;
    let hits: Vec<usize> = (0..4)
        .filter(|&k| pts.iter().any(|p| (p.0 - corners[k].0).abs() < tol && (p.1 - corners[k].1).abs() < tol))
        .collect();
    match hits.len() {
        0 => out.push(Piece { chart, param: Param::Rect { u0, du: u1 - u0, v0, dv: v1 - v0 }, tag }),
        1 => {
            let k = hits[0];
            let a = corners[k];
            let b = corners[(k + 1) % 4];
            let c = corners[(k + 2) % 4];
            let d = corners[(k + 3) % 4];
            out.push(Piece { chart, param: Param::Tri { a, p: b, q: c }, tag });
            out.push(Piece { chart, param: Param::Tri { a, p: c, q: d }, tag });
        }
        _ if level < 40 => {
            if u1 - u0 >= v1 - v0 {
                let m = 0.5 * (u0 + u1);
                rect_pieces(chart, (u0, m, v0, v1), pts, tag, out, level + 1);
                rect_pieces(chart, (m, u1, v0, v1), pts, tag, out, level + 1);
            } else {
                let m = 0.5 * (v0 + v1);
                rect_pieces(chart, (u0, u1, v0, m), pts, tag, out, level + 1);
                rect_pieces(chart, (u0, u1, m, v1), pts, tag, out, level + 1);
            }
        }
        _ => out.push(Piece { chart, param: Param::Rect { u0, du: u1 - u0, v0, dv: v1 - v0 }, tag }),
    }
}

fn ccw(v: &[Point2]) -> Vec<Point2> {
    let mut w = v.to_vec();
    if signed_area(&w) < 0.0 {
        w.reverse();
    }
    w
}

/// Clips a convex ccw polygon to the half-plane {y: (y − p)·n ≤ 0}.
pub(crate) fn clip_half_plane(poly: &[Point2], p: Point2, n: Point2) -> Vec<Point2> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let k = poly.len();
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        let da = (a - p).dot(n);
        let db = (b - p).dot(n);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}

fn nearest_on_polygon(poly: &[Point2], s: Point2) -> (Point2, f64) {
    let k = poly.len();
    let mut best = (poly[0], f64::INFINITY);
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        let e = b - a;
        let t = ((s - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
        let q = a + e * t;
        let d = (s - q).norm();
        if d < best.1 {
            best = (q, d);
        }
    }
    best
}

fn inside_convex(poly: &[Point2], s: Point2) -> bool {
    let k = poly.len();
    (0..k).all(|i| (poly[(i + 1) % k] - poly[i]).cross(s - poly[i]) >= 0.0)
}

fn polygon_pieces(v: &[Point2], tag: usize, singular: &[Point2], _cfg: &QuadratureConfig, out: &mut Vec<Piece>) {
    let poly = ccw(v);
    let diam = poly
        .iter()
        .flat_map(|a| poly.iter().map(move |b| (*a - *b).norm()))
        .fold(0.0, f64::max);
    let mut sites: Vec<Point2> = Vec::new();
    for s in singular {
        let site = if inside_convex(&poly, *s) {
            Some(*s)
        } else {
            let (q, d) = nearest_on_polygon(&poly, *s);
            (d <= 0.25 * diam).then_some(q)
        };
        if let Some(q) = site {
            if !sites.iter().any(|o| (*o - q).norm() <= 1e-14 * diam) {
                sites.push(q);
            }
        }
    }
    if sites.is_empty() {
        if poly.len() == 4 && ((poly[1] - poly[0]) - (poly[2] - poly[3])).norm() <= 1e-14 * diam {
            let chart = Chart::Affine { o: poly[0], e1: poly[1] - poly[0], e2: poly[3] - poly[0] };
            out.push(Piece { chart, param: Param::Rect { u0: 0.0, du: 1.0, v0: 0.0, dv: 1.0 }, tag });
        } else {
            fan(poly[0], &poly, diam, tag, out);
        }
        return;
    }
    for (k, s) in sites.iter().enumerate() {
        let mut cell = poly.clone();
        for (j, o) in sites.iter().enumerate() {
            if j != k {
                cell = clip_half_plane(&cell, (*s + *o) * 0.5, *o - *s);
            }
        }
        if cell.len() >= 3 {
            fan(*s, &cell, diam, tag, out);
        }
    }
}

fn fan(apex: Point2, poly: &[Point2], diam: f64, tag: usize, out: &mut Vec<Piece>) {
    let k = poly.len();
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        if (a - apex).cross(b - apex).abs() <= 1e-14 * diam * diam {
            continue;
        }
        let chart = Chart::Affine { o: apex, e1: a - apex, e2: b - apex };
        out.push(Piece { chart, param: Param::Tri { a: (0.0, 0.0), p: (1.0, 0.0), q: (0.0, 1.0) }, tag });
    }
}
