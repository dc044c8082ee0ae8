//! Boundary-integral evaluation of ψ, ∇ψ and D²ψ for characteristic
//! functions (PaperRaw normalization).

use std::f64::consts::PI;

use super::field::{Field2D, FieldSource};
use crate::error::Result;
use crate::geom2d::Point2;
use crate::quadrature::{integrate_1d, QuadratureConfig};

/// A counterclockwise piece of the boundary of the support.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Curve {
    Segment(Point2, Point2),
    /// center + radius·(cos τ, sin τ), τ from t0 to t1 > t0.
    Arc { center: Point2, radius: f64, t0: f64, t1: f64 },
    /// sin(nτ)·(cos τ, sin τ), τ from t0 to t1 > t0.
    Rose { n: f64, t0: f64, t1: f64 },
}

impl Curve {
    fn point(&self, t: f64) -> (Point2, Point2) {
        match *self {
            Curve::Segment(a, b) => (a + (b - a) * t, b - a),
            Curve::Arc { center, radius, .. } => {
                let (s, c) = t.sin_cos();
                (center + Point2::new(c, s) * radius, Point2::new(-s, c) * radius)
            }
            Curve::Rose { n, .. } => {
                let (s, c) = t.sin_cos();
                let (rs, rc) = (n * t).sin_cos();
                let y = Point2::new(rs * c, rs * s);
                let dy = Point2::new(n * rc * c - rs * s, n * rc * s + rs * c);
                (y, dy)
            }
        }
    }

    fn distance(&self, x: Point2) -> f64 {
        match *self {
            Curve::Segment(a, b) => {
                let e = b - a;
                let t = ((x - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
                (x - (a + e * t)).norm()
            }
            Curve::Arc { center, radius, t0, t1 } => {
                let d = x - center;
                let th = d.x2.atan2(d.x1);
                let inside = (0..3).any(|k| {
                    let t = th + (k as f64 - 1.0) * 2.0 * PI;
                    t >= t0 && t <= t1
                });
                if inside {
                    (d.norm() - radius).abs()
                } else {
                    let (p0, _) = self.point(t0);
                    let (p1, _) = self.point(t1);
                    (x - p0).norm().min((x - p1).norm())
                }
            }
            Curve::Rose { n, t0, t1 } => {
                let mut best = x.norm();
                let th = x.x2.atan2(x.x1);
                for k in -1..=1 {
                    let t = th + k as f64 * 2.0 * PI;
                    if t >= t0 && t <= t1 {
                        best = best.min((x.norm() - (n * t).sin()).abs() * (1.0 + n * n).sqrt().recip());
                    }
                }
                best
            }
        }
    }

    fn range(&self) -> (f64, f64) {
        match *self {
            Curve::Segment(..) => (0.0, 1.0),
            Curve::Arc { t0, t1, .. } | Curve::Rose { t0, t1, .. } => (t0, t1),
        }
    }

    /// Breakpoints for 1D quadrature, refined geometrically toward the
    /// parameter closest to x and toward the ends.
    fn breaks(&self, x: Point2) -> Vec<f64> {
        let (a, b) = self.range();
        let mut v = vec![a, b];
        let samples = 64;
        let mut best = (f64::INFINITY, a);
        for i in 0..=samples {
            let t = a + (b - a) * i as f64 / samples as f64;
            let d = (self.point(t).0 - x).norm();
            if d < best.0 {
                best = (d, t);
            }
        }
        v.push(best.1);
        let scale = (b - a) * 0.5;
        let floor = (x.norm() * 1e-3).max(1e-14) * (b - a);
        let mut h = scale;
        while h > floor {
            for c in [a + h, b - h, best.1 - h, best.1 + h] {
                if c > a && c < b {
                    v.push(c);
                }
            }
            h *= 0.5;
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// Boundary pieces of an indicator field, or `None` for other sources.
pub(crate) fn boundary_of(field: &Field2D) -> Option<Vec<Curve>> {
    let mut out = Vec::new();
    match field.source() {
        FieldSource::SectorChar(u) => {
            for s in u.sectors() {
                let (a, b) = s.angular_range();
                if s.is_full_disc() {
                    out.push(Curve::Arc { center: Point2::ZERO, radius: 1.0, t0: a, t1: b });
                } else {
                    let pa = Point2::from_polar(1.0, a);
                    let pb = Point2::from_polar(1.0, b);
                    out.push(Curve::Segment(Point2::ZERO, pa));
                    out.push(Curve::Arc { center: Point2::ZERO, radius: 1.0, t0: a, t1: b });
                    out.push(Curve::Segment(pb, Point2::ZERO));
                }
            }
        }
        FieldSource::TriangleChar(c) => {
            let v = [Point2::ZERO, Point2::new(1.0, 0.0), Point2::new(1.0, *c)];
            for i in 0..3 {
                out.push(Curve::Segment(v[i], v[(i + 1) % 3]));
            }
        }
        FieldSource::RectChar(rs) => {
            for (lo, hi) in rs {
                let v = [*lo, Point2::new(hi.x1, lo.x2), *hi, Point2::new(lo.x1, hi.x2)];
                for i in 0..4 {
                    out.push(Curve::Segment(v[i], v[(i + 1) % 4]));
                }
            }
        }
        FieldSource::RoseChar(n) => {
            let w = PI / *n as f64;
            for k in 0..*n {
                let t0 = 2.0 * k as f64 * w;
                out.push(Curve::Rose { n: *n as f64, t0, t1: t0 + w });
            }
        }
        FieldSource::Sampled(_) | FieldSource::Analytic(_) => return None,
    }
    Some(out)
}

pub(crate) fn distance_to_boundary(curves: &[Curve], x: Point2) -> f64 {
    curves.iter().map(|c| c.distance(x)).fold(f64::INFINITY, f64::min)
}

/// ∫ ½ ln((s − u)² + v²) ds as a function of w = s − u.
fn log_antiderivative(w: f64, v: f64) -> f64 {
    let q = w * w + v * v;
    let a = if w == 0.0 { 0.0 } else { 0.5 * w * q.ln() };
    let b = if v == 0.0 { 0.0 } else { v * (w / v).atan() };
    a - w + b
}

struct SegmentFrame {
    len: f64,
    t: Point2,
    n: Point2,
    u: f64,
    v: f64,
}

fn frame(a: Point2, b: Point2, x: Point2) -> SegmentFrame {
    let e = b - a;
    let len = e.norm();
    let t = e / len;
    let n = t.perp();
    let d = x - a;
    SegmentFrame { len, t, n, u: d.dot(t), v: d.dot(n) }
}

/// D²ψ_raw as the full (not yet symmetrized) matrix [H11, H12, H21, H22].
pub(crate) fn hessian_raw(curves: &[Curve], x: Point2, cfg: &QuadratureConfig) -> Result<[f64; 4]> {
    let mut h = [0.0; 4];
    for c in curves {
        match *c {
            Curve::Segment(a, b) => {
                let f = frame(a, b, x);
                let (da, db) = (a - x, b - x);
                let along = 0.5 * (da.norm_sq() / db.norm_sq()).ln();
                let across = da.cross(db).atan2(da.dot(db));
                let v = f.t * along + f.n * across;
                h[0] += f.n.x1 * v.x1;
                h[1] += f.n.x1 * v.x2;
                h[2] += f.n.x2 * v.x1;
                h[3] += f.n.x2 * v.x2;
            }
            _ => {
                let e = integrate_1d(
                    |t| {
                        let (y, dy) = c.point(t);
                        let n = dy.perp();
                        let d = x - y;
                        let r2 = d.norm_sq();
                        [n.x1 * d.x1 / r2, n.x1 * d.x2 / r2, n.x2 * d.x1 / r2, n.x2 * d.x2 / r2]
                    },
                    &c.breaks(x),
                    cfg,
                )?;
                for k in 0..4 {
                    h[k] += e.value[k];
                }
            }
        }
    }
    Ok(h)
}

/// ∇ψ_raw = ∮ log|x − y| n̂ ds with n̂ the inward normal.
pub(crate) fn gradient_raw(curves: &[Curve], x: Point2, cfg: &QuadratureConfig) -> Result<Point2> {
    let mut g = Point2::ZERO;
    for c in curves {
        match *c {
            Curve::Segment(a, b) => {
                let f = frame(a, b, x);
                let i = log_antiderivative(f.len - f.u, f.v) - log_antiderivative(-f.u, f.v);
                g += f.n * i;
            }
            _ => {
                let e = integrate_1d(
                    |t| {
                        let (y, dy) = c.point(t);
                        let n = dy.perp();
                        let l = 0.5 * (x - y).norm_sq().ln();
                        [l * n.x1, l * n.x2]
                    },
                    &c.breaks(x),
                    cfg,
                )?;
                g += Point2::new(e.value[0], e.value[1]);
            }
        }
    }
    Ok(g)
}

/// ψ_raw = ∫_A log|x − y| dy = −∮ (2 ln r − 1)/4 · (y − x)·n̂ ds.
pub(crate) fn psi_raw(curves: &[Curve], x: Point2, cfg: &QuadratureConfig) -> Result<f64> {
    let mut p = 0.0;
    for c in curves {
        match *c {
            Curve::Segment(a, b) => {
                let f = frame(a, b, x);
                let i = log_antiderivative(f.len - f.u, f.v) - log_antiderivative(-f.u, f.v);
                p += 0.25 * f.v * (2.0 * i - f.len);
            }
            _ => {
                let e = integrate_1d(
                    |t| {
                        let (y, dy) = c.point(t);
                        let n = dy.perp();
                        let d = y - x;
                        let r2 = d.norm_sq();
                        let l = if r2 > 0.0 { r2.ln() } else { 0.0 };
                        [-(l - 1.0) * 0.25 * d.dot(n)]
                    },
                    &c.breaks(x),
                    cfg,
                )?;
                p += e.value[0];
            }
        }
    }
    Ok(p)
}
