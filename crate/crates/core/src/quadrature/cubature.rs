//! Tensor Gauss–Kronrod cubature over mapped unit squares and triangles.

use std::collections::BinaryHeap;

use super::rule::{pairwise_sum, UNIT};
use super::{norm_inf, Estimate, HeapKey, QuadratureConfig};
use crate::error::{Error, Result};
use crate::geom2d::Point2;

const MAX_CELLS: usize = 400_000;

/// Smooth map from chart parameters (u, v) ∈ [0,1]² to the plane.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Chart {
    /// y = o + u e1 + v e2.
    Affine { o: Point2, e1: Point2, e2: Point2 },
    /// r = r0 + u dr, θ = t0 + v dt around c.
    Polar { c: Point2, r0: f64, dr: f64, t0: f64, dt: f64 },
    /// θ = t0 + v dt, r = u sin(nθ); one petal of a rose curve.
    Rose { n: f64, t0: f64, dt: f64 },
}

impl Chart {
    #[inline]
    pub(crate) fn map(&self, u: f64, v: f64) -> (Point2, f64) {
        match *self {
            Chart::Affine { o, e1, e2 } => (o + e1 * u + e2 * v, e1.cross(e2).abs()),
            Chart::Polar { c, r0, dr, t0, dt } => {
                let r = r0 + u * dr;
                let (s, co) = (t0 + v * dt).sin_cos();
                (Point2::new(c.x1 + r * co, c.x2 + r * s), r * dr * dt)
            }
            Chart::Rose { n, t0, dt } => {
                let th = t0 + v * dt;
                let rho = (n * th).sin();
                let r = u * rho;
                let (s, co) = th.sin_cos();
                (Point2::new(r * co, r * s), u * rho * rho * dt)
            }
        }
    }

    /// Chart coordinates of `p`, possibly outside [0,1]². `None` at a
    /// polar centre, where the Jacobian already absorbs the singularity.
    pub(crate) fn inverse(&self, p: Point2) -> Option<(f64, f64)> {
        match *self {
            Chart::Affine { o, e1, e2 } => {
                let det = e1.cross(e2);
                let d = p - o;
                Some((d.cross(e2) / det, e1.cross(d) / det))
            }
            Chart::Polar { c, r0, dr, t0, dt } => {
                let d = p - c;
                let r = d.norm();
                if r <= 1e-15 * (r0 + dr) {
                    return None;
                }
                let th = unwrap_from(d.x2.atan2(d.x1), t0, dt);
                Some(((r - r0) / dr, (th - t0) / dt))
            }
            Chart::Rose { n, t0, dt } => {
                let r = p.norm();
                if r == 0.0 {
                    return None;
                }
                let th = unwrap_from(p.x2.atan2(p.x1), t0, dt);
                let rho = (n * th).sin();
                if rho <= 0.0 {
                    return Some((f64::INFINITY, (th - t0) / dt));
                }
                Some((r / rho, (th - t0) / dt))
            }
        }
    }
}

/// Angle equivalent to `th` closest to the interval [t0, t0 + dt].
fn unwrap_from(th: f64, t0: f64, dt: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mid = t0 + 0.5 * dt;
    let k = ((mid - th) / tau).round();
    th + k * tau
}

/// Parameter domain inside the chart square.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Param {
    Rect { u0: f64, du: f64, v0: f64, dv: f64 },
    /// Triangle (a, p, q) in chart coordinates, Duffy-collapsed at `a`.
    Tri { a: (f64, f64), p: (f64, f64), q: (f64, f64) },
}

impl Param {
    #[inline]
    fn map(&self, s: f64, t: f64) -> (f64, f64, f64) {
        match *self {
            Param::Rect { u0, du, v0, dv } => (u0 + s * du, v0 + t * dv, du * dv),
            Param::Tri { a, p, q } => {
                let ex = (p.0 - a.0, p.1 - a.1);
                let ey = (q.0 - p.0, q.1 - p.1);
                let det = (ex.0 * ey.1 - ex.1 * ey.0).abs();
                (a.0 + s * (ex.0 + t * ey.0), a.1 + s * (ex.1 + t * ey.1), s * det)
            }
        }
    }
}

/// One mapped integration patch; `tag` identifies the originating region.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece {
    pub chart: Chart,
    pub param: Param,
    pub tag: usize,
}

struct Cell<const N: usize> {
    piece: usize,
    s0: f64,
    s1: f64,
    t0: f64,
    t1: f64,
    depth: u32,
    value: [f64; N],
    err: f64,
    split_s: bool,
}

fn eval_cell<const N: usize, F: Fn(Point2, usize) -> [f64; N]>(
    pieces: &[Piece],
    f: &F,
    piece: usize,
    (s0, s1, t0, t1): (f64, f64, f64, f64),
    depth: u32,
) -> Cell<N> {
    let pc = &pieces[piece];
    let hs = s1 - s0;
    let ht = t1 - t0;
    let mut kk = [0.0; N];
    let mut gk = [0.0; N];
    let mut kg = [0.0; N];
    for i in 0..15 {
        let s = s0 + hs * UNIT.x[i];
        let mut row_k = [0.0; N];
        let mut row_g = [0.0; N];
        for j in 0..15 {
            let t = t0 + ht * UNIT.x[j];
            let (u, v, jp) = pc.param.map(s, t);
            let (y, jc) = pc.chart.map(u, v);
            let w = jp * jc;
            if w == 0.0 {
                continue;
            }
            let fv = f(y, pc.tag);
            for c in 0..N {
                let z = fv[c] * w;
                row_k[c] += UNIT.wk[j] * z;
                row_g[c] += UNIT.wg[j] * z;
            }
        }
        for c in 0..N {
            kk[c] += UNIT.wk[i] * row_k[c];
            gk[c] += UNIT.wg[i] * row_k[c];
            kg[c] += UNIT.wk[i] * row_g[c];
        }
    }
    let area = hs * ht;
    let mut es = 0.0f64;
    let mut et = 0.0f64;
    for c in 0..N {
        kk[c] *= area;
        es = es.max((kk[c] - gk[c] * area).abs());
        et = et.max((kk[c] - kg[c] * area).abs());
    }
    let mut err = es + et;
    if kk.iter().any(|v| !v.is_finite()) {
        err = f64::INFINITY;
    }
    Cell { piece, s0, s1, t0, t1, depth, value: kk, err, split_s: es >= et }
}

/// Globally adaptive cubature over a set of pieces.
pub(crate) fn cubature<const N: usize, F: Fn(Point2, usize) -> [f64; N]>(
    pieces: &[Piece],
    f: &F,
    cfg: &QuadratureConfig,
) -> Result<Estimate<[f64; N]>> {
    let max_depth = 2 * cfg.max_subdivisions;
    let mut store: Vec<Option<Cell<N>>> = Vec::with_capacity(pieces.len() * 4);
    let mut heap = BinaryHeap::new();
    let mut total = [0.0; N];
    let mut total_err = 0.0;

    let push = |c: Cell<N>,
                store: &mut Vec<Option<Cell<N>>>,
                heap: &mut BinaryHeap<HeapKey>,
                total: &mut [f64; N],
                total_err: &mut f64| {
        for k in 0..N {
            total[k] += c.value[k];
        }
        *total_err += c.err;
        heap.push(HeapKey { err: c.err, id: store.len() });
        store.push(Some(c));
    };

    for i in 0..pieces.len() {
        let c = eval_cell(pieces, f, i, (0.0, 1.0, 0.0, 1.0), 0);
        push(c, &mut store, &mut heap, &mut total, &mut total_err);
    }

    let mut exhausted = false;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * norm_inf(&total));
        if total_err <= tol {
            break;
        }
        let Some(key) = heap.pop() else { break };
        let cell = store[key.id].take().expect("live cell");
        let roundoff = cell.err <= 1e-15 * norm_inf(&cell.value);
        if cell.depth >= max_depth || roundoff {
            store[key.id] = Some(cell);
            continue;
        }
        if store.len() + 2 > MAX_CELLS {
            store[key.id] = Some(cell);
            exhausted = true;
            break;
        }
        for k in 0..N {
            total[k] -= cell.value[k];
        }
        total_err -= cell.err;
        let (a, b) = if cell.split_s {
            let m = 0.5 * (cell.s0 + cell.s1);
            ((cell.s0, m, cell.t0, cell.t1), (m, cell.s1, cell.t0, cell.t1))
        } else {
            let m = 0.5 * (cell.t0 + cell.t1);
            ((cell.s0, cell.s1, cell.t0, m), (cell.s0, cell.s1, m, cell.t1))
        };
        let ca = eval_cell(pieces, f, cell.piece, a, cell.depth + 1);
        let cb = eval_cell(pieces, f, cell.piece, b, cell.depth + 1);
        push(ca, &mut store, &mut heap, &mut total, &mut total_err);
        push(cb, &mut store, &mut heap, &mut total, &mut total_err);
    }

    let live: Vec<&Cell<N>> = store.iter().flatten().collect();
    let values: Vec<[f64; N]> = live.iter().map(|c| c.value).collect();
    let value = pairwise_sum(&values);
    let error: f64 = live.iter().map(|c| c.err).sum();
    let tol = cfg.abs_tol.max(cfg.rel_tol * norm_inf(&value));
    if exhausted || !(error <= tol) || value.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence { value: value[0], error, cells: live.len() });
    }
    Ok(Estimate { value, error, cells: live.len() })
}
