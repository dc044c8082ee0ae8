//! Adaptive Gauss–Kronrod integration on intervals.

use std::collections::BinaryHeap;

use super::rule::{pairwise_sum, UNIT};
use super::{norm_inf, Estimate, HeapKey, QuadratureConfig};
use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 64;
const MAX_INTERVALS: usize = 50_000;

struct Interval<const N: usize> {
    a: f64,
    b: f64,
    depth: u32,
    value: [f64; N],
    err: f64,
}

fn rule<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64, depth: u32) -> Interval<N> {
    let h = b - a;
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for i in 0..15 {
        let v = f(a + h * UNIT.x[i]);
        for c in 0..N {
            k[c] += UNIT.wk[i] * v[c];
            g[c] += UNIT.wg[i] * v[c];
        }
    }
    let mut err = 0.0f64;
    for c in 0..N {
        k[c] *= h;
        g[c] *= h;
        err = err.max((k[c] - g[c]).abs());
    }
    Interval { a, b, depth, value: k, err }
}

/// Integrates a vector-valued `f` over [breaks[0], breaks[last]], with the
/// interior breakpoints as initial subdivision (place them at kinks and
/// near-singularities).
pub fn integrate_1d<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate<[f64; N]>> {
    cfg.validate()?;
    if breaks.len() < 2 {
        return Err(Error::Domain("integration interval needs two endpoints".into()));
    }
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (a.abs() + b.abs()));

    let mut store: Vec<Option<Interval<N>>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut done: Vec<usize> = Vec::new();
    let mut total = [0.0; N];
    let mut total_err = 0.0;

    let push = |iv: Interval<N>,
                    store: &mut Vec<Option<Interval<N>>>,
                    heap: &mut BinaryHeap<HeapKey>,
                    total: &mut [f64; N],
                    total_err: &mut f64| {
        for c in 0..N {
            total[c] += iv.value[c];
        }
        *total_err += iv.err;
        heap.push(HeapKey { err: iv.err, id: store.len() });
        store.push(Some(iv));
    };

    for w in pts.windows(2) {
        if w[1] > w[0] {
            let iv = rule(&f, w[0], w[1], 0);
            push(iv, &mut store, &mut heap, &mut total, &mut total_err);
        }
    }

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * norm_inf(&total));
        if total_err <= tol {
            break;
        }
        let Some(key) = heap.pop() else { break };
        let iv = store[key.id].take().expect("live interval");
        let mid = 0.5 * (iv.a + iv.b);
        let tiny = mid <= iv.a || mid >= iv.b;
        if iv.depth >= MAX_DEPTH || tiny || iv.err <= 1e-15 * norm_inf(&iv.value) {
            done.push(key.id);
            store[key.id] = Some(iv);
            continue;
        }
        if store.len() + 2 > MAX_INTERVALS {
            store[key.id] = Some(iv);
            done.push(key.id);
            break;
        }
        for c in 0..N {
            total[c] -= iv.value[c];
        }
        total_err -= iv.err;
        let l = rule(&f, iv.a, mid, iv.depth + 1);
        let r = rule(&f, mid, iv.b, iv.depth + 1);
        push(l, &mut store, &mut heap, &mut total, &mut total_err);
        push(r, &mut store, &mut heap, &mut total, &mut total_err);
    }

    let live: Vec<&Interval<N>> = store.iter().flatten().collect();
    let values: Vec<[f64; N]> = live.iter().map(|iv| iv.value).collect();
    let value = pairwise_sum(&values);
    let error: f64 = live.iter().map(|iv| iv.err).sum();
    let tol = cfg.abs_tol.max(cfg.rel_tol * norm_inf(&value));
    if !(error <= tol) || value.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence { value: value[0], error, cells: live.len() });
    }
    Ok(Estimate { value, error, cells: live.len() })
}

/// Scalar convenience wrapper around [`integrate_1d`].
pub fn integrate_line<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate<f64>> {
    let e = integrate_1d(|t| [f(t)], &[a, b], cfg)?;
    Ok(Estimate { value: e.value[0], error: e.error, cells: e.cells })
}
