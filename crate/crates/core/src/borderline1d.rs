//! One-dimensional BMO estimates for odd and even functions on [−1, 1],
//! the discrete Hilbert transform, and the local Fefferman–Stein split.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values at the cell centres tᵢ = −1 + (i + ½)h, h = 2/n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    values: Vec<f64>,
}

pub const MIN_POINTS: usize = 256;
pub const DEFAULT_POINTS: usize = 1 << 14;

impl Grid1D {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::Domain(format!("grid size {n} must be a power of two >= {MIN_POINTS}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid values must be finite".into()));
        }
        Ok(Grid1D { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = 2.0 / n as f64;
        Grid1D::new((0..n).map(|i| f(-1.0 + (i as f64 + 0.5) * h)).collect())
    }

    /// Samples f(sign(t)·max(|t|, h)), flattening a singularity at 0 over the two central nodes.
    pub fn from_fn_clipped(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = 2.0 / n as f64;
        Grid1D::from_fn(n, |t| f(t.signum() * t.abs().max(h)))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn h(&self) -> f64 {
        2.0 / self.len() as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -1.0 + (i as f64 + 0.5) * self.h()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    fn map2(&self, f: impl Fn(f64, f64) -> f64) -> Grid1D {
        let n = self.len();
        Grid1D { values: (0..n).map(|i| f(self.values[i], self.values[n - 1 - i])).collect() }
    }

    pub fn reflect(&self) -> Grid1D {
        self.map2(|_, r| r)
    }

    pub fn even_part(&self) -> Grid1D {
        self.map2(|a, r| 0.5 * (a + r))
    }

    pub fn odd_part(&self) -> Grid1D {
        self.map2(|a, r| 0.5 * (a - r))
    }

    /// max |f(t) − f(−t)|.
    pub fn even_defect(&self) -> f64 {
        self.map2(|a, r| a - r).max_abs()
    }

    /// max |f(t) + f(−t)|.
    pub fn odd_defect(&self) -> f64 {
        self.map2(|a, r| a + r).max_abs()
    }

    /// Central differences, one-sided at the ends and on either side of t = 0.
    pub fn derivative(&self) -> Grid1D {
        let v = &self.values;
        let n = v.len();
        let h = self.h();
        let mut d = vec![0.0; n];
        d[0] = (v[1] - v[0]) / h;
        d[n - 1] = (v[n - 1] - v[n - 2]) / h;
        for i in 1..n - 1 {
            d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        d[n / 2 - 1] = (v[n / 2 - 1] - v[n / 2 - 2]) / h;
        d[n / 2] = (v[n / 2 + 1] - v[n / 2]) / h;
        Grid1D { values: d }
    }

    pub fn add(&self, o: &Grid1D) -> Grid1D {
        Grid1D { values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: f64) -> Grid1D {
        Grid1D { values: self.values.iter().map(|a| a * s).collect() }
    }
}

fn mean_oscillation(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - m).abs()).sum::<f64>() / v.len() as f64
}

/// Largest mean oscillation over dyadic intervals of [−1, 1] of lengths
/// 2·2⁻ʲ, j = 0..log₂n − 4, placed at every multiple of an eighth of their length.
pub fn bmo_norm(f: &Grid1D) -> f64 {
    let n = f.len();
    let levels = n.trailing_zeros() as usize - 4;
    let mut best = 0.0f64;
    for j in 0..=levels {
        let len = n >> j;
        let stride = (len / 8).max(1);
        let mut start = 0;
        while start + len <= n {
            best = best.max(mean_oscillation(&f.values[start..start + len]));
            start += stride;
        }
    }
    best
}

/// Result of a discretized inequality lhs ≤ (1 + slack)·rhs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64, slack: f64) -> Self {
        BoundCheck { lhs, rhs, slack, holds: lhs <= (1.0 + slack) * rhs + 1e-12 }
    }
}

pub const DISCRETIZATION_SLACK: f64 = 0.1;
const PARITY_TOL: f64 = 1e-10;

/// For even φ: max |φ(t) − φ(0)|/|t| against ‖φ'‖_BMO. φ(0) is extrapolated
/// from the two central node pairs.
pub fn even_rate_bound_check(phi: &Grid1D, phi_prime: &Grid1D) -> Result<BoundCheck> {
    let defect = phi.even_defect();
    if defect > PARITY_TOL {
        return Err(Error::Asymmetry { order: 2, residual: defect });
    }
    if phi_prime.len() != phi.len() {
        return Err(Error::Domain("derivative grid size differs".into()));
    }
    let n = phi.len();
    let v = phi.values();
    let phi0 = (9.0 * v[n / 2] - v[n / 2 + 1]) / 8.0;
    let lhs = (n / 2..n).map(|i| (v[i] - phi0).abs() / phi.node(i)).fold(0.0, f64::max);
    Ok(BoundCheck::new(lhs, bmo_norm(phi_prime), DISCRETIZATION_SLACK))
}

/// For odd Φ with |Φ'(t)| ≤ C/|t|: sup|Φ| against 2‖Φ‖_BMO + max|tΦ'(t)|.
pub fn odd_sup_bound_check(big_phi: &Grid1D, c: f64) -> Result<BoundCheck> {
    let defect = big_phi.odd_defect();
    if defect > PARITY_TOL {
        return Err(Error::Asymmetry { order: 2, residual: defect });
    }
    let d = big_phi.derivative();
    let tdphi = (0..big_phi.len()).map(|i| (big_phi.node(i) * d.values[i]).abs()).fold(0.0, f64::max);
    if tdphi > c * (1.0 + DISCRETIZATION_SLACK) {
        return Err(Error::HypothesisViolation(format!("max |t Phi'(t)| = {tdphi} exceeds declared C = {c}")));
    }
    Ok(BoundCheck::new(big_phi.max_abs(), 2.0 * bmo_norm(big_phi) + tdphi, DISCRETIZATION_SLACK))
}

fn hilbert_kernel(n: usize) -> Vec<f64> {
    let h = 2.0 / n as f64;
    (0..n).map(|k| if k % 2 == 1 { h * (PI * k as f64 / n as f64).tan().recip() } else { 0.0 }).collect()
}

/// Periodic Hilbert transform on [−1, 1): (Hf)(t) = ½ PV∫ f(s) cot(π(t − s)/2) ds,
/// by the midpoint rule on odd node offsets, applied as a circulant via FFT.
pub fn hilbert(f: &Grid1D) -> Grid1D {
    let n = f.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut k: Vec<Complex<f64>> = hilbert_kernel(n).into_iter().map(|c| Complex::new(c, 0.0)).collect();
    let mut x: Vec<Complex<f64>> = f.values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fwd.process(&mut k);
    fwd.process(&mut x);
    for (a, b) in x.iter_mut().zip(&k) {
        *a *= b;
    }
    inv.process(&mut x);
    Grid1D { values: x.iter().map(|z| z.re / n as f64).collect() }
}

/// The same operator applied directly, O(n²).
pub fn hilbert_direct(f: &Grid1D) -> Grid1D {
    let n = f.len();
    let k = hilbert_kernel(n);
    let values = (0..n).map(|i| (0..n).map(|j| k[(i + n - j) % n] * f.values[j]).sum()).collect();
    Grid1D { values }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeffermanSteinSplit {
    pub phi1: Grid1D,
    pub phi2: Grid1D,
    /// max |Φ − Φ₁ − H(Φ₂)| over |t| ≤ ½.
    pub reconstruction_error: f64,
}

pub const RECONSTRUCTION_TOL: f64 = 0.05;

/// Φ = Φ₁ + H(Φ₂) with Φ₁ = Φ_odd + mean(Φ_even) and Φ₂ = −H(Φ_even).
pub fn fefferman_stein_split(big_phi: &Grid1D) -> Result<FeffermanSteinSplit> {
    let even = big_phi.even_part();
    let odd = big_phi.odd_part();
    let mean = even.mean();
    let phi1 = Grid1D { values: odd.values.iter().map(|v| v + mean).collect() };
    let phi2 = hilbert(&even).scale(-1.0);
    let rebuilt = phi1.add(&hilbert(&phi2));
    let n = big_phi.len();
    let err = (n / 4..3 * n / 4).map(|i| (big_phi.values[i] - rebuilt.values[i]).abs()).fold(0.0, f64::max);
    let tolerance = RECONSTRUCTION_TOL * big_phi.max_abs();
    if err > tolerance {
        return Err(Error::Reconstruction { error: err, tolerance });
    }
    Ok(FeffermanSteinSplit { phi1, phi2, reconstruction_error: err })
}
