//! Seeded property suites with a machine-readable report.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Float, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::borderline1d::{
    bmo_norm, even_rate_bound_check, fefferman_stein_split, hilbert, odd_sup_bound_check, Grid1D, DEFAULT_POINTS,
};
use crate::error::{Error, Result};
use crate::geom2d::{rotation_identity_residual, rotation_sum, Point2};
use crate::kernels::{four_fold_kernel_closed, hessian_kernel, numerator_bundles, KernelConvention};
use crate::potential::fit_line;
use crate::quadrature::QuadratureConfig;
use crate::sectors::remainder_hessian_sweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Kernels,
    Identity,
    Appendix,
    Bmo,
    All,
}

impl Suite {
    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Kernels, Suite::Identity, Suite::Appendix, Suite::Bmo],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Kernels => "kernels",
            Suite::Identity => "identity",
            Suite::Appendix => "appendix",
            Suite::Bmo => "bmo",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "kernels" => Suite::Kernels,
            "identity" => Suite::Identity,
            "appendix" => Suite::Appendix,
            "bmo" => Suite::Bmo,
            "all" => Suite::All,
            _ => return Err(Error::Config(format!("unknown suite '{s}'"))),
        })
    }
}

/// Deliberate defects for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flips the sign of the closed 4-fold kernel.
    KernelSign,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kernel-sign" => Ok(Fault::KernelSign),
            _ => Err(Error::Config(format!("unknown fault '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub threshold: f64,
}

impl PropertyResult {
    /// Passes when measured ≤ threshold.
    fn at_most(name: &str, measured: f64, threshold: f64) -> Self {
        let status = if measured <= threshold { Status::Pass } else { Status::Fail };
        PropertyResult { name: name.into(), status, measured, threshold }
    }

    /// Passes when measured ≥ threshold.
    fn at_least(name: &str, measured: f64, threshold: f64) -> Self {
        let status = if measured >= threshold { Status::Pass } else { Status::Fail };
        PropertyResult { name: name.into(), status, measured, threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
    pub cfg: QuadratureConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 42, fault: None, cfg: QuadratureConfig::default() }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut properties = Vec::new();
    for part in suite.parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        properties.extend(match part {
            Suite::Kernels => kernel_suite(&mut rng, opts.fault),
            Suite::Identity => identity_suite(&mut rng),
            Suite::Appendix => appendix_suite()?,
            Suite::Bmo => bmo_suite(&mut rng)?,
            Suite::All => unreachable!("expanded above"),
        });
    }
    Ok(VerifyReport { suite, seed: opts.seed, properties })
}

fn point_in_disc(rng: &mut ChaCha8Rng, r: f64) -> Point2 {
    Point2::from_polar(r * rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>())
}

/// Smallest distance from x to the poles ±y, ±y⊥, relative to |x| + |y|.
pub fn relative_pole_distance(x: Point2, y: Point2) -> f64 {
    let yp = y.perp();
    let d = [(x - y).norm(), (x + y).norm(), (x - yp).norm(), (x + yp).norm()].into_iter().fold(f64::INFINITY, f64::min);
    d / (x.norm() + y.norm())
}

/// Common binary exponent e with every input an integer multiple of 2^e.
fn common_exponent(vals: &[f64]) -> i16 {
    vals.iter().filter(|v| **v != 0.0).map(|v| v.integer_decode().1).min().unwrap_or(0)
}

fn scaled_int(v: f64, e: i16) -> BigInt {
    let (mant, exp, sign) = v.integer_decode();
    if mant == 0 {
        return BigInt::zero();
    }
    BigInt::from(sign) * (BigInt::from(mant) << ((exp - e) as usize))
}

/// n/d · 2^e, correctly rounded to about 64 bits before the f64 cast.
fn ratio_to_f64(n: &BigInt, d: &BigInt, e: i32) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let shift = 64 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 { (n << shift as usize) / d } else { n / (d << (-shift) as usize) };
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(e - shift as i32)
}

/// The four-term rotation sum evaluated exactly in integer arithmetic,
/// rounded once at the end.
pub fn four_fold_kernel_sum_exact(x: Point2, y: Point2) -> Point2 {
    let e = common_exponent(&[x.x1, x.x2, y.x1, y.x2]);
    let (x1, x2) = (scaled_int(x.x1, e), scaled_int(x.x2, e));
    let (y1, y2) = (scaled_int(y.x1, e), scaled_int(y.x2, e));
    let mut num1 = BigInt::zero();
    let mut num2 = BigInt::zero();
    let mut den = BigInt::one();
    for (a, b) in [(&y1, &y2), (&-&y2, &y1), (&-&y1, &-&y2), (&y2, &-&y1)] {
        let d1 = &x1 - a;
        let d2 = &x2 - b;
        let r2 = &d1 * &d1 + &d2 * &d2;
        if r2.is_zero() {
            continue;
        }
        num1 = num1 * &r2 + d1 * &den;
        num2 = num2 * &r2 + d2 * &den;
        den *= r2;
    }
    Point2::new(ratio_to_f64(&num1, &den, -(e as i32)), ratio_to_f64(&num2, &den, -(e as i32)))
}

pub const KERNEL_PAIRS: usize = 100_000;
pub const POLE_MARGIN: f64 = 1e-3;

fn kernel_suite(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Vec<PropertyResult> {
    let sign = if fault == Some(Fault::KernelSign) { -1.0 } else { 1.0 };
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < KERNEL_PAIRS {
        let x = point_in_disc(rng, 10.0);
        let y = point_in_disc(rng, 10.0);
        if relative_pole_distance(x, y) < POLE_MARGIN {
            continue;
        }
        let Ok(c) = four_fold_kernel_closed(x, y) else {
            continue;
        };
        let s = four_fold_kernel_sum_exact(x, y);
        let c = c * sign;
        worst = worst.max((s - c).norm() / s.norm().max(c.norm()).max(f64::MIN_POSITIVE));
        n += 1;
    }
    let mut bundle = 0.0f64;
    let x = Point2::new(1.0, 0.0);
    for _ in 0..1000 {
        let y = Point2::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>());
        let b = numerator_bundles(x, y);
        bundle = bundle.max(b.order1.norm()).max(b.order5.norm());
    }
    let mut trace = 0.0f64;
    for _ in 0..1000 {
        let x = point_in_disc(rng, 2.0);
        let y = point_in_disc(rng, 2.0);
        if (x - y).norm() < 1e-3 {
            continue;
        }
        let t = hessian_kernel(x, y, 1, 1, KernelConvention::PaperRaw).unwrap_or(0.0)
            + hessian_kernel(x, y, 2, 2, KernelConvention::PaperRaw).unwrap_or(0.0);
        trace = trace.max(t.abs() * (x - y).norm_sq());
    }
    vec![
        PropertyResult::at_most("closed four-fold kernel equals the four-term sum (relative)", worst, 1e-10),
        PropertyResult::at_most("order-1 and order-5 numerator bundles vanish for x = (1,0), |y| = 1", bundle, 1e-12),
        PropertyResult::at_most("Hessian kernel is trace-free (scaled by |x-y|^2)", trace, 1e-10),
    ]
}

pub const IDENTITY_SAMPLES: usize = 10_000;

fn identity_suite(rng: &mut ChaCha8Rng) -> Vec<PropertyResult> {
    let mut worst = 0.0f64;
    for _ in 0..IDENTITY_SAMPLES {
        let m = rng.gen_range(3..=8);
        let x = point_in_disc(rng, 10.0);
        let y = point_in_disc(rng, 10.0);
        let r = rotation_identity_residual(x, y, m).expect("m >= 3");
        worst = worst.max(r / (1.0 + x.norm() * y.norm_sq()));
    }
    let p = Point2::new(1.0, 0.0);
    let m2 = rotation_sum(p, p, 2).map(|s| (s - p).norm()).unwrap_or(0.0);
    vec![
        PropertyResult::at_most("rotation identity residual / (1 + |x||y|^2), m in 3..=8", worst, 1e-10),
        PropertyResult::at_least("m = 2 counter-case x = y = (1,0) leaves a residual", m2, 0.5),
    ]
}

pub const APPENDIX_SLOPES: [f64; 3] = [0.5, 1.0, 2.0];

/// Largest |slope| against ln(1/r) of any second difference of the
/// appendix remainder, over r = 2⁻⁴ … 2⁻¹⁰.
pub fn appendix_remainder_slope(c: f64) -> Result<f64> {
    let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-16);
    let sweep = remainder_hessian_sweep(c, 4..=10, &cfg)?;
    let t: Vec<f64> = sweep.iter().map(|(r, _)| (1.0 / r).ln()).collect();
    let mut worst = 0.0f64;
    for (i, j) in [(1, 1), (1, 2), (2, 2)] {
        let v: Vec<f64> = sweep.iter().map(|(_, m)| m.entry(i, j)).collect();
        worst = worst.max(fit_line(&t, &v)?.0.abs());
    }
    Ok(worst)
}

fn appendix_suite() -> Result<Vec<PropertyResult>> {
    APPENDIX_SLOPES
        .iter()
        .map(|&c| {
            let s = appendix_remainder_slope(c)?;
            Ok(PropertyResult::at_most(&format!("remainder Hessian slope, triangle c = {c}"), s, 0.05))
        })
        .collect()
}

/// A random even function with Lipschitz derivative pieces.
pub fn random_even(rng: &mut ChaCha8Rng, n: usize) -> Grid1D {
    let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b = rng.gen_range(-2.0..2.0);
    let c = rng.gen_range(-2.0..2.0);
    let s = rng.gen_range(1.0..20.0);
    let d = rng.gen_range(-1.0..1.0);
    Grid1D::from_fn(n, |t: f64| {
        let wave: f64 = a.iter().enumerate().map(|(k, ak)| ak * ((k + 1) as f64 * std::f64::consts::PI * t).cos()).sum();
        wave + b * t.abs() + c * t * t + d * (s * t).cos() / s
    })
    .expect("grid size is valid")
}

/// A random odd function with |tΦ'| bounded, including a clipped logarithm.
pub fn random_odd(rng: &mut ChaCha8Rng, n: usize) -> Grid1D {
    let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b = rng.gen_range(-2.0..2.0);
    let s = rng.gen_range(1.0..50.0);
    let c = rng.gen_range(-1.0..1.0);
    let l = rng.gen_range(0.5..6.0);
    Grid1D::from_fn(n, |t: f64| {
        let wave: f64 = a.iter().enumerate().map(|(k, ak)| ak * ((k + 1) as f64 * std::f64::consts::PI * t).sin()).sum();
        wave + b * (s * t).atan() + c * t.signum() * t.abs().ln().abs().min(l)
    })
    .expect("grid size is valid")
}

pub const BMO_FAMILY: usize = 100;

fn bmo_suite(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyResult>> {
    let n = DEFAULT_POINTS;
    let mut even_worst = 0.0f64;
    let mut odd_worst = 0.0f64;
    let mut hilbert_worst = 0.0f64;
    let mut split_worst = 0.0f64;
    for _ in 0..BMO_FAMILY {
        let phi = random_even(rng, n);
        let c = even_rate_bound_check(&phi, &phi.derivative())?;
        even_worst = even_worst.max(c.lhs / c.rhs.max(1e-300));
        let big = random_odd(rng, n);
        let d = big.derivative();
        let cmax = (0..n).map(|i| (big.node(i) * d.values()[i]).abs()).fold(0.0, f64::max);
        let c = odd_sup_bound_check(&big, cmax)?;
        odd_worst = odd_worst.max(c.lhs / c.rhs.max(1e-300));
        hilbert_worst = hilbert_worst.max(hilbert(&big).even_defect());
        let mixed = phi.add(&big);
        split_worst = split_worst.max(fefferman_stein_split(&mixed)?.reconstruction_error / mixed.max_abs());
    }
    let sign = Grid1D::from_fn(n, f64::signum)?;
    Ok(vec![
        PropertyResult::at_most("even: max |phi(t)-phi(0)|/|t| over ||phi'||_BMO", even_worst, 1.1),
        PropertyResult::at_most("odd: sup|Phi| over 2||Phi||_BMO + max|t Phi'|", odd_worst, 1.1),
        PropertyResult::at_most("Hilbert transform of odd functions is even", hilbert_worst, 1e-6),
        PropertyResult::at_most("Fefferman-Stein reconstruction error on |t| <= 1/2 (relative)", split_worst, 0.05),
        PropertyResult::at_most("BMO norm of sign(t) is 1", (bmo_norm(&sign) - 1.0).abs(), 1e-12),
    ])
}
