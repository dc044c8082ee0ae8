//! Dyadic blow-up probes and growth-law fits.

use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{Field2D, FieldSource};
use super::newton::{eval_grad_psi, eval_hessian_psi_with, HessianMethod};
use crate::error::{Error, Result};
use crate::geom2d::{Point2, Sym2};
use crate::kernels::KernelConvention;
use crate::quadrature::QuadratureConfig;

/// Anything that can report ∇ψ and D²ψ at a point.
pub trait DerivativeSource: Sync {
    fn gradient(&self, x: Point2) -> Result<Point2>;
    fn hessian(&self, x: Point2) -> Result<Sym2>;
}

/// The Newtonian potential of a field, evaluated by quadrature.
pub struct Newtonian<'a> {
    pub field: &'a Field2D,
    pub conv: KernelConvention,
    pub cfg: QuadratureConfig,
    pub method: HessianMethod,
}

impl<'a> Newtonian<'a> {
    pub fn new(field: &'a Field2D, conv: KernelConvention, cfg: QuadratureConfig) -> Self {
        Newtonian { field, conv, cfg, method: HessianMethod::Auto }
    }
}

impl DerivativeSource for Newtonian<'_> {
    fn gradient(&self, x: Point2) -> Result<Point2> {
        eval_grad_psi(self.field, x, self.conv, &self.cfg)
    }

    fn hessian(&self, x: Point2) -> Result<Sym2> {
        eval_hessian_psi_with(self.field, x, self.conv, &self.cfg, self.method)
    }
}

/// Quantity sampled along the probe ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ProbeQuantity {
    /// |∇ψ(x)| / |x|.
    GradOverR,
    /// ∂ij ψ(x), indices 1 or 2.
    HessEntry(usize, usize),
    /// |∇ψ(x) − ∇ψ(0)| / |x|.
    GradDiffOverR,
}

impl fmt::Display for ProbeQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeQuantity::GradOverR => write!(f, "grad-over-r"),
            ProbeQuantity::HessEntry(i, j) => write!(f, "hess{i}{j}"),
            ProbeQuantity::GradDiffOverR => write!(f, "grad-diff-over-r"),
        }
    }
}

impl From<ProbeQuantity> for String {
    fn from(q: ProbeQuantity) -> String {
        q.to_string()
    }
}

impl TryFrom<String> for ProbeQuantity {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl std::str::FromStr for ProbeQuantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grad-over-r" => Ok(ProbeQuantity::GradOverR),
            "grad-diff-over-r" => Ok(ProbeQuantity::GradDiffOverR),
            "hess11" => Ok(ProbeQuantity::HessEntry(1, 1)),
            "hess12" | "hess21" => Ok(ProbeQuantity::HessEntry(1, 2)),
            "hess22" => Ok(ProbeQuantity::HessEntry(2, 2)),
            _ => Err(Error::Config(format!("unknown probe quantity '{s}'"))),
        }
    }
}

/// Fitted asymptotic law near the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthModel {
    Bounded,
    Log,
    RadiusTimesLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub k: i32,
    pub radius: f64,
    pub value: f64,
}

/// Samples of a quantity at radii 2⁻ᵏ and the least-squares fit
/// value ≈ slope·ln(1/r) + constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub quantity: String,
    pub samples: Vec<ProbeSample>,
    pub model: GrowthModel,
    pub slope: f64,
    pub constant: f64,
    pub r_squared: f64,
    /// Largest k whose sample is trustworthy, when the source is truncated.
    pub trusted_kmax: Option<i32>,
}

#[derive(Serialize)]
struct Summary<'a> {
    quantity: &'a str,
    model: GrowthModel,
    slope: f64,
    r_squared: f64,
    constant: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trusted_kmax: Option<i32>,
}

/// Least-squares line through (t, v): (slope, constant, r²).
pub fn fit_line(t: &[f64], v: &[f64]) -> Result<(f64, f64, f64)> {
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let stt: f64 = t.iter().map(|a| (a - mt).powi(2)).sum();
    let stv: f64 = t.iter().zip(v).map(|(a, b)| (a - mt) * (b - mv)).sum();
    let svv: f64 = v.iter().map(|b| (b - mv).powi(2)).sum();
    let spread = v.iter().fold(0.0f64, |m, b| m.max((b - v[0]).abs()));
    let scale = v.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    if stt == 0.0 || spread <= 4.0 * f64::EPSILON * scale {
        return Err(Error::FitDegenerate);
    }
    let slope = stv / stt;
    let constant = mv - slope * mt;
    let ssr: f64 = t.iter().zip(v).map(|(a, b)| (b - slope * a - constant).powi(2)).sum();
    let r2 = if svv > 0.0 { (1.0 - ssr / svv).clamp(0.0, 1.0) } else { 0.0 };
    Ok((slope, constant, r2))
}

fn median_abs(v: &[f64]) -> f64 {
    let mut a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    if n % 2 == 1 {
        a[n / 2]
    } else {
        0.5 * (a[n / 2 - 1] + a[n / 2])
    }
}

impl BlowupReport {
    /// Fits samples and classifies: Bounded when |slope| ≤ 0.05·median|v| + 1e−3.
    pub fn from_samples(quantity: ProbeQuantity, samples: Vec<ProbeSample>) -> Result<Self> {
        Self::from_labelled(&quantity.to_string(), samples, matches!(quantity, ProbeQuantity::GradDiffOverR))
    }

    /// As [`from_samples`](Self::from_samples) with a free-form label; a
    /// logarithmic fit is reported as `RadiusTimesLog` when `radius_law`.
    pub fn from_labelled(label: &str, samples: Vec<ProbeSample>, radius_law: bool) -> Result<Self> {
        if samples.len() < 6 {
            return Err(Error::Config(format!("probe needs at least 6 radii, got {}", samples.len())));
        }
        if samples.windows(2).any(|w| !(w[1].radius < w[0].radius)) {
            return Err(Error::Config("probe radii must strictly decrease".into()));
        }
        let t: Vec<f64> = samples.iter().map(|s| (1.0 / s.radius).ln()).collect();
        let v: Vec<f64> = samples.iter().map(|s| s.value).collect();
        let (slope, constant, r_squared) = fit_line(&t, &v)?;
        let bounded = slope.abs() <= 0.05 * median_abs(&v) + 1e-3;
        let model = match (bounded, radius_law) {
            (true, _) => GrowthModel::Bounded,
            (false, false) => GrowthModel::Log,
            (false, true) => GrowthModel::RadiusTimesLog,
        };
        Ok(BlowupReport { quantity: label.to_string(), samples, model, slope, constant, r_squared, trusted_kmax: None })
    }

    pub fn fitted(&self, s: &ProbeSample) -> f64 {
        self.slope * (1.0 / s.radius).ln() + self.constant
    }

    /// CSV with header `k,radius,value,fitted`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["k", "radius", "value", "fitted"]).expect("in-memory write");
        for s in &self.samples {
            w.write_record([s.k.to_string(), s.radius.to_string(), s.value.to_string(), self.fitted(s).to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("ascii csv")
    }

    /// JSON summary `{quantity, model, slope, r_squared, constant}`.
    pub fn summary_json(&self) -> String {
        let s = Summary {
            quantity: &self.quantity,
            model: self.model,
            slope: self.slope,
            r_squared: self.r_squared,
            constant: self.constant,
            trusted_kmax: self.trusted_kmax,
        };
        serde_json::to_string_pretty(&s).expect("summary serializes")
    }
}

fn unit(direction: Point2) -> Result<Point2> {
    let n = direction.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain("probe direction must be a nonzero vector".into()));
    }
    Ok(direction / n)
}

/// Samples `quantity` at 2⁻ᵏ·direction for k in `ks` (in parallel, assembled by k).
pub fn probe_source(
    src: &dyn DerivativeSource,
    quantity: ProbeQuantity,
    direction: Point2,
    ks: RangeInclusive<i32>,
) -> Result<BlowupReport> {
    let dir = unit(direction)?;
    if let ProbeQuantity::HessEntry(i, j) = quantity {
        if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
            return Err(Error::Config(format!("Hessian entry ({i}, {j}) out of range")));
        }
    }
    let ks: Vec<i32> = ks.collect();
    if ks.len() < 6 {
        return Err(Error::Config(format!("probe needs at least 6 radii, got {}", ks.len())));
    }
    let origin_grad = match quantity {
        ProbeQuantity::GradDiffOverR => Some(src.gradient(Point2::ZERO)?),
        _ => None,
    };
    let samples = ks
        .par_iter()
        .map(|&k| {
            let r = 2f64.powi(-k);
            let x = dir * r;
            let value = match quantity {
                ProbeQuantity::GradOverR => src.gradient(x)?.norm() / r,
                ProbeQuantity::GradDiffOverR => (src.gradient(x)? - origin_grad.unwrap_or_default()).norm() / r,
                ProbeQuantity::HessEntry(i, j) => src.hessian(x)?.entry(i, j),
            };
            Ok(ProbeSample { k, radius: r, value })
        })
        .collect::<Result<Vec<_>>>()?;
    BlowupReport::from_samples(quantity, samples)
}

/// Probe of the Newtonian potential of `field`.
pub fn blowup_probe(
    field: &Field2D,
    quantity: ProbeQuantity,
    direction: Point2,
    ks: RangeInclusive<i32>,
    conv: KernelConvention,
    cfg: &QuadratureConfig,
) -> Result<BlowupReport> {
    if 2f64.powi(-*ks.start()) > field.support_radius() * (1.0 + 1e-12) {
        return Err(Error::Config("largest probe radius lies outside the support".into()));
    }
    probe_source(&Newtonian::new(field, conv, *cfg), quantity, direction, ks)
}

/// Combined Hessian verdict: probes H11 and H12, Log if either grows.
pub fn hessian_verdict(
    src: &dyn DerivativeSource,
    direction: Point2,
    ks: RangeInclusive<i32>,
) -> Result<(GrowthModel, Vec<BlowupReport>)> {
    let mut reports = Vec::new();
    for q in [ProbeQuantity::HessEntry(1, 1), ProbeQuantity::HessEntry(1, 2)] {
        reports.push(probe_source(src, q, direction, ks.clone())?);
    }
    let model = if reports.iter().all(|r| r.model == GrowthModel::Bounded) {
        GrowthModel::Bounded
    } else {
        GrowthModel::Log
    };
    Ok((model, reports))
}

/// sup |x|·|∇g(x)| over seeded random points of the support, with central
/// differences of step 1e−6·|x|.
pub fn gradient_growth_check(field: &Field2D, samples: usize) -> Result<f64> {
    let FieldSource::Analytic(a) = field.source() else {
        return Err(Error::Domain("gradient growth check needs an analytic field".into()));
    };
    let g = |p: Point2| (a.f)(p);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let rmax = field.support_radius();
    let mut sup = 0.0f64;
    for _ in 0..samples {
        let r = rmax * 10f64.powf(-6.0 * rng.gen::<f64>());
        let x = Point2::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>());
        sup = sup.max(scaled_gradient(&g, x));
    }
    Ok(sup)
}

/// |x|·|∇g(x)| by central differences.
pub fn scaled_gradient(g: &dyn Fn(Point2) -> f64, x: Point2) -> f64 {
    let h = 1e-6 * x.norm();
    let e1 = Point2::new(h, 0.0);
    let e2 = Point2::new(0.0, h);
    let gx = (g(x + e1) - g(x - e1)) / (2.0 * h);
    let gy = (g(x + e2) - g(x - e2)) / (2.0 * h);
    x.norm() * gx.hypot(gy)
}
