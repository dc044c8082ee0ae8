//! Explicit potentials whose Laplacian is bounded but whose Hessian is not,
//! plus the corner and flower fields, addressable by string id.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{Point2, Rotation, SectorUnion, Sym2};
use crate::jet::Jet2;
use crate::kernels::KernelConvention;
use crate::potential::{DerivativeSource, Field2D, ScalarFn};

/// Radial cutoff: 1 for r ≤ inner, 0 for r ≥ outer, smooth in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec { inner_radius: 1.0, outer_radius: 2.0 }
    }
}

/// σ(1/(1−t) − 1/t) on (0, 1) with its first two derivatives: a C^∞ step from 0 to 1.
fn smooth_step(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let z = 1.0 / (1.0 - t) - 1.0 / t;
    let z1 = 1.0 / (1.0 - t).powi(2) + 1.0 / (t * t);
    let z2 = 2.0 / (1.0 - t).powi(3) - 2.0 / t.powi(3);
    let s = 1.0 / (1.0 + (-z).exp());
    let s1 = s * (1.0 - s);
    if s1 == 0.0 {
        return (s, 0.0, 0.0);
    }
    let s2 = s1 * (1.0 - 2.0 * s);
    (s, s1 * z1, s2 * z1 * z1 + s1 * z2)
}

impl CutoffSpec {
    pub fn new(inner_radius: f64, outer_radius: f64) -> Result<Self> {
        if !(inner_radius > 0.0 && outer_radius > inner_radius && outer_radius.is_finite()) {
            return Err(Error::Domain(format!("cutoff needs 0 < inner < outer, got {inner_radius}, {outer_radius}")));
        }
        Ok(CutoffSpec { inner_radius, outer_radius })
    }

    /// φ(r) with φ'(r) and φ''(r).
    pub fn profile(&self, r: f64) -> (f64, f64, f64) {
        let w = self.outer_radius - self.inner_radius;
        let (s, s1, s2) = smooth_step((r - self.inner_radius) / w);
        (1.0 - s, -s1 / w, -s2 / (w * w))
    }

    pub fn value(&self, p: Point2) -> f64 {
        self.profile(p.norm()).0
    }

    /// φ(|(x, y)|) as a jet.
    pub fn jet(&self, x: Jet2, y: Jet2) -> Jet2 {
        let s = x * x + y * y;
        if s.v <= self.inner_radius * self.inner_radius {
            return Jet2::constant(1.0);
        }
        if s.v >= self.outer_radius * self.outer_radius {
            return Jet2::constant(0.0);
        }
        let r = s.sqrt();
        let (f0, f1, f2) = self.profile(r.v);
        r.chain(f0, f1, f2)
    }
}

pub type JetFn = Arc<dyn Fn(Point2) -> Jet2 + Send + Sync>;

/// A closed-form ψ with exact first and second derivatives.
#[derive(Clone)]
pub struct AnalyticExample {
    pub id: String,
    psi: JetFn,
    laplacian: Option<ScalarFn>,
    pub symmetry_order: u32,
    /// ψ and Δψ vanish outside this radius, when finite.
    pub support_radius: Option<f64>,
    pub singular_points: Vec<Point2>,
    /// Largest dyadic k whose samples reflect the untruncated object.
    pub trusted_kmax: Option<i32>,
    /// Smallest length on which ψ varies; finite-difference steps scale with it.
    pub length_scale: f64,
}

impl std::fmt::Debug for AnalyticExample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticExample").field("id", &self.id).field("symmetry_order", &self.symmetry_order).finish()
    }
}

impl AnalyticExample {
    pub fn jet(&self, x: Point2) -> Jet2 {
        (self.psi)(x)
    }

    pub fn psi(&self, x: Point2) -> f64 {
        self.jet(x).v
    }

    /// The declared Δψ: a closed form when one is given, the jet otherwise.
    pub fn laplacian(&self, x: Point2) -> f64 {
        match &self.laplacian {
            Some(f) => f(x),
            None => self.jet(x).laplacian(),
        }
    }

    /// Fourth-order five-point Laplacian of ψ with step h.
    pub fn fd_laplacian(&self, x: Point2, h: f64) -> f64 {
        let f = |dx: f64, dy: f64| self.psi(x + Point2::new(dx, dy));
        let c = f(0.0, 0.0);
        let d2 = |a: f64, b: f64, a2: f64, b2: f64| (-a2 + 16.0 * a - 30.0 * c + 16.0 * b - b2) / (12.0 * h * h);
        d2(f(h, 0.0), f(-h, 0.0), f(2.0 * h, 0.0), f(-2.0 * h, 0.0))
            + d2(f(0.0, h), f(0.0, -h), f(0.0, 2.0 * h), f(0.0, -2.0 * h))
    }

    /// Fourth-order Laplacian with step 1e−4·length_scale.
    pub fn fd_laplacian_default(&self, x: Point2) -> f64 {
        self.fd_laplacian(x, 1e-4 * self.length_scale)
    }

    /// Δψ as a source field, for examples with compact support.
    pub fn laplacian_field(&self) -> Result<Field2D> {
        let radius = self
            .support_radius
            .ok_or_else(|| Error::Domain(format!("example '{}' has no compact support", self.id)))?;
        let ex = self.clone();
        let g: ScalarFn = Arc::new(move |p: Point2| if p.norm() >= radius { 0.0 } else { ex.laplacian(p) });
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut sup = 0.0f64;
        for _ in 0..20_000 {
            let p = Point2::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
            sup = sup.max(g(p).abs());
        }
        let field = Field2D::analytic(g, radius, 2.0 * sup + 1e-12, self.singular_points.clone())?;
        if self.symmetry_order > 1 {
            field.with_symmetry(self.symmetry_order)
        } else {
            Ok(field)
        }
    }
}

impl DerivativeSource for AnalyticExample {
    fn gradient(&self, x: Point2) -> Result<Point2> {
        Ok(self.jet(x).gradient())
    }

    fn hessian(&self, x: Point2) -> Result<Sym2> {
        Ok(self.jet(x).hessian())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HarmonicChoice {
    XY,
    X2minusY2,
}

/// ψ_P = P(x)·log|x|²·φ(x) for a degree-2 harmonic P.
pub fn harmonic_log_example(choice: HarmonicChoice, cutoff: CutoffSpec) -> AnalyticExample {
    let psi: JetFn = Arc::new(move |p| {
        let (x, y) = Jet2::variables(p);
        if p.x1 == 0.0 && p.x2 == 0.0 {
            return Jet2::constant(0.0);
        }
        let poly = match choice {
            HarmonicChoice::XY => x * y,
            HarmonicChoice::X2minusY2 => x * x - y * y,
        };
        poly * (x * x + y * y).ln() * cutoff.jet(x, y)
    });
    AnalyticExample {
        id: match choice {
            HarmonicChoice::XY => "harmonic-xy",
            HarmonicChoice::X2minusY2 => "harmonic-x2-y2",
        }
        .into(),
        psi,
        laplacian: None,
        symmetry_order: 1,
        support_radius: Some(cutoff.outer_radius),
        singular_points: vec![Point2::ZERO],
        trusted_kmax: None,
        length_scale: 1.0,
    }
}

const FOURIER_SCALE: f64 = 16.0 / (PI * PI);

/// ψ_N = −(16/π²) Σ sin(nx) sin(my) / (nm(n² + m²)) over odd n, m ≤ N, so that
/// Δψ_N is the product of square-wave partial sums and tends to sgn(x)sgn(y).
pub fn fourier_example(n: usize) -> Result<AnalyticExample> {
    if n < 8 {
        return Err(Error::Domain(format!("Fourier truncation {n} below 8")));
    }
    let odd: Arc<Vec<f64>> = Arc::new((1..=n).step_by(2).map(|k| k as f64).collect());
    let modes = odd.clone();
    let psi: JetFn = Arc::new(move |p| {
        let sx: Vec<(f64, f64)> = modes.iter().map(|&k| (k * p.x1).sin_cos()).collect();
        let sy: Vec<(f64, f64)> = modes.iter().map(|&k| (k * p.x2).sin_cos()).collect();
        let mut j = Jet2::constant(0.0);
        for (a, &kn) in modes.iter().enumerate() {
            let (sn, cn) = sx[a];
            for (b, &km) in modes.iter().enumerate() {
                let (sm, cm) = sy[b];
                let d = kn * kn + km * km;
                j.v += sn * sm / (kn * km * d);
                j.dx += cn * sm / (km * d);
                j.dy += sn * cm / (kn * d);
                j.dxx -= kn * sn * sm / (km * d);
                j.dxy += cn * cm / d;
                j.dyy -= km * sn * sm / (kn * d);
            }
        }
        j.scale(-FOURIER_SCALE)
    });
    let laplacian: ScalarFn = Arc::new(move |p: Point2| {
        let wave = |t: f64| odd.iter().map(|&k| (k * t).sin() / k).sum::<f64>() * 4.0 / PI;
        wave(p.x1) * wave(p.x2)
    });
    Ok(AnalyticExample {
        id: "fourier".into(),
        psi,
        laplacian: Some(laplacian),
        symmetry_order: 1,
        support_radius: None,
        singular_points: vec![],
        trusted_kmax: Some((n as f64).log2().floor() as i32 - 2),
        length_scale: 1.0,
    })
}

/// Field χ_{[0,1]²}.
pub fn square_example() -> Field2D {
    Field2D::rects(vec![(Point2::ZERO, Point2::new(1.0, 1.0))]).expect("unit square is valid")
}

/// Field χ_{[0,1]² ∪ [−1,0]²}, symmetric under the half turn.
pub fn square_mirrored_example() -> Field2D {
    Field2D::rects(vec![(Point2::ZERO, Point2::new(1.0, 1.0)), (Point2::new(-1.0, -1.0), Point2::ZERO)])
        .and_then(|f| f.with_symmetry(2))
        .expect("mirrored squares are valid")
}

/// ∫₀¹ log((x2 − y)² / ((x2 − y)² + 1)) dy in closed form.
pub fn square_reduced_d1(x2: f64) -> f64 {
    let f = |u: f64| {
        let a = if u == 0.0 { 0.0 } else { u * (u * u).ln() };
        a - u * (u * u + 1.0).ln() - 2.0 * u.atan()
    };
    f(1.0 - x2) - f(-x2)
}

/// ∂₁ψ(0, x2) for χ_{[0,1]²} under `conv`; the reduced formula is twice the PaperRaw value.
pub fn reduced_in_convention(x2: f64, conv: KernelConvention) -> f64 {
    0.5 * square_reduced_d1(x2) * conv.factor()
}

/// log(s + e^{−1/ε²}) as a jet of s, with the guard kept in the log domain.
fn guarded_log(s: Jet2, eps: f64) -> Jet2 {
    let g = -1.0 / (eps * eps);
    let v = if s.v > 0.0 {
        let l = s.v.ln();
        let (hi, lo) = if l > g { (l, g) } else { (g, l) };
        hi + (lo - hi).exp().ln_1p()
    } else {
        g
    };
    let inv = 1.0 / (s.v + g.exp());
    if inv.is_finite() {
        s.chain(v, inv, -inv * inv)
    } else {
        Jet2::constant(v)
    }
}

/// f̃^ε(x) = ε(x1 − ε)x2·log((x1 − ε)² + x2² + e^{−1/ε²})·φ^ε(x).
fn prop46_tilde(x: Jet2, y: Jet2, eps: f64) -> Jet2 {
    let u = x - eps;
    let bump = CutoffSpec { inner_radius: 0.1 * eps, outer_radius: 0.5 * eps };
    let phi = bump.jet(u, y);
    if phi.v == 0.0 && phi == Jet2::constant(0.0) {
        return Jet2::constant(0.0);
    }
    (u * y * guarded_log(u * u + y * y, eps) * phi).scale(eps)
}

/// f^ε: f̃^ε summed over the four quarter turns.
pub fn prop46_term(x: Jet2, y: Jet2, eps: f64) -> Jet2 {
    prop46_tilde(x, y, eps) + prop46_tilde(-y, x, eps) + prop46_tilde(-x, -y, eps) + prop46_tilde(y, -x, eps)
}

/// ψ = Σ_{n ≤ N} f^{100⁻ⁿ}.
pub fn prop46_example(n: u32) -> Result<AnalyticExample> {
    if !(1..=6).contains(&n) {
        return Err(Error::Domain(format!("Prop 4.6 truncation {n} outside 1..=6")));
    }
    let eps: Vec<f64> = (1..=n).map(|k| 100f64.powi(-(k as i32))).collect();
    let centers: Vec<Point2> = eps
        .iter()
        .flat_map(|&e| [Point2::new(e, 0.0), Point2::new(0.0, e), Point2::new(-e, 0.0), Point2::new(0.0, -e)])
        .chain([Point2::ZERO])
        .collect();
    let terms = eps.clone();
    let psi: JetFn = Arc::new(move |p| {
        let (x, y) = Jet2::variables(p);
        terms.iter().fold(Jet2::constant(0.0), |acc, &e| acc + prop46_term(x, y, e))
    });
    Ok(AnalyticExample {
        id: "prop46".into(),
        psi,
        laplacian: None,
        symmetry_order: 4,
        support_radius: Some(1.5 * eps[0]),
        singular_points: centers,
        trusted_kmax: None,
        length_scale: eps[eps.len() - 1],
    })
}

/// χ_{r ≤ sin 3θ}.
pub fn flower_example() -> Field2D {
    Field2D::rose(3).expect("three petals")
}

/// Mean of |g − Sym_m g| over seeded points of B(0, radius), Sym_m the rotation average.
pub fn symmetrization_gap(g: &dyn Fn(Point2) -> f64, m: u32, radius: f64, samples: usize) -> Result<f64> {
    let rot = Rotation::new(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut total = 0.0;
    for _ in 0..samples {
        let p = Point2::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
        let avg = (0..m as i64).map(|k| g(rot.pow(p, k))).sum::<f64>() / m as f64;
        total += (g(p) - avg).abs();
    }
    Ok(total / samples as f64)
}

/// A registry entry: either a source field or a closed-form potential.
#[derive(Debug)]
pub enum Example {
    Field(Field2D),
    Analytic(AnalyticExample),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExampleOptions {
    pub fourier_n: usize,
    pub prop46_n: u32,
    pub cutoff: CutoffSpec,
}

impl Default for ExampleOptions {
    fn default() -> Self {
        ExampleOptions { fourier_n: 256, prop46_n: 1, cutoff: CutoffSpec::default() }
    }
}

pub const EXAMPLE_IDS: &[&str] =
    &["harmonic-xy", "harmonic-x2-y2", "fourier", "square", "square-mirrored", "prop46", "flower", "sector-union:<json>"];

pub fn example_by_id(id: &str, opts: &ExampleOptions) -> Result<Example> {
    if let Some(json) = id.strip_prefix("sector-union:") {
        return Ok(Example::Field(Field2D::sector_union(SectorUnion::from_json(json)?)));
    }
    Ok(match id {
        "harmonic-xy" => Example::Analytic(harmonic_log_example(HarmonicChoice::XY, opts.cutoff)),
        "harmonic-x2-y2" => Example::Analytic(harmonic_log_example(HarmonicChoice::X2minusY2, opts.cutoff)),
        "fourier" => Example::Analytic(fourier_example(opts.fourier_n)?),
        "square" => Example::Field(square_example()),
        "square-mirrored" => Example::Field(square_mirrored_example()),
        "prop46" => Example::Analytic(prop46_example(opts.prop46_n)?),
        "flower" => Example::Field(flower_example()),
        _ => return Err(Error::Config(format!("unknown example '{id}'; known: {}", EXAMPLE_IDS.join(", ")))),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::potential::{eval_grad_psi, gradient_growth_check, probe_source, scaled_gradient, GrowthModel, ProbeQuantity};
    use crate::quadrature::QuadratureConfig;

    #[test]
    fn cutoff_profile_is_smooth_and_monotone() {
        let c = CutoffSpec::default();
        assert_eq!(c.profile(0.5).0, 1.0);
        assert_eq!(c.profile(2.5).0, 0.0);
        let h = 1e-6;
        for r in [1.1, 1.5, 1.93] {
            let (f, f1, f2) = c.profile(r);
            assert!(f > 0.0 && f < 1.0 && f1 < 0.0);
            assert_abs_diff_eq!(f1, (c.profile(r + h).0 - c.profile(r - h).0) / (2.0 * h), epsilon = 1e-6);
            assert_abs_diff_eq!(f2, (c.profile(r + h).1 - c.profile(r - h).1) / (2.0 * h), epsilon = 1e-5);
        }
        assert!(CutoffSpec::new(2.0, 1.0).is_err());
    }

    #[test]
    fn harmonic_laplacian_near_origin() {
        let ex = harmonic_log_example(HarmonicChoice::XY, CutoffSpec::default());
        for p in [Point2::new(0.3, 0.2), Point2::new(-0.5, 0.7), Point2::new(0.01, -0.02)] {
            assert_abs_diff_eq!(ex.laplacian(p), 8.0 * p.x1 * p.x2 / p.norm_sq(), epsilon = 1e-12);
            assert_abs_diff_eq!(ex.laplacian(p), ex.fd_laplacian(p, 1e-4), epsilon = 1e-6);
        }
        let d = Point2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2) * 0.5;
        assert_abs_diff_eq!(ex.laplacian(d), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn harmonic_hessian_grows_like_log() {
        let ex = harmonic_log_example(HarmonicChoice::XY, CutoffSpec::default());
        let dir = Point2::new(1.0, 1.0);
        let r = probe_source(&ex, ProbeQuantity::HessEntry(1, 2), dir, 2..=12).unwrap();
        assert_eq!(r.model, GrowthModel::Log);
        // ∂12(xy log r²) = log r² + 2: slope −2 per ln(1/r).
        assert_abs_diff_eq!(r.slope, -2.0, epsilon = 1e-9);
        let g = probe_source(&ex, ProbeQuantity::GradOverR, dir, 2..=12).unwrap();
        assert_eq!(g.model, GrowthModel::Log);
        for s in &g.samples {
            let ratio = s.value / (1.0 / s.radius).ln();
            assert!(ratio > 0.5 && ratio < 3.0, "{ratio}");
        }
    }

    #[test]
    fn fourier_laplacian_and_oddness() {
        let ex = fourier_example(256).unwrap();
        assert_abs_diff_eq!(ex.laplacian(Point2::new(1.0, 1.0)), 1.0, epsilon = 0.05);
        for y in [0.1, 0.7, -2.0] {
            assert_eq!(ex.psi(Point2::new(0.0, y)), 0.0);
        }
        let p = Point2::new(0.37, -1.1);
        assert_abs_diff_eq!(ex.jet(p).laplacian(), ex.laplacian(p), epsilon = 1e-10);
        assert_abs_diff_eq!(ex.fd_laplacian(p, 1e-4), ex.laplacian(p), epsilon = 1e-5);
        assert_eq!(ex.trusted_kmax, Some(6));
        assert!(fourier_example(4).is_err());
    }

    #[test]
    fn fourier_mixed_derivative_grows_then_saturates() {
        let ex = fourier_example(64).unwrap();
        let v = |k: i32| {
            let t = 2f64.powi(-k);
            ex.jet(Point2::new(t, t)).dxy
        };
        let d1 = v(3) - v(2);
        let d2 = v(4) - v(3);
        assert!(d1.abs() > 0.2 && d2.abs() > 0.2 && d1.signum() == d2.signum());
        assert!((v(12) - v(11)).abs() < 1e-3);
    }

    #[test]
    fn square_reduced_formula() {
        assert_abs_diff_eq!(square_reduced_d1(0.0), -(2f64.ln()) - PI / 2.0, epsilon = 1e-14);
        // Midpoint-rule cross-check of the closed form.
        let x2 = 0.3;
        let n = 200_000;
        let h = 1.0 / n as f64;
        let direct: f64 = (0..n)
            .map(|i| {
                let u = x2 - (i as f64 + 0.5) * h;
                (u * u / (u * u + 1.0)).ln() * h
            })
            .sum();
        assert_abs_diff_eq!(square_reduced_d1(x2), direct, epsilon = 1e-4);
        assert_abs_diff_eq!(reduced_in_convention(x2, KernelConvention::PaperRaw), 0.5 * direct, epsilon = 1e-4);
    }

    #[test]
    fn square_quadrature_matches_reduced_formula() {
        let f = square_example();
        let cfg = QuadratureConfig::with_tolerances(1e-10, 1e-12);
        for conv in [KernelConvention::PaperRaw, KernelConvention::Greens] {
            let g = eval_grad_psi(&f, Point2::new(0.0, 0.1), conv, &cfg).unwrap();
            assert_abs_diff_eq!(g.x1, reduced_in_convention(0.1, conv), epsilon = 1e-7);
        }
    }

    #[test]
    fn prop46_structure() {
        let ex = prop46_example(1).unwrap();
        let eps = 1e-2;
        let h = ex.jet(Point2::new(eps, 0.0)).hessian();
        assert_abs_diff_eq!(h.h12, -1.0 / eps, epsilon = 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rot = Rotation::new(4).unwrap();
        for _ in 0..200 {
            let p = Point2::from_polar(0.02 * rng.gen::<f64>(), TAU * rng.gen::<f64>());
            assert!((ex.psi(p) - ex.psi(rot.pow(p, 1))).abs() < 1e-10);
        }
        assert!(prop46_example(0).is_err() && prop46_example(7).is_err());
    }

    fn prop46_laplacian_sup(eps: f64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut sup = 0.0f64;
        for _ in 0..4000 {
            let p = Point2::new(eps, 0.0) + Point2::from_polar(0.5 * eps * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
            let (x, y) = Jet2::variables(p);
            sup = sup.max(prop46_term(x, y, eps).laplacian().abs());
        }
        sup
    }

    #[test]
    fn prop46_laplacian_is_order_eps_log_eps() {
        let ratios: Vec<f64> = [1e-2, 1e-4, 1e-6].iter().map(|&e| prop46_laplacian_sup(e) / (e * e.ln().abs())).collect();
        for r in &ratios {
            assert!(*r > 0.5 && *r < 20.0, "{ratios:?}");
        }
        assert!(ratios[2] / ratios[0] < 2.0 && ratios[0] / ratios[2] < 2.0, "{ratios:?}");
    }

    #[test]
    fn prop46_laplacian_matches_finite_differences() {
        let eps = 1e-2;
        let ex = prop46_example(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let p = Point2::new(eps, 0.0) + Point2::from_polar(eps * (0.05 + 0.5 * rng.gen::<f64>()), TAU * rng.gen::<f64>());
            assert_abs_diff_eq!(ex.laplacian(p), ex.fd_laplacian_default(p), epsilon = 1e-5);
        }
    }

    #[test]
    fn prop46_violates_the_gradient_growth_hypothesis() {
        let ex = prop46_example(2).unwrap();
        let field = ex.laplacian_field().unwrap();
        let sup = gradient_growth_check(&field, 4000).unwrap();
        assert!(sup > 10.0, "{sup}");
        // |x||∇g| grows like 1/t at distance t from each center.
        for eps in [1e-2, 1e-4] {
            let g = |p: Point2| ex.laplacian(p);
            let near = |t: f64| scaled_gradient(&g, Point2::new(eps + t, 0.5 * t));
            let ratio = near(eps * 1e-3) / near(eps * 1e-2);
            assert!(ratio > 5.0 && ratio < 20.0, "{ratio}");
        }
    }

    #[test]
    fn lipschitz_field_passes_the_gradient_growth_check() {
        let f = Field2D::analytic(Arc::new(|p: Point2| if p.norm() < 1.0 { p.norm() } else { 0.0 }), 1.0, 1.0, vec![]).unwrap();
        let s = gradient_growth_check(&f, 500).unwrap();
        assert!(s > 0.9 && s < 1.0 + 1e-6, "{s}");
    }

    #[test]
    fn two_fold_examples_are_not_more_symmetric() {
        let h = harmonic_log_example(HarmonicChoice::XY, CutoffSpec::default());
        let f = fourier_example(64).unwrap();
        for m in [3, 4] {
            assert!(symmetrization_gap(&|p| h.laplacian(p), m, 1.0, 2000).unwrap() > 0.1);
            assert!(symmetrization_gap(&|p| f.laplacian(p), m, 3.0, 2000).unwrap() > 0.1);
        }
        assert!(symmetrization_gap(&|p| p.norm(), 3, 1.0, 200).unwrap() < 1e-12);
    }

    #[test]
    fn registry_resolves_every_id() {
        let opts = ExampleOptions { fourier_n: 16, ..Default::default() };
        for id in ["harmonic-xy", "harmonic-x2-y2", "fourier", "square", "square-mirrored", "prop46", "flower"] {
            example_by_id(id, &opts).unwrap();
        }
        let e = example_by_id(r#"sector-union:{"sectors":[{"alpha":0.5,"beta":0.0}]}"#, &opts).unwrap();
        assert!(matches!(e, Example::Field(_)));
        assert!(matches!(example_by_id("nope", &opts), Err(Error::Config(_))));
    }
}
