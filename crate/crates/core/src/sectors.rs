//! Singular quadratic forms of sector potentials and the boundedness
//! classifier for sector unions.
//!
//! For a region A with a corner at the origin the PaperRaw potential
//! splits as ψ_A = Q(x)·log|x|² + G with G ∈ W^{2,∞} near 0. All forms here
//! carry PaperRaw constants; divide by 2π to compare with Greens Hessians.

use std::ops::{Add, RangeInclusive};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{Point2, SectorUnion, Sym2};
use crate::quadrature::{integrate, QuadratureConfig, Region};

/// Q(x) = q11·x1² + 2·q12·x1x2 + q22·x2².
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SingularQuadraticForm {
    pub q11: f64,
    pub q12: f64,
    pub q22: f64,
}

const ZERO_TOL: f64 = 1e-12;
const CONDITION_TOL: f64 = 1e-10;

impl SingularQuadraticForm {
    pub const ZERO: Self = SingularQuadraticForm { q11: 0.0, q12: 0.0, q22: 0.0 };

    pub fn new(q11: f64, q12: f64, q22: f64) -> Self {
        SingularQuadraticForm { q11, q12, q22 }
    }

    pub fn eval(&self, x: Point2) -> f64 {
        self.q11 * x.x1 * x.x1 + 2.0 * self.q12 * x.x1 * x.x2 + self.q22 * x.x2 * x.x2
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() <= ZERO_TOL
    }

    pub fn max_abs(&self) -> f64 {
        self.q11.abs().max(self.q12.abs()).max(self.q22.abs())
    }

    pub fn matrix(&self) -> Sym2 {
        Sym2::new(self.q11, self.q12, self.q22)
    }

    pub fn scale(&self, s: f64) -> Self {
        SingularQuadraticForm::new(s * self.q11, s * self.q12, s * self.q22)
    }

    /// D²[Q(x)·log|x|²].
    pub fn singular_hessian(&self, x: Point2) -> Sym2 {
        let r2 = x.norm_sq();
        let l = r2.ln();
        let g = Point2::new(2.0 * (self.q11 * x.x1 + self.q12 * x.x2), 2.0 * (self.q12 * x.x1 + self.q22 * x.x2));
        let q = self.eval(x);
        // ∂ij(Q L) = 2q_ij L + (∂iQ ∂jL + ∂jQ ∂iL) + Q ∂ijL, with ∂iL = 2xi/r², ∂ijL = 2δij/r² − 4xixj/r⁴.
        let dl = x * (2.0 / r2);
        let h = |i: usize, j: usize, qij: f64| {
            let delta = if i == j { 1.0 } else { 0.0 };
            let xi = x.component(i);
            let xj = x.component(j);
            2.0 * qij * l
                + g.component(i) * dl.component(j)
                + g.component(j) * dl.component(i)
                + q * (2.0 * delta / r2 - 4.0 * xi * xj / (r2 * r2))
        };
        Sym2::new(h(1, 1, self.q11), h(1, 2, self.q12), h(2, 2, self.q22))
    }
}

impl Add for SingularQuadraticForm {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        SingularQuadraticForm::new(self.q11 + o.q11, self.q12 + o.q12, self.q22 + o.q22)
    }
}

/// Form of the wedge {t1 ≤ θ ≤ t2} of the unit disc.
pub fn wedge_singular_form(t1: f64, t2: f64) -> SingularQuadraticForm {
    let a = ((2.0 * t2).sin() - (2.0 * t1).sin()) / 8.0;
    let b = ((2.0 * t1).cos() - (2.0 * t2).cos()) / 8.0;
    SingularQuadraticForm::new(a, b, -a)
}

/// Form of S^α(0): (sin 2α / 4)·diag(1, −1). The full disc (α = π) gives zero.
pub fn sector_singular_form(alpha: f64) -> Result<SingularQuadraticForm> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::PI) {
        return Err(Error::Domain(format!("half-angle {alpha} outside (0, pi]")));
    }
    let s = (2.0 * alpha).sin() / 4.0;
    let s = if s.abs() < 1e-15 { 0.0 } else { s };
    Ok(SingularQuadraticForm::new(s, 0.0, -s))
}

/// Form of the triangle {0 ≤ y1 ≤ 1, 0 ≤ y2 ≤ c·y1}, a wedge of opening atan c.
pub fn triangle_singular_form(c: f64) -> Result<SingularQuadraticForm> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("triangle slope {c} must be positive")));
    }
    Ok(wedge_singular_form(0.0, c.atan()))
}

/// Form of the region rotated counterclockwise by β: Q'(x) = Q(O_β⁻¹ x).
pub fn rotated_form(form: SingularQuadraticForm, beta: f64) -> SingularQuadraticForm {
    let (s, c) = beta.sin_cos();
    let (a, b, d) = (form.q11, form.q12, form.q22);
    // O M Oᵀ with O = [[c, −s], [s, c]].
    SingularQuadraticForm::new(
        c * c * a - 2.0 * c * s * b + s * s * d,
        c * s * (a - d) + (c * c - s * s) * b,
        s * s * a + 2.0 * c * s * b + c * c * d,
    )
}

/// Σᵢ rotated_form(sector_singular_form(αᵢ), βᵢ).
pub fn union_singular_form(u: &SectorUnion) -> SingularQuadraticForm {
    u.sectors()
        .iter()
        .map(|s| rotated_form(sector_singular_form(s.alpha()).expect("sector half-angle is valid"), s.beta()))
        .fold(SingularQuadraticForm::ZERO, |acc, q| acc + q)
}

/// The three scalar conditions: Q(1,0), Q(0,1), Q(1,1)/2.
pub fn condition_values(form: &SingularQuadraticForm) -> [f64; 3] {
    [form.eval(Point2::new(1.0, 0.0)), form.eval(Point2::new(0.0, 1.0)), 0.5 * form.eval(Point2::new(1.0, 1.0))]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub bounded: bool,
    pub conditions: [f64; 3],
    pub form: SingularQuadraticForm,
    pub sector_count: usize,
    /// Whether the union has at least three sectors.
    pub order_hypothesis_met: bool,
    /// The cotangent/cosecant sums evaluated as written, for comparison.
    pub literal_conditions: [f64; 3],
}

impl ClassifierReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// D²ψ_A is bounded near 0 iff the union form vanishes.
pub fn classify_bounded(u: &SectorUnion) -> ClassifierReport {
    let form = union_singular_form(u);
    let conditions = condition_values(&form);
    ClassifierReport {
        bounded: conditions.iter().all(|c| c.abs() <= CONDITION_TOL),
        conditions,
        form,
        sector_count: u.len(),
        order_hypothesis_met: u.len() >= 3,
        literal_conditions: cotangent_condition_sums(u),
    }
}

/// The three cot/csc sums in their original trigonometric form.
///
/// These coincide with the form criterion when all half-angles are equal,
/// but not in general: S^{π/6}(0) ∪ S^{π/3}(π/2) is a half-disc, whose
/// Hessian is bounded, yet its sums do not vanish.
pub fn cotangent_condition_sums(u: &SectorUnion) -> [f64; 3] {
    let mut out = [0.0; 3];
    for s in u.sectors() {
        if s.is_full_disc() {
            continue;
        }
        let (a, b) = (s.alpha(), s.beta());
        let cot = a.cos() / a.sin();
        let csc2 = 1.0 / (a.sin() * a.sin());
        let csc4 = csc2 * csc2;
        let (sb, cb) = b.sin_cos();
        out[0] += cot * (1.0 / csc2 - 2.0 * (cb * cot + sb).powi(2) / csc4);
        out[1] += cot * (1.0 / csc2 - 2.0 * (-sb * cot + cb).powi(2) / csc4);
        out[2] += cot * (2.0 / csc2 - 2.0 * ((cb - sb) * cot + sb + cb).powi(2) / csc4);
    }
    out
}

/// ∫ log|x − y| dy over the triangle {0 ≤ y1 ≤ 1, 0 ≤ y2 ≤ c·y1}, by cubature.
pub fn appendix_oracle(x: Point2, c: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("triangle slope {c} must be positive")));
    }
    if !x.is_finite() {
        return Err(Error::Domain("evaluation point must be finite".into()));
    }
    let e = integrate(
        |y| {
            let r2 = (x - y).norm_sq();
            if r2 == 0.0 {
                0.0
            } else {
                0.5 * r2.ln()
            }
        },
        &Region::Triangle { c },
        &[x, Point2::ZERO],
        cfg,
    )?;
    Ok(e.value)
}

/// G = oracle − Q·log|x|² for the triangle of slope c.
pub fn appendix_remainder(x: Point2, c: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let q = triangle_singular_form(c)?;
    Ok(appendix_oracle(x, c, cfg)? - q.eval(x) * x.norm_sq().ln())
}

/// Second differences of the remainder G at x, with step h.
pub fn remainder_hessian_fd(x: Point2, c: f64, h: f64, cfg: &QuadratureConfig) -> Result<Sym2> {
    let g = |dx: f64, dy: f64| appendix_remainder(x + Point2::new(dx, dy), c, cfg);
    let g0 = g(0.0, 0.0)?;
    let h11 = (g(h, 0.0)? - 2.0 * g0 + g(-h, 0.0)?) / (h * h);
    let h22 = (g(0.0, h)? - 2.0 * g0 + g(0.0, -h)?) / (h * h);
    let h12 = (g(h, h)? - g(h, -h)? - g(-h, h)? + g(-h, -h)?) / (4.0 * h * h);
    Ok(Sym2::new(h11, h12, h22))
}

/// D²G by second differences at 2⁻ᵏ along the bisector of the triangle, for k in `ks`.
/// The step is a fixed fraction of the distance to the nearest edge.
pub fn remainder_hessian_sweep(c: f64, ks: RangeInclusive<i32>, cfg: &QuadratureConfig) -> Result<Vec<(f64, Sym2)>> {
    let half = 0.5 * c.atan();
    ks.map(|k| {
        let r = 2f64.powi(-k);
        let x = Point2::from_polar(r, half);
        let h = 0.25 * r * half.sin();
        remainder_hessian_fd(x, c, h, cfg).map(|m| (r, m))
    })
    .collect()
}
