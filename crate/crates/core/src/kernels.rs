//! Gradient and Hessian kernels of the planar logarithmic potential.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{Point2, Rotation};

/// Guard radius for |x - y| below which kernels refuse to evaluate.
pub const POLE_GUARD: f64 = 1e-14;

/// Normalization of the potential.
///
/// `PaperRaw` uses ψ = ∫ log|x−y| g(y) dy, so ∇ψ has kernel (x−y)/|x−y|² and
/// Δψ = 2πg. `Greens` divides by 2π so that Δψ = g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelConvention {
    PaperRaw,
    #[default]
    Greens,
}

impl KernelConvention {
    /// Factor applied to a PaperRaw quantity.
    pub fn factor(self) -> f64 {
        match self {
            KernelConvention::PaperRaw => 1.0,
            KernelConvention::Greens => 1.0 / TAU,
        }
    }
}

impl std::str::FromStr for KernelConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-raw" | "raw" => Ok(KernelConvention::PaperRaw),
            "greens" => Ok(KernelConvention::Greens),
            _ => Err(Error::Config(format!("unknown convention '{s}'"))),
        }
    }
}

#[inline]
fn guarded(d: Point2) -> Result<f64> {
    let r2 = d.norm_sq();
    if r2 < POLE_GUARD * POLE_GUARD {
        Err(Error::Singularity { distance: r2.sqrt() })
    } else {
        Ok(r2)
    }
}

#[inline]
fn raw(x: Point2, y: Point2) -> Result<Point2> {
    let d = x - y;
    let r2 = guarded(d)?;
    Ok(d / r2)
}

/// (x − y)/|x − y|², scaled by the convention.
pub fn grad_kernel(x: Point2, y: Point2, conv: KernelConvention) -> Result<Point2> {
    Ok(raw(x, y)? * conv.factor())
}

/// The four rotated copies of the gradient kernel (PaperRaw).
pub fn four_fold_kernel_sum(x: Point2, y: Point2) -> Result<Point2> {
    let yp = y.perp();
    Ok(raw(x, yp)? + raw(x, y)? + raw(x, -yp)? + raw(x, -y)?)
}

/// Closed rational form of [`four_fold_kernel_sum`]:
///
/// [4x|x|⁶ − 4x|x|²|y|⁴ + 16(x·y)(x·y⊥)(y⊥(x·y) + y(x·y⊥))] /
/// (|x−y|²|x+y|²|x−y⊥|²|x+y⊥|²).
pub fn four_fold_kernel_closed(x: Point2, y: Point2) -> Result<Point2> {
    let yp = y.perp();
    let den = guarded(x - y)? * guarded(x + y)? * guarded(x - yp)? * guarded(x + yp)?;
    let xx = x.norm_sq();
    let yy = y.norm_sq();
    let a = x.dot(y);
    let b = x.dot(yp);
    let radial = 4.0 * xx * (xx - yy) * (xx + yy);
    let mixed = 16.0 * a * b;
    let num = x * radial + (yp * a + y * b) * mixed;
    Ok(num / den)
}

/// Numerator of the 4-fold kernel split by homogeneity degree in x.
#[derive(Debug, Clone, Copy)]
pub struct NumeratorBundles {
    pub order1: Point2,
    pub order3: Point2,
    pub order5: Point2,
    pub order7: Point2,
}

impl NumeratorBundles {
    pub fn total(&self) -> Point2 {
        self.order1 + self.order3 + self.order5 + self.order7
    }
}

/// Expands 4x s(|x|⁴+|y|⁴) − 4y(x·y)(s² − 4(x·y⊥)²) − 4y⊥(x·y⊥)(s² − 4(x·y)²),
/// s = |x|² + |y|², into its terms of degree 1, 3, 5 and 7 in x.
pub fn numerator_bundles(x: Point2, y: Point2) -> NumeratorBundles {
    let yp = y.perp();
    let xx = x.norm_sq();
    let yy = y.norm_sq();
    let a = x.dot(y);
    let b = x.dot(yp);
    let proj = y * a + yp * b;
    NumeratorBundles {
        order1: x * (4.0 * yy * yy * yy) - proj * (4.0 * yy * yy),
        order3: x * (4.0 * xx * yy * yy) - proj * (8.0 * xx * yy)
            + (y * (a * b * b) + yp * (b * a * a)) * 16.0,
        order5: x * (4.0 * xx * xx * yy) - proj * (4.0 * xx * xx),
        order7: x * (4.0 * xx * xx * xx),
    }
}

/// (1/m) Σ_{i=1}^{m} (x − Oⁱy)/|x − Oⁱy|² (PaperRaw).
pub fn m_fold_kernel(x: Point2, y: Point2, m: u32) -> Result<Point2> {
    let rot = Rotation::new(m)?;
    let mut acc = Point2::ZERO;
    for i in 1..=m {
        acc += raw(x, rot.pow(y, i as i64))?;
    }
    Ok(acc / m as f64)
}

/// ∂²/∂x_i∂x_j of the logarithmic kernel, indices 1 or 2.
pub fn hessian_kernel(
    x: Point2,
    y: Point2,
    i: usize,
    j: usize,
    conv: KernelConvention,
) -> Result<f64> {
    if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
        return Err(Error::Domain(format!("Hessian index ({i}, {j}) out of range")));
    }
    let d = x - y;
    let r2 = guarded(d)?;
    let delta = if i == j { r2 } else { 0.0 };
    let v = (delta - 2.0 * d.component(i) * d.component(j)) / (r2 * r2);
    Ok(v * conv.factor())
}
