//! ψ = ∫ log|x − y| g(y) dy and its derivatives, by area quadrature or by
//! boundary integrals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::boundary::{self, boundary_of, distance_to_boundary};
use super::field::{Density, Field2D, FieldSource};
use crate::error::{Error, Result};
use crate::geom2d::{Point2, Rotation, Sym2};
use crate::kernels::KernelConvention;
use crate::quadrature::{integrate_regions, QuadratureConfig, Region};

/// How D²ψ is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HessianMethod {
    /// Boundary integrals for characteristic functions, principal value otherwise.
    #[default]
    Auto,
    Boundary,
    PrincipalValue,
}

const DISCONTINUITY_GUARD: f64 = 1e-12;

fn density(field: &Field2D, d: Density, y: Point2) -> f64 {
    match d {
        Density::One => 1.0,
        Density::Field => field.value(y),
    }
}

/// ψ(x) by area quadrature of the logarithmic kernel.
pub fn eval_psi(field: &Field2D, x: Point2, conv: KernelConvention, cfg: &QuadratureConfig) -> Result<f64> {
    let regions = field.regions();
    let shapes: Vec<Region> = regions.iter().map(|r| r.0.clone()).collect();
    let mut singular = field.singular_points();
    singular.push(x);
    let e = integrate_regions(
        |y, tag| {
            let r2 = (x - y).norm_sq();
            if r2 == 0.0 {
                return [0.0];
            }
            [0.5 * r2.ln() * density(field, regions[tag].1, y)]
        },
        &shapes,
        &singular,
        cfg,
    )?;
    Ok(e.value[0] * conv.factor())
}

/// ∇ψ(x) by area quadrature. For a field of symmetry order m > 1 the
/// integral runs over the wedge 0 ≤ θ ≤ 2π/m with the m rotated kernels.
pub fn eval_grad_psi(field: &Field2D, x: Point2, conv: KernelConvention, cfg: &QuadratureConfig) -> Result<Point2> {
    let m = field.symmetry_order();
    let regions = if m > 1 { field.wedge_regions(m) } else { field.regions() };
    let shapes: Vec<Region> = regions.iter().map(|r| r.0.clone()).collect();
    let rot = Rotation::new(m)?;
    let mut singular = field.singular_points();
    for i in 0..m {
        singular.push(rot.pow(x, -(i as i64)));
    }
    let e = integrate_regions(
        |y, tag| {
            let g = density(field, regions[tag].1, y);
            if g == 0.0 {
                return [0.0, 0.0];
            }
            let mut acc = Point2::ZERO;
            for i in 0..m {
                let d = x - rot.pow(y, i as i64);
                let r2 = d.norm_sq();
                if r2 > 0.0 {
                    acc += d / r2;
                }
            }
            [acc.x1 * g, acc.x2 * g]
        },
        &shapes,
        &singular,
        cfg,
    )?;
    Ok(Point2::new(e.value[0], e.value[1]) * conv.factor())
}

/// ∇ψ(x) from boundary integrals; characteristic functions only.
pub fn eval_grad_psi_boundary(
    field: &Field2D,
    x: Point2,
    conv: KernelConvention,
    cfg: &QuadratureConfig,
) -> Result<Point2> {
    let curves = boundary_of(field).ok_or_else(|| Error::Domain("boundary route needs an indicator field".into()))?;
    Ok(boundary::gradient_raw(&curves, x, cfg)? * conv.factor())
}

/// ψ(x) from boundary integrals; characteristic functions only.
pub fn eval_psi_boundary(field: &Field2D, x: Point2, conv: KernelConvention, cfg: &QuadratureConfig) -> Result<f64> {
    let curves = boundary_of(field).ok_or_else(|| Error::Domain("boundary route needs an indicator field".into()))?;
    Ok(boundary::psi_raw(&curves, x, cfg)? * conv.factor())
}

/// D²ψ(x) with the default method.
pub fn eval_hessian_psi(field: &Field2D, x: Point2, conv: KernelConvention, cfg: &QuadratureConfig) -> Result<Sym2> {
    eval_hessian_psi_with(field, x, conv, cfg, HessianMethod::Auto)
}

pub fn eval_hessian_psi_with(
    field: &Field2D,
    x: Point2,
    conv: KernelConvention,
    cfg: &QuadratureConfig,
    method: HessianMethod,
) -> Result<Sym2> {
    let curves = boundary_of(field);
    let use_boundary = match method {
        HessianMethod::Auto => curves.is_some(),
        HessianMethod::Boundary => {
            if curves.is_none() {
                return Err(Error::Domain("boundary route needs an indicator field".into()));
            }
            true
        }
        HessianMethod::PrincipalValue => false,
    };
    if let Some(c) = &curves {
        if distance_to_boundary(c, x) < DISCONTINUITY_GUARD {
            return Err(Error::UndefinedAtDiscontinuity);
        }
    }
    let raw = if use_boundary {
        let h = boundary::hessian_raw(curves.as_deref().unwrap_or_default(), x, cfg)?;
        Sym2::new(h[0], 0.5 * (h[1] + h[2]), h[3])
    } else {
        hessian_principal_value(field, x, cfg)?
    };
    Ok(raw.scale(conv.factor()))
}

/// PV∫ K(x−y) g(y) dy + π g(x) I with the kernel K of ∂ij log. The
/// singular part is taken against g(y) − g(x)φ(|y − x|), φ a radial
/// bump equal to 1 near x, whose own PV integral vanishes.
fn hessian_principal_value(field: &Field2D, x: Point2, cfg: &QuadratureConfig) -> Result<Sym2> {
    let gx = field.value(x);
    let rho = if gx == 0.0 {
        0.0
    } else {
        let edge = match boundary_of(field) {
            Some(c) => distance_to_boundary(&c, x),
            None => support_gap(field, x),
        };
        1e-2f64.min(0.5 * x.norm()).min(0.9 * edge).max(cfg.singular_split_radius)
    };
    let regions = field.regions();
    let shapes: Vec<Region> = regions.iter().map(|r| r.0.clone()).collect();
    let mut singular = field.singular_points();
    singular.push(x);
    let e = integrate_regions(
        |y, tag| {
            let d = x - y;
            let r2 = d.norm_sq();
            if r2 == 0.0 {
                return [0.0; 3];
            }
            let g = density(field, regions[tag].1, y) - gx * bump(r2.sqrt(), rho);
            let r4 = r2 * r2;
            [
                g * (r2 - 2.0 * d.x1 * d.x1) / r4,
                g * (-2.0 * d.x1 * d.x2) / r4,
                g * (r2 - 2.0 * d.x2 * d.x2) / r4,
            ]
        },
        &shapes,
        &singular,
        cfg,
    )?;
    Ok(Sym2::new(e.value[0] + PI * gx, e.value[1], e.value[2] + PI * gx))
}

/// 1 on [0, ρ/2], quintic smoothstep down to 0 at ρ.
fn bump(r: f64, rho: f64) -> f64 {
    if r <= 0.5 * rho {
        return 1.0;
    }
    if r >= rho {
        return 0.0;
    }
    let t = 2.0 * r / rho - 1.0;
    1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
}

/// Distance from x to the edge of the region where a non-indicator field lives.
fn support_gap(field: &Field2D, x: Point2) -> f64 {
    match field.source() {
        FieldSource::Sampled(g) => {
            (x.x1 - g.min.x1).min(g.max.x1 - x.x1).min(x.x2 - g.min.x2).min(g.max.x2 - x.x2).max(0.0)
        }
        _ => (field.support_radius() - x.norm()).max(0.0),
    }
}
