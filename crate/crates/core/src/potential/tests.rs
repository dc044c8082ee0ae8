use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};
use std::sync::Arc;

use approx::assert_abs_diff_eq;

use super::*;
use crate::geom2d::{Point2, Sector, SectorUnion};
use crate::kernels::KernelConvention::{Greens, PaperRaw};
use crate::quadrature::QuadratureConfig;
use crate::Error;

fn disc() -> Field2D {
    Field2D::sector_union(SectorUnion::single(Sector::new(PI, 0.0).unwrap()))
}

fn tight() -> QuadratureConfig {
    QuadratureConfig::with_tolerances(1e-11, 1e-12)
}

#[test]
fn unit_disc_potential_matches_closed_form() {
    let f = disc();
    let cfg = tight();
    for x in [Point2::new(0.3, -0.2), Point2::new(0.0, 0.7), Point2::new(1.5, 0.5)] {
        let r2 = x.norm_sq();
        let (psi, grad) = if r2 < 1.0 { ((r2 - 1.0) / 4.0, x * 0.5) } else { (0.25 * r2.ln(), x / (2.0 * r2)) };
        assert_abs_diff_eq!(eval_psi(&f, x, Greens, &cfg).unwrap(), psi, epsilon = 1e-9);
        assert_abs_diff_eq!(eval_psi_boundary(&f, x, Greens, &cfg).unwrap(), psi, epsilon = 1e-9);
        let g = eval_grad_psi(&f, x, Greens, &cfg).unwrap();
        let gb = eval_grad_psi_boundary(&f, x, Greens, &cfg).unwrap();
        for v in [g, gb] {
            assert_abs_diff_eq!(v.x1, grad.x1, epsilon = 1e-9);
            assert_abs_diff_eq!(v.x2, grad.x2, epsilon = 1e-9);
        }
    }
}

#[test]
fn unit_disc_hessian_is_half_identity_inside() {
    let f = disc();
    let x = Point2::new(0.2, 0.1);
    let loose = QuadratureConfig::with_tolerances(1e-6, 1e-7);
    for (method, cfg) in [(HessianMethod::Boundary, tight()), (HessianMethod::PrincipalValue, loose)] {
        let h = eval_hessian_psi_with(&f, x, Greens, &cfg, method).unwrap();
        assert_abs_diff_eq!(h.h11, 0.5, epsilon = 1e-5);
        assert_abs_diff_eq!(h.h12, 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(h.h22, 0.5, epsilon = 1e-5);
    }
    let raw = eval_hessian_psi(&f, x, PaperRaw, &tight()).unwrap();
    assert_abs_diff_eq!(raw.h11, PI, epsilon = 1e-6);
}

#[test]
fn hessian_trace_is_the_source() {
    let f = Field2D::triangle(0.7).unwrap();
    let cfg = QuadratureConfig::default();
    for (x, g) in [(Point2::new(0.5, 0.1), 1.0), (Point2::new(0.5, -0.1), 0.0), (Point2::new(-0.3, 0.4), 0.0)] {
        let h = eval_hessian_psi(&f, x, Greens, &cfg).unwrap();
        assert_abs_diff_eq!(h.trace(), g, epsilon = 1e-8);
    }
}

#[test]
fn hessian_on_the_boundary_is_undefined() {
    let f = Field2D::triangle(1.0).unwrap();
    let r = eval_hessian_psi(&f, Point2::new(0.5, 0.0), Greens, &QuadratureConfig::default());
    assert!(matches!(r, Err(Error::UndefinedAtDiscontinuity)));
}

#[test]
fn boundary_and_principal_value_routes_agree() {
    // The area route resolves the jump across a slanted edge slowly, hence the loose tolerances.
    let f = Field2D::triangle(0.5).unwrap();
    let cfg = QuadratureConfig::with_tolerances(1e-6, 1e-7);
    for x in [Point2::new(0.4, 0.1), Point2::new(0.3, -0.2), Point2::new(1.2, 0.9)] {
        let b = eval_hessian_psi_with(&f, x, Greens, &cfg, HessianMethod::Boundary).unwrap();
        let p = eval_hessian_psi_with(&f, x, Greens, &cfg, HessianMethod::PrincipalValue).unwrap();
        assert!((b - p).max_abs() < 1e-4, "{b:?} vs {p:?}");
    }
}

#[test]
fn gradient_is_the_derivative_of_psi() {
    let f = Field2D::triangle(1.3).unwrap();
    let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-14);
    let x = Point2::new(0.45, 0.2);
    let h = 1e-4;
    let g = eval_grad_psi(&f, x, Greens, &cfg).unwrap();
    let d1 = (eval_psi_boundary(&f, x + Point2::new(h, 0.0), Greens, &cfg).unwrap()
        - eval_psi_boundary(&f, x - Point2::new(h, 0.0), Greens, &cfg).unwrap())
        / (2.0 * h);
    let d2 = (eval_psi(&f, x + Point2::new(0.0, h), Greens, &cfg).unwrap()
        - eval_psi(&f, x - Point2::new(0.0, h), Greens, &cfg).unwrap())
        / (2.0 * h);
    assert_abs_diff_eq!(g.x1, d1, epsilon = 1e-7);
    assert_abs_diff_eq!(g.x2, d2, epsilon = 1e-7);
}

#[test]
fn hessian_is_the_derivative_of_gradient() {
    let f = Field2D::rose(3).unwrap();
    let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-13);
    let x = Point2::new(0.2, 0.35);
    let h = 1e-4;
    let hess = eval_hessian_psi(&f, x, Greens, &cfg).unwrap();
    let gp = eval_grad_psi_boundary(&f, x + Point2::new(h, 0.0), Greens, &cfg).unwrap();
    let gm = eval_grad_psi_boundary(&f, x - Point2::new(h, 0.0), Greens, &cfg).unwrap();
    assert_abs_diff_eq!(hess.h11, (gp.x1 - gm.x1) / (2.0 * h), epsilon = 1e-6);
    assert_abs_diff_eq!(hess.h12, (gp.x2 - gm.x2) / (2.0 * h), epsilon = 1e-6);
}

#[test]
fn symmetric_field_gradient_uses_wedge_route_consistently() {
    let g = |p: Point2| {
        let r2 = p.norm_sq();
        if r2 >= 1.0 {
            0.0
        } else {
            (1.0 - r2).powi(3) * (1.0 + 0.5 * (4.0 * p.angle()).cos())
        }
    };
    let sym = Field2D::analytic(Arc::new(g), 1.0, 1.5, vec![]).unwrap().with_symmetry(4).unwrap();
    let plain = Field2D::analytic(Arc::new(g), 1.0, 1.5, vec![]).unwrap();
    let cfg = QuadratureConfig::with_tolerances(1e-10, 1e-12);
    let x = Point2::new(0.3, 0.1);
    let a = eval_grad_psi(&sym, x, Greens, &cfg).unwrap();
    let b = eval_grad_psi(&plain, x, Greens, &cfg).unwrap();
    assert_abs_diff_eq!(a.x1, b.x1, epsilon = 1e-8);
    assert_abs_diff_eq!(a.x2, b.x2, epsilon = 1e-8);
}

#[test]
fn asymmetric_field_is_rejected() {
    let g = |p: Point2| if p.norm() < 1.0 && p.x1 > 0.0 { 1.0 } else { 0.0 };
    let r = Field2D::analytic(Arc::new(g), 1.0, 1.0, vec![]).unwrap().with_symmetry(2);
    assert!(matches!(r, Err(Error::Asymmetry { order: 2, .. })));
}

#[test]
fn rotating_the_field_rotates_the_hessian() {
    let cfg = QuadratureConfig::default();
    let beta = FRAC_PI_2;
    let a = Field2D::sector_union(SectorUnion::single(Sector::new(FRAC_PI_6, 0.3).unwrap()));
    let b = Field2D::sector_union(SectorUnion::single(Sector::new(FRAC_PI_6, 0.3 + beta).unwrap()));
    let x = Point2::new(0.2, 0.25);
    let ha = eval_hessian_psi(&a, x, Greens, &cfg).unwrap();
    let hb = eval_hessian_psi(&b, x.rotated(beta), Greens, &cfg).unwrap();
    // A quarter turn swaps the diagonal and flips the off-diagonal.
    assert_abs_diff_eq!(hb.h11, ha.h22, epsilon = 1e-9);
    assert_abs_diff_eq!(hb.h22, ha.h11, epsilon = 1e-9);
    assert_abs_diff_eq!(hb.h12, -ha.h12, epsilon = 1e-9);
}

#[test]
fn disc_probe_is_bounded_and_sector_probe_grows() {
    let cfg = QuadratureConfig::default();
    let dir = Point2::from_polar(1.0, FRAC_PI_4);
    let half = Field2D::sector_union(SectorUnion::single(Sector::new(FRAC_PI_2, 0.0).unwrap()));
    let r = blowup_probe(&half, ProbeQuantity::HessEntry(1, 1), dir, 2..=9, Greens, &cfg).unwrap();
    assert_eq!(r.model, GrowthModel::Bounded);
    let flat = blowup_probe(&disc(), ProbeQuantity::HessEntry(1, 1), dir, 2..=9, Greens, &cfg);
    assert!(matches!(flat, Err(Error::FitDegenerate)));
    let sec = Field2D::sector_union(SectorUnion::single(Sector::new(FRAC_PI_6, 0.0).unwrap()));
    let r = blowup_probe(&sec, ProbeQuantity::HessEntry(1, 1), Point2::new(1.0, 0.0), 2..=14, Greens, &cfg).unwrap();
    assert_eq!(r.model, GrowthModel::Log);
    // H11 ≈ −(sin 2α)/(2π)·ln(1/r) + O(1); corrections decay like r.
    let expected = -(2.0 * FRAC_PI_6).sin() / (2.0 * PI);
    let s = &r.samples;
    let last = (s[12].value - s[11].value) / 2f64.ln();
    assert_abs_diff_eq!(last, expected, epsilon = 1e-4);
}

#[test]
fn probe_report_formats() {
    let samples: Vec<ProbeSample> =
        (1..=6).map(|k| ProbeSample { k, radius: 2f64.powi(-k), value: 2.0 * k as f64 }).collect();
    let r = BlowupReport::from_samples(ProbeQuantity::GradOverR, samples).unwrap();
    assert_eq!(r.model, GrowthModel::Log);
    assert_abs_diff_eq!(r.slope, 2.0 / 2f64.ln(), epsilon = 1e-12);
    let csv = r.to_csv();
    assert!(csv.starts_with("k,radius,value,fitted\n1,0.5,2,"));
    assert_eq!(csv.lines().count(), 7);
    let v: serde_json::Value = serde_json::from_str(&r.summary_json()).unwrap();
    assert_eq!(v["model"], "Log");
    assert_eq!(v["quantity"], "grad-over-r");
}

#[test]
fn probe_report_rejects_degenerate_input() {
    let flat: Vec<ProbeSample> = (1..=6).map(|k| ProbeSample { k, radius: 2f64.powi(-k), value: 1.0 }).collect();
    assert!(matches!(BlowupReport::from_samples(ProbeQuantity::GradOverR, flat), Err(Error::FitDegenerate)));
    let few: Vec<ProbeSample> = (1..=5).map(|k| ProbeSample { k, radius: 2f64.powi(-k), value: k as f64 }).collect();
    assert!(BlowupReport::from_samples(ProbeQuantity::GradOverR, few).is_err());
}

#[test]
fn quantity_names_round_trip() {
    for s in ["grad-over-r", "hess11", "hess12", "hess22", "grad-diff-over-r"] {
        assert_eq!(s.parse::<ProbeQuantity>().unwrap().to_string(), s);
    }
    assert!("hess33".parse::<ProbeQuantity>().is_err());
    let q: ProbeQuantity = serde_json::from_str("\"hess21\"").unwrap();
    assert_eq!(serde_json::to_string(&q).unwrap(), "\"hess12\"");
}

#[test]
fn gradient_growth_is_scale_invariant_for_angular_fields() {
    let g = |p: Point2| if p.norm() < 1.0 { (2.0 * p.angle()).cos() } else { 0.0 };
    let f = Field2D::analytic(Arc::new(g), 1.0, 1.0, vec![]).unwrap();
    let s = gradient_growth_check(&f, 200).unwrap();
    assert!(s > 1.9 && s <= 2.0 + 1e-6, "{s}");
    assert!(gradient_growth_check(&disc(), 10).is_err());
}
