//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symlap::counterexamples::{
    fourier_example, harmonic_log_example, prop46_example, prop46_term, reduced_in_convention, square_example,
    square_reduced_d1, AnalyticExample, CutoffSpec, HarmonicChoice,
};
use symlap::geom2d::{rotation_identity_residual, rotation_sum};
use symlap::jet::Jet2;
use symlap::kernels::{four_fold_kernel_closed, numerator_bundles};
use symlap::potential::{
    eval_grad_psi, eval_hessian_psi, fit_line, hessian_verdict, probe_source, Newtonian, ProbeQuantity,
};
use symlap::quadrature::scaled_kernel_bound;
use symlap::sectors::classify_bounded;
use symlap::verify::{
    appendix_remainder_slope, four_fold_kernel_sum_exact, relative_pole_distance, run_suite, Suite, VerifyOptions,
    APPENDIX_SLOPES,
};
use symlap::{Error, Field2D, GrowthModel, KernelConvention, Point2, QuadratureConfig, Sector, SectorUnion};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn seeded() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(42)
}

fn in_disc(rng: &mut ChaCha8Rng, r: f64) -> Point2 {
    Point2::from_polar(r * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn rotation_identity() -> Outcome {
    let mut rng = seeded();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let m = rng.gen_range(3..=8);
        let x = in_disc(&mut rng, 10.0);
        let y = in_disc(&mut rng, 10.0);
        let r = rotation_identity_residual(x, y, m).expect("m >= 3");
        worst = worst.max(r / (1.0 + x.norm() * y.norm_sq()));
    }
    let e = Point2::new(1.0, 0.0);
    let m2 = (rotation_sum(e, e, 2).expect("m = 2") - e * e.norm_sq()).norm();
    outcome(worst <= 1e-10 && m2 > 0.5, format!("max scaled residual {worst:.2e} (<= 1e-10); m = 2 residual {m2} (> 0.5)"))
}

fn kernel_equivalence() -> Outcome {
    let mut rng = seeded();
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 100_000 {
        let x = in_disc(&mut rng, 10.0);
        let y = in_disc(&mut rng, 10.0);
        if relative_pole_distance(x, y) < 1e-3 {
            continue;
        }
        let c = four_fold_kernel_closed(x, y).expect("away from poles");
        let s = four_fold_kernel_sum_exact(x, y);
        worst = worst.max((s - c).norm() / s.norm().max(c.norm()));
        n += 1;
    }
    let x = Point2::new(1.0, 0.0);
    let mut bundle = 0.0f64;
    for i in 0..1000 {
        let y = Point2::from_polar(1.0, TAU * (i as f64 + 0.5) / 1000.0);
        let b = numerator_bundles(x, y);
        bundle = bundle.max(b.order1.norm()).max(b.order5.norm());
    }
    outcome(
        worst <= 1e-10 && bundle <= 1e-12,
        format!("max relative gap {worst:.2e} over 1e5 pairs (<= 1e-10); order-1/5 bundles {bundle:.1e} (<= 1e-12)"),
    )
}

fn main_lemma_bound() -> Outcome {
    let cfg = QuadratureConfig::with_tolerances(1e-6, 1e-9);
    let ks: Vec<i32> = (2..=10).collect();
    let ratios = |m: u32| -> Result<Vec<f64>, Error> {
        ks.iter().map(|&k| scaled_kernel_bound(Point2::new(2f64.powi(-k), 0.0), m, &cfg)).collect()
    };
    let mut pass = true;
    let mut detail = Vec::new();
    for m in [4, 3] {
        match ratios(m) {
            Ok(v) => {
                let med = median(&v);
                let spread = v.iter().map(|r| (r - med).abs()).fold(0.0, f64::max) / med;
                pass &= spread <= 0.2;
                detail.push(format!("m={m} spread {:.1}% (<= 20%)", 100.0 * spread));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("m={m} error {e}"));
            }
        }
    }
    match ratios(2) {
        Ok(v) => {
            let t: Vec<f64> = ks.iter().map(|&k| k as f64 * 2f64.ln()).collect();
            let (slope, _, r2) = fit_line(&t, &v).unwrap_or((0.0, 0.0, 0.0));
            let med = median(&v);
            pass &= slope >= 0.2 * med && r2 >= 0.95;
            detail.push(format!("m=2 slope/median {:.3} (>= 0.2), R^2 {r2:.4} (>= 0.95)", slope / med));
        }
        Err(e) => {
            pass = false;
            detail.push(format!("m=2 error {e}"));
        }
    }
    outcome(pass, detail.join("; "))
}

fn appendix_remainder() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for c in APPENDIX_SLOPES {
        match appendix_remainder_slope(c) {
            Ok(s) => {
                pass &= s <= 0.05;
                detail.push(format!("c={c}: {s:.4}"));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("c={c}: {e}"));
            }
        }
    }
    outcome(pass, format!("max remainder Hessian slope {} (<= 0.05)", detail.join(", ")))
}

fn sector_suite() -> Vec<(&'static str, SectorUnion)> {
    let s = |a: f64, b: f64| Sector::new(a, b).expect("valid sector");
    let u = |v: Vec<Sector>| SectorUnion::new(v).expect("disjoint");
    vec![
        ("A = S(pi/6,0) + S(pi/6,pi/2)", u(vec![s(FRAC_PI_6, 0.0), s(FRAC_PI_6, FRAC_PI_2)])),
        ("B = S(pi/6,0) + S(pi/6,pi)", u(vec![s(FRAC_PI_6, 0.0), s(FRAC_PI_6, PI)])),
        (
            "three petals",
            u(vec![s(FRAC_PI_6, 0.0), s(FRAC_PI_6, 2.0 * FRAC_PI_3), s(FRAC_PI_6, 4.0 * FRAC_PI_3)]),
        ),
        ("S(pi/2,1)", u(vec![s(FRAC_PI_2, 1.0)])),
        ("S(pi/6,0)", u(vec![s(FRAC_PI_6, 0.0)])),
        ("S(pi/4,pi/4)", u(vec![s(FRAC_PI_4, FRAC_PI_4)])),
        ("split half disc S(pi/6,0) + S(pi/3,pi/2)", u(vec![s(FRAC_PI_6, 0.0), s(FRAC_PI_3, FRAC_PI_2)])),
        ("S(pi/3,0) + S(pi/6,pi)", u(vec![s(FRAC_PI_3, 0.0), s(FRAC_PI_6, PI)])),
    ]
}

fn classifier_agreement() -> Outcome {
    let cfg = QuadratureConfig::default();
    let dir = Point2::from_polar(1.0, FRAC_PI_4 + 0.01);
    let suite = sector_suite();
    let mut agree = 0;
    let mut detail = Vec::new();
    let mut decisions = (0, 0);
    for (name, u) in &suite {
        let bounded = classify_bounded(u).bounded;
        let field = Field2D::sector_union(u.clone());
        let src = Newtonian::new(&field, KernelConvention::Greens, cfg);
        let verdict = hessian_verdict(&src, dir, 2..=12).map(|(m, _)| m);
        let ok = matches!(verdict, Ok(m) if (m == GrowthModel::Bounded) == bounded);
        if bounded {
            decisions.0 += 1;
        } else {
            decisions.1 += 1;
        }
        if ok {
            agree += 1;
        } else {
            detail.push(format!("{name}: classifier {bounded}, probe {verdict:?}"));
        }
    }
    outcome(
        agree == suite.len() && decisions.0 > 0 && decisions.1 > 0,
        format!(
            "{agree}/{} agree ({} bounded, {} unbounded){}",
            suite.len(),
            decisions.0,
            decisions.1,
            if detail.is_empty() { String::new() } else { format!("; {}", detail.join("; ")) }
        ),
    )
}

fn square_corner() -> Outcome {
    let d0 = square_reduced_d1(0.0);
    let exact = -(2f64.ln()) - FRAC_PI_2;
    let ks: Vec<i32> = (3..=10).collect();
    let t: Vec<f64> = ks.iter().map(|&k| k as f64 * 2f64.ln()).collect();
    let q: Vec<f64> = ks
        .iter()
        .map(|&k| {
            let x2 = 2f64.powi(-k);
            (square_reduced_d1(x2) - d0) / x2
        })
        .collect();
    let slope = fit_line(&t, &q).map(|f| f.0).unwrap_or(f64::NAN);
    let field = square_example();
    let cfg = QuadratureConfig::with_tolerances(1e-10, 1e-12);
    let x = Point2::new(0.0, 0.1);
    let conv = KernelConvention::PaperRaw;
    let quad = eval_grad_psi(&field, x, conv, &cfg).map(|g| g.x1).unwrap_or(f64::NAN);
    let gap = (quad - reduced_in_convention(0.1, conv)).abs();
    outcome(
        (d0 - exact).abs() <= 1e-6 && (slope + 2.0).abs() <= 0.2 && gap <= 1e-5,
        format!(
            "d1psi(0,0) = {d0:.9} (target {exact:.9}); quotient slope {slope:.4} (-2 +/- 10%); quadrature gap at (0,0.1) {gap:.1e} (<= 1e-5)"
        ),
    )
}

fn counterexample_laws() -> Outcome {
    let dir = Point2::from_polar(1.0, FRAC_PI_4);
    let harmonic = harmonic_log_example(HarmonicChoice::XY, CutoffSpec::default());
    let h = probe_source(&harmonic, ProbeQuantity::GradOverR, dir, 2..=12).map(|r| r.model);
    let fourier = fourier_example(256).expect("n >= 8");
    let kmax = fourier.trusted_kmax.unwrap_or(6);
    let f = probe_source(&fourier, ProbeQuantity::HessEntry(1, 2), dir, (kmax - 5)..=kmax);
    let (f_ok, f_detail) = match &f {
        Ok(r) => {
            let growing = r.samples.windows(2).all(|w| w[1].value.abs() > w[0].value.abs());
            (r.r_squared >= 0.95 && growing, format!("fourier k={}..{kmax} R^2 {:.4}, slope {:.4}", kmax - 5, r.r_squared, r.slope))
        }
        Err(e) => (false, format!("fourier error {e}")),
    };
    let eps = 1e-2;
    let (x, y) = Jet2::variables(Point2::new(eps, 0.0));
    let d2 = prop46_term(x, y, eps).hessian().max_abs() * eps;
    outcome(
        h == Ok(GrowthModel::Log) && f_ok && (0.1..=10.0).contains(&d2),
        format!("harmonic-xy grad-over-r {h:?}; {f_detail}; prop46 |D2 f|*eps = {d2:.4} (in [0.1, 10])"),
    )
}

fn trace_field_variants() -> Vec<(&'static str, Field2D)> {
    let harmonic = harmonic_log_example(HarmonicChoice::XY, CutoffSpec::default());
    let wave: symlap::potential::ScalarFn =
        Arc::new(|p: Point2| if p.norm() < 1.0 { (1.0 - p.norm_sq()).powi(2) * (1.0 + p.x1) } else { 0.0 });
    vec![
        ("sector union", Field2D::sector_union(sector_suite()[1].1.clone())),
        ("triangle", Field2D::triangle(1.0).expect("c > 0")),
        ("square", square_example()),
        ("flower", Field2D::rose(3).expect("three petals")),
        ("harmonic Laplacian", harmonic.laplacian_field().expect("compact support")),
        ("smooth bump", Field2D::analytic(wave, 1.0, 2.0, vec![]).expect("valid field")),
    ]
}

fn analytic_consistency() -> Outcome {
    let cfg = QuadratureConfig::default();
    let variants = trace_field_variants();
    let mut rng = seeded();
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut failures = Vec::new();
    for i in 0..100 {
        let (name, field) = &variants[i % variants.len()];
        let reach = 1.2 * field.support_radius();
        loop {
            let x = in_disc(&mut rng, reach);
            if x.norm() < 1e-3 {
                continue;
            }
            match eval_hessian_psi(field, x, KernelConvention::Greens, &cfg) {
                Ok(h) => {
                    worst = worst.max((h.trace() - field.value(x)).abs());
                    checked += 1;
                    break;
                }
                Err(Error::UndefinedAtDiscontinuity) => continue,
                Err(e) => {
                    failures.push(format!("{name}: {e}"));
                    break;
                }
            }
        }
    }
    let examples: Vec<AnalyticExample> = vec![
        harmonic_log_example(HarmonicChoice::XY, CutoffSpec::default()),
        harmonic_log_example(HarmonicChoice::X2minusY2, CutoffSpec::default()),
        fourier_example(256).expect("n >= 8"),
        prop46_example(1).expect("n = 1"),
        prop46_example(2).expect("n = 2"),
    ];
    let mut fd_worst = 0.0f64;
    for ex in &examples {
        let reach = ex.support_radius.map_or(3.0, |r| 1.1 * r);
        let mut n = 0;
        while n < 20 {
            let x = in_disc(&mut rng, reach);
            let near = ex.singular_points.iter().any(|c| (x - *c).norm() < 0.05 * ex.length_scale);
            if near || x.norm() < 0.05 * ex.length_scale {
                continue;
            }
            fd_worst = fd_worst.max((ex.laplacian(x) - ex.fd_laplacian_default(x)).abs());
            n += 1;
        }
    }
    outcome(
        failures.is_empty() && checked == 100 && worst <= 1e-4 && fd_worst <= 1e-5,
        format!(
            "trace - g max {worst:.1e} over {checked} points (<= 1e-4); Laplacian vs finite differences max {fd_worst:.1e} (<= 1e-5){}",
            if failures.is_empty() { String::new() } else { format!("; errors: {}", failures.join("; ")) }
        ),
    )
}

fn one_dimensional_suite() -> Outcome {
    match run_suite(Suite::Bmo, &VerifyOptions::default()) {
        Ok(r) => {
            let parts: Vec<String> =
                r.properties.iter().map(|p| format!("{} {:.2e} ({:.2e})", p.name, p.measured, p.threshold)).collect();
            outcome(r.passed(), parts.join("; "))
        }
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn flower() -> Outcome {
    let field = Field2D::rose(3).expect("three petals");
    let cfg = QuadratureConfig::default();
    let src = Newtonian::new(&field, KernelConvention::Greens, cfg);
    match probe_source(&src, ProbeQuantity::HessEntry(1, 2), Point2::from_polar(1.0, FRAC_PI_4), 2..=9) {
        Ok(r) => {
            let med = median(&r.samples.iter().map(|s| s.value.abs()).collect::<Vec<_>>());
            outcome(
                r.model == GrowthModel::Bounded,
                format!("hess12 model {:?}, |slope| {:.4} vs threshold {:.4}", r.model, r.slope.abs(), 0.05 * med + 1e-3),
            )
        }
        Err(e) => outcome(false, format!("error {e}")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("rotation identity", rotation_identity, Duration::from_secs(1)),
        ("kernel equivalence", kernel_equivalence, Duration::from_secs(10)),
        ("main-lemma bound", main_lemma_bound, Duration::from_secs(300)),
        ("appendix remainder regularity", appendix_remainder, Duration::from_secs(300)),
        ("classifier/probe agreement", classifier_agreement, Duration::from_secs(900)),
        ("square corner", square_corner, Duration::from_secs(120)),
        ("counterexample laws", counterexample_laws, Duration::from_secs(180)),
        ("analytic consistency", analytic_consistency, Duration::from_secs(300)),
        ("1D suite", one_dimensional_suite, Duration::from_secs(60)),
        ("flower", flower, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let pass = o.pass && took <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} [{:.2?} of {:?}] {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            took,
            budget,
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
