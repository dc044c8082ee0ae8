use std::process::{Command, Output};

use serde_json::Value;

fn symlap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlap")).args(args).output().expect("binary runs")
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn flower_hessian_is_bounded() {
    let o = symlap(&["probe", "--example", "flower", "--quantity", "hess12", "--kmin", "2", "--kmax", "9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_stdout(&o)["model"], "Bounded");
}

#[test]
fn mirrored_square_hessian_grows_logarithmically() {
    let o = symlap(&["probe", "--example", "square-mirrored", "--quantity", "hess12"]);
    assert!(o.status.success());
    assert_eq!(json_stdout(&o)["model"], "Log");
}

#[test]
fn harmonic_gradient_over_radius_grows_logarithmically() {
    let o = symlap(&["probe", "--example", "harmonic-xy", "--quantity", "grad-over-r"]);
    assert!(o.status.success());
    assert_eq!(json_stdout(&o)["model"], "Log");
}

#[test]
fn fourier_report_carries_trusted_range() {
    let o = symlap(&["probe", "--example", "fourier", "--quantity", "hess12", "--kmin", "1", "--kmax", "6"]);
    assert!(o.status.success());
    assert_eq!(json_stdout(&o)["trusted_kmax"], 6);
}

#[test]
fn probe_writes_csv_and_json_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let json = dir.path().join(format!("{tag}.json"));
        let o = symlap(&[
            "probe",
            "--example",
            "square",
            "--quantity",
            "hess12",
            "--kmin",
            "3",
            "--kmax",
            "9",
            "--csv",
            csv.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        (std::fs::read(csv).unwrap(), std::fs::read(json).unwrap())
    };
    let (c1, j1) = run("a");
    let (c2, j2) = run("b");
    assert_eq!(c1, c2);
    assert_eq!(j1, j2);
    let text = String::from_utf8(c1).unwrap();
    let mut lines = text.split('\n');
    assert_eq!(lines.next(), Some("k,radius,value,fitted"));
    assert_eq!(text.lines().count(), 8);
    assert!(!text.contains('\r'));
    let v: Value = serde_json::from_slice(&j1).unwrap();
    for key in ["quantity", "model", "slope", "r_squared", "constant"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, r#"{"example": "harmonic-xy", "quantity": "hess11", "k_min": 3, "k_max": 10}"#).unwrap();
    let o = symlap(&["probe", "--config", path.to_str().unwrap(), "--quantity", "hess12", "--print-config"]);
    assert!(o.status.success());
    let v = json_stdout(&o);
    assert_eq!(v["example"], "harmonic-xy");
    assert_eq!(v["quantity"], "hess12");
    assert_eq!(v["k_min"], 3);
}

#[test]
fn configuration_errors_exit_3() {
    assert_eq!(symlap(&["probe", "--kmin", "2", "--kmax", "5"]).status.code(), Some(3));
    assert_eq!(symlap(&["probe", "--example", "no-such-example"]).status.code(), Some(3));
    assert_eq!(symlap(&["probe", "--rel-tol", "-1"]).status.code(), Some(3));
    assert_eq!(symlap(&["probe", "--no-such-flag"]).status.code(), Some(3));
    assert_eq!(symlap(&["classify", "{not json"]).status.code(), Some(3));
}

#[test]
fn constant_quantity_is_a_degenerate_fit() {
    let o = symlap(&["probe", "--example", "square", "--quantity", "hess11"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn tight_cell_budget_reports_nonconvergence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, r#"{"example": "flower", "quantity": "hess12", "rel_tol": 1e-300, "abs_tol": 1e-300}"#).unwrap();
    assert_eq!(symlap(&["probe", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let third = std::f64::consts::FRAC_PI_6;
    let petals = format!(
        r#"{{"sectors":[{{"alpha":{third},"beta":0}},{{"alpha":{third},"beta":{}}},{{"alpha":{third},"beta":{}}}]}}"#,
        2.0 * std::f64::consts::FRAC_PI_3,
        4.0 * std::f64::consts::FRAC_PI_3
    );
    let o = symlap(&["classify", &petals]);
    assert!(o.status.success());
    assert_eq!(json_stdout(&o)["bounded"], true);

    let pair = format!(r#"{{"sectors":[{{"alpha":{third},"beta":0}},{{"alpha":{third},"beta":{}}}]}}"#, std::f64::consts::PI);
    let v = json_stdout(&symlap(&["classify", &pair]));
    assert_eq!(v["bounded"], false);
    assert_eq!(v["conditions"].as_array().unwrap().len(), 3);
    for key in ["q11", "q12", "q22"] {
        assert!(v["form"][key].is_number());
    }

    let half = format!(r#"{{"sectors":[{{"alpha":{},"beta":1.0}}]}}"#, std::f64::consts::FRAC_PI_2);
    assert_eq!(json_stdout(&symlap(&["classify", &half]))["bounded"], true);
}

#[test]
fn classify_rejects_overlap() {
    let o = symlap(&["classify", r#"{"sectors":[{"alpha":1,"beta":0},{"alpha":1,"beta":1}]}"#]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_identity_passes_and_records_seed() {
    let o = symlap(&["verify", "identity", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_stdout(&o);
    assert_eq!(v["seed"], 9);
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["status"] == "pass"));
}

#[test]
fn verify_appendix_passes() {
    assert_eq!(symlap(&["verify", "appendix"]).status.code(), Some(0));
}

#[test]
fn verify_kernels_with_injected_fault_fails() {
    assert_eq!(symlap(&["verify", "kernels"]).status.code(), Some(0));
    let o = symlap(&["verify", "kernels", "--inject-fault", "kernel-sign"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json_stdout(&o)["properties"].as_array().unwrap().iter().any(|p| p["status"] == "fail"));
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_symlap"))
        .args(["probe", "--example", "harmonic-xy", "--quantity", "hess12"])
        .env("SYMLAP_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_symlap")).args(["verify", "identity"]).env("SYMLAP_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}
