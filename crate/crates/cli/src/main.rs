//! `symlap`: blow-up probes, the sector-union classifier and verification suites.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symlap::counterexamples::{example_by_id, Example, EXAMPLE_IDS};
use symlap::potential::{blowup_probe, probe_source};
use symlap::sectors::classify_bounded;
use symlap::verify::{run_suite, Fault, Suite, VerifyOptions};
use symlap::{BlowupReport, Error, KernelConvention, Point2, ProbeQuantity, SectorUnion};

use config::ScenarioConfig;

const EXIT_PROPERTY: u8 = 1;
const EXIT_NONCONVERGENCE: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(name = "symlap", version, about = "Regularity probes for the planar Newtonian potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a derivative of ψ on dyadic radii 2^-k and fit a growth law.
    Probe(ProbeArgs),
    /// Decide whether D²ψ of a sector union is bounded near the origin.
    Classify(ClassifyArgs),
    /// Run a seeded property suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ProbeArgs {
    /// Scenario file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Example id, or `sector-union:<json>`.
    #[arg(long, help = format!("Example id: {}", EXAMPLE_IDS.join(", ")))]
    example: Option<String>,
    /// grad-over-r, grad-diff-over-r, hess11, hess12 or hess22.
    #[arg(long)]
    quantity: Option<ProbeQuantity>,
    /// Angle of the probe ray in radians [default: π/4].
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kmin: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    kmax: Option<i32>,
    /// paper-raw or greens.
    #[arg(long)]
    convention: Option<KernelConvention>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Truncation order of the Fourier example.
    #[arg(long)]
    fourier_n: Option<usize>,
    /// Number of scales in the superposition example.
    #[arg(long)]
    prop46_n: Option<u32>,
    /// Where to write the `k,radius,value,fitted` table.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Where to write the summary JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print the resolved scenario as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Sector union JSON, e.g. {"sectors":[{"alpha":0.5,"beta":0}]}, or @path.
    union: String,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Where to write the report in addition to standard output.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Negative control: deliberately break one component.
    #[arg(long, hide = true)]
    inject_fault: Option<Fault>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let outcome = match cli.command {
        Command::Probe(a) => cmd_probe(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        Error::Config(_) | Error::Overlap { .. } | Error::Domain(_) | Error::UndefinedAtDiscontinuity => EXIT_CONFIG,
        _ => EXIT_PROPERTY,
    }
}

/// Caps the global rayon pool at `SYMLAP_THREADS`.
fn init_threads() -> symlap::Result<()> {
    let Ok(v) = std::env::var("SYMLAP_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| Error::Config(format!("SYMLAP_THREADS='{v}' is not a count")))?;
    if n == 0 {
        return Err(Error::Config("SYMLAP_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Config(e.to_string()))
}

/// Prints to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn write_file(path: &Path, contents: &str) -> symlap::Result<()> {
    fs::write(path, contents).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn resolve(a: ProbeArgs) -> symlap::Result<(ScenarioConfig, bool)> {
    let mut c = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            ScenarioConfig::from_json(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(v) = a.example {
        c.example = v;
    }
    if let Some(v) = a.quantity {
        c.quantity = v;
    }
    if let Some(v) = a.direction {
        c.direction = v;
    }
    if let Some(v) = a.kmin {
        c.k_min = v;
    }
    if let Some(v) = a.kmax {
        c.k_max = v;
    }
    if let Some(v) = a.convention {
        c.convention = v;
    }
    if let Some(v) = a.rel_tol {
        c.rel_tol = v;
    }
    if let Some(v) = a.abs_tol {
        c.abs_tol = v;
    }
    if let Some(v) = a.fourier_n {
        c.example_options.fourier_n = v;
    }
    if let Some(v) = a.prop46_n {
        c.example_options.prop46_n = v;
    }
    if a.csv.is_some() {
        c.csv = a.csv;
    }
    if a.json.is_some() {
        c.json = a.json;
    }
    c.validate()?;
    Ok((c, a.print_config))
}

fn run_probe(c: &ScenarioConfig) -> symlap::Result<BlowupReport> {
    let dir = Point2::from_polar(1.0, c.direction);
    let ks = c.k_min..=c.k_max;
    match example_by_id(&c.example, &c.example_options)? {
        Example::Field(f) => blowup_probe(&f, c.quantity, dir, ks, c.convention, &c.quadrature()),
        Example::Analytic(a) => {
            let mut r = probe_source(&a, c.quantity, dir, ks)?;
            r.trusted_kmax = a.trusted_kmax;
            Ok(r)
        }
    }
}

fn cmd_probe(a: ProbeArgs) -> symlap::Result<u8> {
    let (c, print_only) = resolve(a)?;
    if print_only {
        emit(&c.to_json());
        return Ok(0);
    }
    let report = run_probe(&c)?;
    let summary = report.summary_json();
    if let Some(p) = &c.csv {
        write_file(p, &report.to_csv())?;
    }
    if let Some(p) = &c.json {
        write_file(p, &summary)?;
    }
    emit(&summary);
    Ok(0)
}

fn cmd_classify(a: ClassifyArgs) -> symlap::Result<u8> {
    let text = match a.union.strip_prefix('@') {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {p}: {e}")))?,
        None => a.union,
    };
    let u = SectorUnion::from_json(&text)?;
    emit(&classify_bounded(&u).to_json());
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> symlap::Result<u8> {
    let opts = VerifyOptions { seed: a.seed, fault: a.inject_fault, ..VerifyOptions::default() };
    let report = run_suite(a.suite, &opts)?;
    let json = report.to_json();
    if let Some(p) = &a.json {
        write_file(p, &json)?;
    }
    emit(&json);
    Ok(if report.passed() { 0 } else { EXIT_PROPERTY })
}
