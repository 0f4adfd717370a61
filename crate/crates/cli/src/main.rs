use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isowind::winding::winding_field;
use isowind::young::check_with_field;
use isowind::{BoundParams, FamilyRegistry, FamilySpec, SweepConfig, SweepOptions};
use isowind_cli::document::{parse_scale, read_curve, CurveDocument};
use isowind_cli::exit::{CliError, EXIT_FAIL, EXIT_PASS, EXIT_VIOLATION};
use isowind_cli::render::heatmap_ppm;
use isowind_cli::report::{to_json, FieldDocument, ReportDocument, ViolationDocument};
use isowind_cli::sweep_io::{csv_line, max_ratio, read_config, sweep_csv, validate_config};

/// Winding-number fields of closed polygonal curves and the L^q bound by
/// their p-variation.
///
/// Exit codes: 0 pass, 1 inequality failed, 2 usage or domain error,
/// 3 internal theorem check violated.
#[derive(Parser)]
#[command(name = "isowind", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a curve document from a named family.
    Gen(GenArgs),
    /// Check the bound for one curve and write a JSON report.
    Check(CheckArgs),
    /// Compute the winding field; optionally render a PPM heatmap.
    Field(FieldArgs),
    /// Run the bound over a grid of curves and (p, q) values; writes CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    /// regular-polygon, closed-random-walk, star, figure-eight or perturbed-polygon.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Positive rational, "num/den" or decimal.
    #[arg(long, default_value = "1")]
    scale: String,
    /// Star polygons: vertex i sits at root i*step mod n.
    #[arg(long)]
    step: Option<usize>,
    /// Output path; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    curve: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    /// q must not exceed 2/p - guard.
    #[arg(long, default_value_t = 0.05)]
    guard: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    curve: PathBuf,
    /// Field document path; standard output when neither this nor --heatmap is given.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    heatmap: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["W", "H"], default_values_t = [64, 64])]
    resolution: Vec<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep configuration.
    #[arg(long, conflicts_with_all = ["acceptance", "family"])]
    config: Option<PathBuf>,
    /// Five families, n in {8,16,32,64}, p in {1,1.25,1.5,1.75,1.9}, four q values each.
    #[arg(long, conflicts_with = "family")]
    acceptance: bool,
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [16])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0])]
    seed: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0])]
    p: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    q_count: usize,
    #[arg(long, default_value_t = 0.05)]
    guard: f64,
    /// Multiply every bound by this factor (harness self-test).
    #[arg(long, default_value_t = 1.0, hide = true)]
    rhs_scale: f64,
    /// Run on a single thread.
    #[arg(long)]
    sequential: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Check(a) => check(a),
        Command::Field(a) => field(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn gen(a: GenArgs) -> Result<u8, CliError> {
    let mut spec = FamilySpec::new(&a.family, a.n)
        .with_seed(a.seed)
        .with_scale(parse_scale(&a.scale)?);
    if let Some(step) = a.step {
        spec = spec.with_step(step);
    }
    let curve = FamilyRegistry::with_builtins().generate(&spec)?;
    emit(a.output.as_deref(), CurveDocument::from_curve(&curve).to_json().as_bytes())?;
    Ok(EXIT_PASS)
}

fn check(a: CheckArgs) -> Result<u8, CliError> {
    let params = BoundParams::new(a.p, a.q)?;
    if a.guard.is_nan() || a.guard < 0.0 {
        return Err(CliError::Usage(format!("guard {} must be non-negative", a.guard)));
    }
    if a.q > 2.0 / a.p - a.guard {
        return Err(CliError::Usage(format!(
            "q = {} exceeds 2/p - guard = {}",
            a.q,
            2.0 / a.p - a.guard
        )));
    }
    let curve = read_curve(&a.curve)?;
    let field = winding_field(&curve);
    match check_with_field(&curve, &field, params, 1.0) {
        Ok(report) => {
            emit(a.output.as_deref(), to_json(&ReportDocument::new(&report, &field)).as_bytes())?;
            if report.pass {
                Ok(EXIT_PASS)
            } else {
                eprintln!("fail: lhs {} > rhs {}", report.lhs, report.rhs);
                Ok(EXIT_FAIL)
            }
        }
        Err(isowind::Error::TheoremViolation(msg)) => {
            eprintln!("theorem violation: {msg}");
            let doc = ViolationDocument::new(a.p, a.q, msg);
            emit(a.output.as_deref(), to_json(&doc).as_bytes())?;
            Ok(EXIT_VIOLATION)
        }
        Err(e) => Err(e.into()),
    }
}

fn field(a: FieldArgs) -> Result<u8, CliError> {
    let (w, h) = (a.resolution[0], a.resolution[1]);
    if !(1..=8192).contains(&w) || !(1..=8192).contains(&h) {
        return Err(CliError::Usage(format!("resolution {w}x{h} outside 1..=8192")));
    }
    let curve = read_curve(&a.curve)?;
    if a.output.is_some() || a.heatmap.is_none() {
        let doc = FieldDocument::new(&winding_field(&curve));
        emit(a.output.as_deref(), to_json(&doc).as_bytes())?;
    }
    if let Some(path) = &a.heatmap {
        emit(Some(path), &heatmap_ppm(&curve, w, h))?;
    }
    Ok(EXIT_PASS)
}

fn sweep(a: SweepArgs) -> Result<u8, CliError> {
    let config = if let Some(path) = &a.config {
        read_config(path)?
    } else if a.acceptance {
        SweepConfig::acceptance()
    } else {
        let mut families = Vec::new();
        for name in &a.family {
            for &n in &a.n {
                for &seed in &a.seed {
                    families.push(FamilySpec::new(name, n).with_seed(seed));
                }
            }
        }
        SweepConfig {
            families,
            p_grid: a.p.clone(),
            q_count: a.q_count,
            guard: a.guard,
        }
    };
    validate_config(&config)?;
    let options = SweepOptions {
        parallel: !a.sequential,
        rhs_scale: a.rhs_scale,
    };
    let rows = isowind::sweep(&FamilyRegistry::with_builtins(), &config, options).map_err(|e| {
        let triple = format!("{} p={} q={}", e.spec, e.p, e.q);
        match e.source {
            isowind::Error::TheoremViolation(msg) => CliError::Violation(format!("{triple}: {msg}")),
            source => CliError::Usage(format!("{triple}: {source}")),
        }
    })?;
    emit(a.output.as_deref(), sweep_csv(&rows).as_bytes())?;

    let failing: Vec<_> = rows.iter().filter(|r| !r.report.pass).collect();
    for row in &failing {
        eprintln!("fail: {}", csv_line(row));
    }
    if let Some(m) = max_ratio(&rows) {
        eprintln!("{} reports, {} failing, max ratio {m:.6}", rows.len(), failing.len());
    }
    Ok(if failing.is_empty() { EXIT_PASS } else { EXIT_FAIL })
}
