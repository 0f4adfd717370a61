//! Sweep configuration files and CSV output.
//!
//! ```json
//! {
//!   "families": [{"family": "star", "n": 16, "seed": 7, "scale": "1/2", "step": 3}],
//!   "p_grid": [1.0, 1.5],
//!   "q_count": 4,
//!   "guard": 0.05
//! }
//! ```
//!
//! `seed`, `scale`, `step`, `q_count` (default 4) and `guard` (default 0.05)
//! are optional.

use std::fmt::Write;
use std::path::Path;

use serde::Deserialize;

use isowind::{FamilySpec, SweepConfig, SweepRow};

use crate::document::parse_scale;
use crate::exit::CliError;
use crate::report::format_real;

pub const CSV_HEADER: &str = "family,n,seed,p,q,pvar,lhs,rhs,ratio,steps,pass";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyEntry {
    family: String,
    n: usize,
    #[serde(default)]
    seed: u64,
    scale: Option<String>,
    step: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    families: Vec<FamilyEntry>,
    p_grid: Vec<f64>,
    #[serde(default = "default_q_count")]
    q_count: usize,
    #[serde(default = "default_guard")]
    guard: f64,
}

fn default_q_count() -> usize {
    4
}

fn default_guard() -> f64 {
    0.05
}

pub fn parse_config(text: &str) -> Result<SweepConfig, CliError> {
    let file: ConfigFile =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("sweep config: {e}")))?;
    let mut families = Vec::with_capacity(file.families.len());
    for e in file.families {
        let mut spec = FamilySpec::new(&e.family, e.n).with_seed(e.seed);
        if let Some(s) = e.scale {
            spec = spec.with_scale(parse_scale(&s)?);
        }
        if let Some(step) = e.step {
            spec = spec.with_step(step);
        }
        families.push(spec);
    }
    let config = SweepConfig {
        families,
        p_grid: file.p_grid,
        q_count: file.q_count,
        guard: file.guard,
    };
    validate_config(&config)?;
    Ok(config)
}

pub fn read_config(path: &Path) -> Result<SweepConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}

pub fn validate_config(config: &SweepConfig) -> Result<(), CliError> {
    if let Some(p) = config.p_grid.iter().find(|p| !(1.0..2.0).contains(*p)) {
        return Err(CliError::Domain(isowind::Error::POutOfRange(*p)));
    }
    if config.guard.is_nan() || config.guard < 0.0 {
        return Err(CliError::Usage(format!("guard {} must be non-negative", config.guard)));
    }
    Ok(())
}

pub fn csv_line(row: &SweepRow) -> String {
    let r = &row.report;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        row.spec.family,
        row.spec.n,
        row.spec.seed,
        r.params.p(),
        r.params.q(),
        format_real(r.pvar),
        format_real(r.lhs),
        format_real(r.rhs),
        format_real(r.ratio),
        r.certificate.steps.len(),
        r.pass
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(out, "{}", csv_line(row)).expect("write to string");
    }
    out
}

/// Largest lhs/rhs ratio over the rows, if any.
pub fn max_ratio(rows: &[SweepRow]) -> Option<f64> {
    rows.iter().map(|r| r.report.ratio).reduce(f64::max)
}
