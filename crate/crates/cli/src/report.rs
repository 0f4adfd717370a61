//! JSON renderings of inequality reports and winding fields.

use serde::Serialize;

use isowind::geom::to_f64;
use isowind::{InequalityReport, WindingField};

use crate::document::format_rational;

pub const TOOL_NAME: &str = "isowind";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seventeen significant digits, enough to round-trip any f64.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Serialize)]
pub struct StepSummary {
    pub removed_index: usize,
    pub points_before: usize,
    pub area: String,
    pub local_pvar: String,
    /// `local_pvar² / (2 · 2^(2/p)) - area`
    pub area_margin: String,
    /// `2 / (points_before - 1) · pvar^p - local_pvar^p`
    pub existence_margin: String,
}

#[derive(Debug, Serialize)]
pub struct CertificateSummary {
    pub steps: usize,
    pub max_step_area: String,
    pub telescoping_sum: String,
    pub cascade_bound: String,
    pub step_margins: Vec<StepSummary>,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub status: &'static str,
    pub p: f64,
    pub q: f64,
    pub vertices: usize,
    pub pvar: String,
    pub lhs: String,
    /// `lhs^q` exactly, when q is an integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_pow_q_exact: Option<String>,
    pub rhs: String,
    pub ratio: String,
    pub pass: bool,
    pub telescoping_ok: bool,
    pub certificate: CertificateSummary,
}

impl ReportDocument {
    pub fn new(report: &InequalityReport, field: &WindingField) -> Self {
        let cert = &report.certificate;
        let p = report.params.p();
        let q = report.params.q();
        let step_margins = cert
            .steps
            .iter()
            .map(|s| StepSummary {
                removed_index: s.removed_index,
                points_before: s.points_before,
                area: format_rational(&s.area),
                local_pvar: format_real(s.local_pvar),
                area_margin: format_real(s.lemma_bound - to_f64(&s.area)),
                existence_margin: format_real(
                    s.theorem_bound_pow(cert.initial_pvar, p) - s.local_pvar.powf(p),
                ),
            })
            .collect();
        let lhs_pow_q_exact = isowind::lq_norm(field, q)
            .ok()
            .and_then(|n| n.exact_sum)
            .map(|r| format_rational(&r));
        ReportDocument {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            status: if report.pass { "pass" } else { "fail" },
            p,
            q,
            vertices: cert.initial_points,
            pvar: format_real(report.pvar),
            lhs: format_real(report.lhs),
            lhs_pow_q_exact,
            rhs: format_real(report.rhs),
            ratio: format_real(report.ratio),
            pass: report.pass,
            telescoping_ok: report.telescoping_ok,
            certificate: CertificateSummary {
                steps: cert.steps.len(),
                max_step_area: format_rational(&cert.max_step_area()),
                telescoping_sum: format_real(report.telescoping_sum),
                cascade_bound: format_real(report.cascade_bound),
                step_margins,
            },
        }
    }
}

/// Written in place of a report when a certificate check fails.
#[derive(Debug, Serialize)]
pub struct ViolationDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub status: &'static str,
    pub p: f64,
    pub q: f64,
    pub error: String,
}

impl ViolationDocument {
    pub fn new(p: f64, q: f64, error: String) -> Self {
        ViolationDocument {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            status: "theorem-violation",
            p,
            q,
            error,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CellDocument {
    pub polygon: Vec<[String; 2]>,
    pub winding: i64,
    pub area: String,
}

#[derive(Debug, Serialize)]
pub struct FieldDocument {
    pub version: u32,
    pub bbox: [[String; 2]; 2],
    /// `Σ winding · area`
    pub signed_area: String,
    pub cells: Vec<CellDocument>,
}

impl FieldDocument {
    pub fn new(field: &WindingField) -> Self {
        let pt = |p: &isowind::Point| [format_rational(&p.x), format_rational(&p.y)];
        FieldDocument {
            version: 1,
            bbox: [pt(&field.bbox.0), pt(&field.bbox.1)],
            signed_area: format_rational(&field.signed_measure()),
            cells: field
                .cells
                .iter()
                .map(|c| CellDocument {
                    polygon: c.polygon.iter().map(pt).collect(),
                    winding: c.winding,
                    area: format_rational(&c.area),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("document serializes") + "\n"
}
