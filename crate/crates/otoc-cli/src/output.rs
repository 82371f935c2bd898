//! Serialization with stable, diff-friendly layouts.
//!
//! CSV: `.` decimal separator, 17 significant digits, no quoting needed
//! (every field is numeric or a bare word), `\n` line endings, one header
//! row. JSON: a single object `{config, rows, summary}` with struct-ordered
//! keys. Identical configs produce byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, FormatSpec};
use crate::error::{CliError, CliResult};
use crate::experiment::{DataRow, ExperimentOutput, VerificationRow};

/// 17 significant digits — enough to round-trip any f64 exactly.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

/// The fixed data header; fidelity runs append the two extra columns.
pub fn data_header(fotoc_columns: bool) -> &'static str {
    if fotoc_columns {
        "t,C,C1,C2,ReC3,ImC3,C_theory,rel_err,F_O,C_approx"
    } else {
        "t,C,C1,C2,ReC3,ImC3,C_theory,rel_err"
    }
}

/// One data row as a header-ordered CSV line (no trailing newline).
pub fn render_data_row(r: &DataRow, fotoc_columns: bool) -> String {
    let mut s = String::new();
    s.push_str(&r.t.to_string());
    s.push(',');
    s.push_str(&format_real(r.c));
    s.push(',');
    s.push_str(&format_opt(r.c1));
    s.push(',');
    s.push_str(&format_opt(r.c2));
    s.push(',');
    s.push_str(&format_opt(r.re_c3));
    s.push(',');
    s.push_str(&format_opt(r.im_c3));
    s.push(',');
    s.push_str(&format_opt(r.c_theory));
    s.push(',');
    s.push_str(&format_opt(r.rel_err));
    if fotoc_columns {
        s.push(',');
        s.push_str(&format_opt(r.f_o));
        s.push(',');
        s.push_str(&format_opt(r.c_approx));
    }
    s
}

pub fn render_data_csv(rows: &[DataRow], fotoc_columns: bool) -> String {
    let mut s = String::new();
    s.push_str(data_header(fotoc_columns));
    s.push('\n');
    for r in rows {
        s.push_str(&render_data_row(r, fotoc_columns));
        s.push('\n');
    }
    s
}

pub const VERIFICATION_HEADER: &str = "t,C_numeric,C_theory,abs_err,rel_err,pass";

pub fn render_verification_csv(rows: &[VerificationRow]) -> String {
    let mut s = String::new();
    s.push_str(VERIFICATION_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.t.to_string());
        s.push(',');
        s.push_str(&format_real(r.c_numeric));
        s.push(',');
        s.push_str(&format_real(r.c_theory));
        s.push(',');
        s.push_str(&format_real(r.abs_err));
        s.push(',');
        s.push_str(&format_opt(r.rel_err));
        s.push(',');
        s.push_str(if r.pass { "true" } else { "false" });
        s.push('\n');
    }
    s
}

/// Resolved-configuration echo embedded in JSON reports.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub kind: &'static str,
    #[serde(rename = "K")]
    pub k: f64,
    pub hbar: f64,
    pub resonant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N_requested")]
    pub n_requested: String,
    pub t_max: usize,
    pub t_stride: usize,
    pub initial: String,
    pub method: &'static str,
    pub format: &'static str,
    pub out: String,
    pub tol: f64,
}

impl ConfigEcho {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        ConfigEcho {
            kind: cfg.kind.name(),
            k: cfg.k,
            hbar: cfg.hbar_value,
            resonant: cfg.is_resonant(),
            epsilon: cfg.epsilon,
            n: cfg.n,
            n_requested: cfg.n_requested(),
            t_max: cfg.t_max,
            t_stride: cfg.t_stride,
            initial: cfg.initial.to_string(),
            method: cfg.method.name(),
            format: cfg.format.name(),
            out: cfg.out.display().to_string(),
            tol: cfg.tol,
        }
    }
}

#[derive(Debug, Serialize)]
struct JsonRow {
    t: usize,
    #[serde(rename = "C")]
    c: f64,
    #[serde(rename = "C1", skip_serializing_if = "Option::is_none")]
    c1: Option<f64>,
    #[serde(rename = "C2", skip_serializing_if = "Option::is_none")]
    c2: Option<f64>,
    #[serde(rename = "ReC3", skip_serializing_if = "Option::is_none")]
    re_c3: Option<f64>,
    #[serde(rename = "ImC3", skip_serializing_if = "Option::is_none")]
    im_c3: Option<f64>,
    #[serde(rename = "C_theory", skip_serializing_if = "Option::is_none")]
    c_theory: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_err: Option<f64>,
    #[serde(rename = "F_O", skip_serializing_if = "Option::is_none")]
    f_o: Option<f64>,
    #[serde(rename = "C_approx", skip_serializing_if = "Option::is_none")]
    c_approx: Option<f64>,
}

impl JsonRow {
    fn from_row(r: &DataRow) -> Self {
        JsonRow {
            t: r.t,
            c: r.c,
            c1: r.c1,
            c2: r.c2,
            re_c3: r.re_c3,
            im_c3: r.im_c3,
            c_theory: r.c_theory,
            rel_err: r.rel_err,
            f_o: r.f_o,
            c_approx: r.c_approx,
        }
    }
}

#[derive(Debug, Serialize)]
struct JsonSummary {
    max_rel_err: Option<f64>,
    pass: bool,
    #[serde(flatten)]
    extra: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Serialize)]
struct JsonReport {
    config: ConfigEcho,
    rows: Vec<JsonRow>,
    summary: JsonSummary,
}

pub fn render_json_report(cfg: &ExperimentConfig, output: &ExperimentOutput) -> String {
    let rows = output.rows.iter().map(JsonRow::from_row).collect();
    let (max_rel_err, pass) = match &output.verification {
        Some(vrows) => {
            let worst = vrows.iter().filter_map(|v| v.rel_err).fold(0.0, f64::max);
            let max = vrows.iter().any(|v| v.rel_err.is_some()).then_some(worst);
            (max, vrows.iter().all(|v| v.pass))
        }
        None => (None, true),
    };
    let report = JsonReport {
        config: ConfigEcho::from_config(cfg),
        rows,
        summary: JsonSummary {
            max_rel_err,
            pass,
            extra: output.summary_extra.clone(),
        },
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

/// Data rows as a JSON array value (for embedding in merged sweep reports).
pub fn json_rows(rows: &[DataRow]) -> serde_json::Value {
    let rows: Vec<JsonRow> = rows.iter().map(JsonRow::from_row).collect();
    serde_json::to_value(rows).expect("rows serialize")
}

pub fn write_text(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::Runtime(format!("cannot create directory {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Sibling path for the theory-comparison report of a CSV data file.
pub fn verification_path(out: &Path) -> PathBuf {
    out.with_extension("verify.csv")
}

/// Writes the data file (and, for CSV data with an applicable closed form,
/// the sibling verification report). Returns the verification path written.
pub fn write_run_files(
    cfg: &ExperimentConfig,
    output: &ExperimentOutput,
) -> CliResult<Option<PathBuf>> {
    match cfg.format {
        FormatSpec::Csv => {
            write_text(
                &cfg.out,
                &render_data_csv(&output.rows, output.fotoc_columns),
            )?;
            if let Some(vrows) = &output.verification {
                let vpath = verification_path(&cfg.out);
                write_text(&vpath, &render_verification_csv(vrows))?;
                Ok(Some(vpath))
            } else {
                Ok(None)
            }
        }
        FormatSpec::Json => {
            // The JSON report already embeds theory columns and the
            // pass/max_rel_err summary; no sibling file is needed.
            write_text(&cfg.out, &render_json_report(cfg, output))?;
            Ok(None)
        }
    }
}
