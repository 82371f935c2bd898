//! Report checking: parses verification CSVs, data CSVs, and JSON reports,
//! applies the pass rule, and turns failing rows into a nonzero exit.

use std::path::Path;

use crate::cli::VerifyFlags;
use crate::error::{CliError, CliResult};

/// One checked comparison, normalized across report formats.
struct CheckedRow {
    source: String,
    t: String,
    c_numeric: f64,
    c_theory: f64,
    abs_err: f64,
    rel_err: Option<f64>,
    pass: bool,
}

fn malformed(path: &Path, detail: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("malformed report {}: {detail}", path.display()))
}

fn parse_field(path: &Path, lineno: usize, name: &str, text: &str) -> CliResult<f64> {
    text.parse::<f64>().map_err(|_| {
        malformed(
            path,
            format!("line {lineno}: `{name}` is not a number: `{text}`"),
        )
    })
}

/// Pass rule shared by every format: relative against the theory value,
/// absolute where the theory value is exactly zero.
fn passes(abs_err: f64, rel_err: Option<f64>, tol: f64) -> bool {
    match rel_err {
        Some(rel) => rel <= tol,
        None => abs_err <= tol,
    }
}

/// Loads a verification CSV (`t,C_numeric,C_theory,abs_err,rel_err,pass`).
fn load_verification_csv(
    path: &Path,
    lines: &[&str],
    tol_override: Option<f64>,
) -> CliResult<Vec<CheckedRow>> {
    let mut rows = Vec::new();
    for (idx, line) in lines.iter().enumerate().skip(1) {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(malformed(
                path,
                format!("line {lineno}: expected 6 fields, found {}", fields.len()),
            ));
        }
        let c_numeric = parse_field(path, lineno, "C_numeric", fields[1])?;
        let c_theory = parse_field(path, lineno, "C_theory", fields[2])?;
        let abs_err = parse_field(path, lineno, "abs_err", fields[3])?;
        let rel_err = if fields[4].is_empty() {
            None
        } else {
            Some(parse_field(path, lineno, "rel_err", fields[4])?)
        };
        let pass = match (tol_override, fields[5]) {
            (Some(tol), _) => passes(abs_err, rel_err, tol),
            (None, "true") => true,
            (None, "false") => false,
            (None, other) => {
                return Err(malformed(
                    path,
                    format!("line {lineno}: `pass` must be true or false, found `{other}`"),
                ));
            }
        };
        rows.push(CheckedRow {
            source: path.display().to_string(),
            t: fields[0].to_string(),
            c_numeric,
            c_theory,
            abs_err,
            rel_err,
            pass,
        });
    }
    Ok(rows)
}

/// Loads a data CSV (`t,C,...,C_theory,rel_err[,...]`): rows with a theory
/// value are checked, the rest carry no verdict and are skipped.
fn load_data_csv(
    path: &Path,
    lines: &[&str],
    tol_override: Option<f64>,
) -> CliResult<Vec<CheckedRow>> {
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (Some(t_col), Some(c_col), Some(theory_col)) = (col("t"), col("C"), col("C_theory")) else {
        return Err(malformed(
            path,
            "expected `t`, `C`, and `C_theory` columns in the header",
        ));
    };
    let tol = tol_override.unwrap_or(1e-6);
    let mut rows = Vec::new();
    for (idx, line) in lines.iter().enumerate().skip(1) {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(malformed(
                path,
                format!(
                    "line {lineno}: expected {} fields, found {}",
                    header.len(),
                    fields.len()
                ),
            ));
        }
        if fields[theory_col].is_empty() {
            continue;
        }
        let c_numeric = parse_field(path, lineno, "C", fields[c_col])?;
        let c_theory = parse_field(path, lineno, "C_theory", fields[theory_col])?;
        let abs_err = (c_numeric - c_theory).abs();
        let rel_err = (c_theory != 0.0).then(|| abs_err / c_theory.abs());
        rows.push(CheckedRow {
            source: path.display().to_string(),
            t: fields[t_col].to_string(),
            c_numeric,
            c_theory,
            abs_err,
            rel_err,
            pass: passes(abs_err, rel_err, tol),
        });
    }
    Ok(rows)
}

/// Loads a JSON report: rows carrying `C_theory` are re-checked against the
/// report's own recorded tolerance unless `--tol` overrides it.
fn load_json_report(
    path: &Path,
    text: &str,
    tol_override: Option<f64>,
) -> CliResult<Vec<CheckedRow>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| malformed(path, e))?;
    let rows_value = value
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or_else(|| malformed(path, "missing `rows` array"))?;
    let tol = tol_override
        .or_else(|| value.pointer("/config/tol").and_then(|t| t.as_f64()))
        .unwrap_or(1e-6);
    let mut rows = Vec::new();
    for (idx, row) in rows_value.iter().enumerate() {
        let Some(c_theory) = row.get("C_theory").and_then(|v| v.as_f64()) else {
            continue;
        };
        let c_numeric = row
            .get("C")
            .and_then(|v| v.as_f64())
            .ok_or_else(|| malformed(path, format!("row {idx}: missing numeric `C`")))?;
        let t = row
            .get("t")
            .map(|v| v.to_string())
            .unwrap_or_else(|| idx.to_string());
        let abs_err = (c_numeric - c_theory).abs();
        let rel_err = (c_theory != 0.0).then(|| abs_err / c_theory.abs());
        rows.push(CheckedRow {
            source: path.display().to_string(),
            t,
            c_numeric,
            c_theory,
            abs_err,
            rel_err,
            pass: passes(abs_err, rel_err, tol),
        });
    }
    Ok(rows)
}

fn load_report(path: &Path, tol_override: Option<f64>) -> CliResult<Vec<CheckedRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read report {}: {e}", path.display())))?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        return load_json_report(path, &text, tol_override);
    }
    let lines: Vec<&str> = text.lines().collect();
    if lines.is_empty() {
        return Ok(Vec::new());
    }
    if lines[0] == crate::output::VERIFICATION_HEADER {
        load_verification_csv(path, &lines, tol_override)
    } else if lines[0].starts_with("t,C,") {
        load_data_csv(path, &lines, tol_override)
    } else {
        Err(malformed(path, "unrecognized report header"))
    }
}

pub fn execute_verify(flags: &VerifyFlags) -> CliResult<i32> {
    let mut rows = Vec::new();
    for path in &flags.paths {
        rows.extend(load_report(path, flags.tol)?);
    }
    if rows.is_empty() {
        return Err(CliError::Usage("no data".into()));
    }
    let failing: Vec<&CheckedRow> = rows.iter().filter(|r| !r.pass).collect();
    for row in &failing {
        println!(
            "FAIL {}: t={} C_numeric={:.17e} C_theory={:.17e} abs_err={:.3e} rel_err={}",
            row.source,
            row.t,
            row.c_numeric,
            row.c_theory,
            row.abs_err,
            row.rel_err
                .map(|r| format!("{r:.3e}"))
                .unwrap_or_else(|| "n/a".to_string()),
        );
    }
    let worst = rows
        .iter()
        .filter_map(|r| r.rel_err)
        .fold(0.0_f64, f64::max);
    println!(
        "verified {} rows from {} files: worst rel_err {:.3e}",
        rows.len(),
        flags.paths.len(),
        worst
    );
    if failing.is_empty() {
        Ok(0)
    } else {
        Err(CliError::Verification(format!(
            "{} of {} verification rows failed",
            failing.len(),
            rows.len()
        )))
    }
}
