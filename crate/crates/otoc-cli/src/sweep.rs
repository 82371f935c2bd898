//! Parameter sweeps: independent jobs on a bounded worker pool, per-job
//! files, and a deterministic single-writer merge.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::cli::SweepFlags;
use crate::config::{ExperimentConfig, FormatSpec, RawConfig};
use crate::error::{CliError, CliResult};
use crate::experiment::{run_to_files, DataRow, RunArtifacts};
use crate::output;

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    K,
    Epsilon,
    Hbar,
    N,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::K => "K",
            Axis::Epsilon => "epsilon",
            Axis::Hbar => "hbar",
            Axis::N => "N",
        }
    }
}

pub fn parse_axis(value: &str) -> CliResult<Axis> {
    match value {
        "K" => Ok(Axis::K),
        "epsilon" => Ok(Axis::Epsilon),
        "hbar" => Ok(Axis::Hbar),
        "N" => Ok(Axis::N),
        _ => Err(CliError::Usage(format!(
            "invalid value for `axis`: `{value}` (expected K | epsilon | hbar | N)"
        ))),
    }
}

/// Sets the swept field on a job's raw config, with the same parsers (and
/// the same error messages) as the ordinary flag surface.
fn apply_axis(raw: &mut RawConfig, axis: Axis, token: &str) -> CliResult<()> {
    match axis {
        Axis::K => raw.set("K", token),
        Axis::Epsilon => raw.set("epsilon", token),
        Axis::Hbar => raw.set("hbar", token),
        Axis::N => raw.set("N", token),
    }
}

/// Numeric value of the swept parameter after resolution (used as the merge
/// key); N stays integral.
fn axis_value_cell(axis: Axis, cfg: &ExperimentConfig) -> String {
    match axis {
        Axis::K => output::format_real(cfg.k),
        Axis::Epsilon => output::format_real(cfg.epsilon.unwrap_or(0.0)),
        Axis::Hbar => output::format_real(cfg.hbar_value),
        Axis::N => cfg.n.to_string(),
    }
}

fn axis_value_json(axis: Axis, cfg: &ExperimentConfig) -> serde_json::Value {
    match axis {
        Axis::K => cfg.k.into(),
        Axis::Epsilon => cfg.epsilon.unwrap_or(0.0).into(),
        Axis::Hbar => cfg.hbar_value.into(),
        Axis::N => cfg.n.into(),
    }
}

/// Per-job data file: the merged stem plus `.<axis>-<token>` before the
/// extension, e.g. `sweep.csv` -> `sweep.K-2.5.csv`.
fn per_job_path(merged: &Path, axis: Axis, token: &str) -> PathBuf {
    let ext = merged
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("csv")
        .to_string();
    let stem = merged
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("sweep");
    let safe: String = token
        .chars()
        .map(|c| {
            if c == '/' || c.is_whitespace() {
                '_'
            } else {
                c
            }
        })
        .collect();
    merged.with_file_name(format!("{stem}.{}-{safe}.{ext}", axis.name()))
}

/// Worker-pool size: `--jobs` flag, else `OTOC_WORKERS`, else available
/// parallelism; always clamped to the job count.
fn pool_size(flag: Option<usize>, job_count: usize) -> CliResult<usize> {
    let requested = match flag {
        Some(0) => return Err(CliError::Usage("jobs must be >= 1".into())),
        Some(n) => n,
        None => match std::env::var("OTOC_WORKERS") {
            Ok(text) => match text.parse::<usize>() {
                Ok(n) if n >= 1 => n,
                _ => {
                    return Err(CliError::Usage(format!(
                        "invalid OTOC_WORKERS value `{text}` (expected a positive integer)"
                    )))
                }
            },
            Err(_) => std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        },
    };
    Ok(requested.min(job_count).max(1))
}

struct Job {
    token: String,
    cfg: ExperimentConfig,
}

type JobOutcome = CliResult<RunArtifacts>;

pub fn execute_sweep(flags: &SweepFlags) -> CliResult<i32> {
    let axis = parse_axis(&flags.axis)?;
    let base = flags.run.to_raw()?;
    let tokens: Vec<String> = flags
        .values
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    if tokens.is_empty() {
        return Err(CliError::Usage(
            "`--values` must list at least one value".into(),
        ));
    }

    // The merged output location needs kind/format before per-job resolution.
    let kind = base.kind.ok_or_else(|| {
        CliError::Usage("kind required (pp | tp | fotoc | energy | localization)".into())
    })?;
    let format = base.format.unwrap_or(FormatSpec::Csv);
    let merged_out = base.out.clone().unwrap_or_else(|| {
        PathBuf::from(format!("otoc-sweep-{}.{}", kind.name(), format.extension()))
    });

    // Resolve every job upfront so usage errors fail fast, before any work.
    let mut jobs = Vec::with_capacity(tokens.len());
    for token in &tokens {
        let mut raw = base.clone();
        apply_axis(&mut raw, axis, token)?;
        raw.out = Some(per_job_path(&merged_out, axis, token));
        let cfg = ExperimentConfig::resolve(&raw)?;
        jobs.push(Job {
            token: token.clone(),
            cfg,
        });
    }

    let workers = pool_size(flags.jobs, jobs.len())?;
    let results: Mutex<Vec<Option<JobOutcome>>> =
        Mutex::new((0..jobs.len()).map(|_| None).collect());
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let outcome = run_to_files(&jobs[i].cfg);
                results.lock().expect("results lock")[i] = Some(outcome);
            });
        }
    });
    let results = results.into_inner().expect("results lock");

    // Single-writer merge, in the order the values were given.
    let mut merged_rows: Vec<(String, &DataRow)> = Vec::new();
    let mut json_jobs: Vec<serde_json::Value> = Vec::new();
    let mut fotoc_columns = false;
    let mut exit = 0;
    let mut ok_for_stabilization: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
    for (job, outcome) in jobs.iter().zip(&results) {
        let outcome = outcome.as_ref().expect("every job ran");
        match outcome {
            Ok(artifacts) => {
                println!(
                    "job {}={}: ok ({} rows) -> {}",
                    axis.name(),
                    job.token,
                    artifacts.output.rows.len(),
                    artifacts.data_path.display()
                );
                for note in &artifacts.output.notes {
                    println!("job {}={}: {note}", axis.name(), job.token);
                }
                fotoc_columns |= artifacts.output.fotoc_columns;
                let cell = axis_value_cell(axis, &job.cfg);
                for row in &artifacts.output.rows {
                    merged_rows.push((cell.clone(), row));
                }
                if axis == Axis::N {
                    ok_for_stabilization.push((
                        job.cfg.n,
                        artifacts.output.rows.iter().map(|r| (r.t, r.c)).collect(),
                    ));
                }
                if format == FormatSpec::Json {
                    json_jobs.push(serde_json::json!({
                        "value": job.token,
                        "value_numeric": axis_value_json(axis, &job.cfg),
                        "status": "ok",
                        "config": output::ConfigEcho::from_config(&job.cfg),
                        "rows": output::json_rows(&artifacts.output.rows),
                    }));
                }
            }
            Err(err) => {
                eprintln!("job {}={}: FAILED: {err}", axis.name(), job.token);
                exit = exit.max(err.exit_code());
                if format == FormatSpec::Json {
                    json_jobs.push(serde_json::json!({
                        "value": job.token,
                        "status": "failed",
                        "error": err.to_string(),
                    }));
                }
            }
        }
    }

    // Convergence reporting for basis-size sweeps: successive max-over-t
    // changes of C must shrink to the roundoff floor as N grows past the
    // minimal adequate size. Changes are judged relative to the correlator
    // scale; once below the floor, differences are rounding noise whose
    // ordering carries no information.
    const STABILIZATION_FLOOR: f64 = 1e-10;
    let mut stabilization = serde_json::Map::new();
    if axis == Axis::N && ok_for_stabilization.len() >= 2 {
        let scale = ok_for_stabilization
            .iter()
            .flat_map(|(_, rows)| rows.iter().map(|(_, c)| c.abs()))
            .fold(1.0_f64, f64::max);
        let mut deltas = Vec::new();
        for pair in ok_for_stabilization.windows(2) {
            let (n_a, rows_a) = &pair[0];
            let (n_b, rows_b) = &pair[1];
            let mut max_dc = 0.0_f64;
            for (t_a, c_a) in rows_a {
                if let Some((_, c_b)) = rows_b.iter().find(|(t_b, _)| t_b == t_a) {
                    max_dc = max_dc.max((c_b - c_a).abs());
                }
            }
            let rel = max_dc / scale;
            println!(
                "N-sweep stabilization: max |C(N={n_b}) - C(N={n_a})| = {max_dc:.3e} \
                 (relative to scale: {rel:.3e})"
            );
            deltas.push((*n_a, *n_b, max_dc, rel));
        }
        let final_at_floor = deltas.last().is_some_and(|d| d.3 <= STABILIZATION_FLOOR);
        let nonincreasing_to_floor = deltas
            .windows(2)
            .all(|w| w[1].3 <= w[0].3 || w[1].3 <= STABILIZATION_FLOOR);
        let stabilized = final_at_floor && nonincreasing_to_floor;
        println!(
            "N-sweep stabilized (successive changes shrink to <= {STABILIZATION_FLOOR:.0e} \
             of the correlator scale): {stabilized}"
        );
        stabilization.insert(
            "deltas".into(),
            serde_json::Value::Array(
                deltas
                    .iter()
                    .map(|(a, b, d, rel)| {
                        serde_json::json!({"from": a, "to": b, "max_abs_dc": d, "rel_dc": rel})
                    })
                    .collect(),
            ),
        );
        stabilization.insert("floor".into(), STABILIZATION_FLOOR.into());
        stabilization.insert("stabilized".into(), stabilized.into());
    }

    match format {
        FormatSpec::Csv => {
            let mut text = String::new();
            text.push_str(axis.name());
            text.push(',');
            text.push_str(output::data_header(fotoc_columns));
            text.push('\n');
            for (cell, row) in &merged_rows {
                text.push_str(cell);
                text.push(',');
                text.push_str(&output::render_data_row(row, fotoc_columns));
                text.push('\n');
            }
            output::write_text(&merged_out, &text)?;
        }
        FormatSpec::Json => {
            let mut summary = serde_json::Map::new();
            if !stabilization.is_empty() {
                summary.insert(
                    "n_stabilization".into(),
                    serde_json::Value::Object(stabilization),
                );
            }
            let report = serde_json::json!({
                "axis": axis.name(),
                "jobs": json_jobs,
                "summary": summary,
            });
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            output::write_text(&merged_out, &text)?;
        }
    }
    println!("wrote {}", merged_out.display());
    Ok(exit)
}
