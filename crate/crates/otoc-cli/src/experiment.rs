//! Experiment strategies behind a name-keyed registry, plus the shared
//! machinery that turns a resolved config into rows, reports, and files.

use std::path::PathBuf;

use otoc_core::oracle::{cp_closed, ct_closed, fotoc_small_eps};
use otoc_core::{
    energy_series, run_series, FloquetOps, InitialState, MethodRegistry, MomentumLattice, OtocKind,
    OtocSample, WaveFunction,
};

use crate::config::{load_custom_state, ExperimentConfig, InitialSpec, MethodSpec};
use crate::error::{CliError, CliResult};
use crate::output;

/// One data-file row. Optional fields render as empty CSV cells / absent
/// JSON members where the column does not apply to the experiment.
#[derive(Debug, Clone)]
pub struct DataRow {
    pub t: usize,
    pub c: f64,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub re_c3: Option<f64>,
    pub im_c3: Option<f64>,
    pub c_theory: Option<f64>,
    pub rel_err: Option<f64>,
    pub f_o: Option<f64>,
    pub c_approx: Option<f64>,
}

/// One theory-vs-numeric comparison. `pass` is `rel_err <= tol`, falling
/// back to `abs_err <= tol` where the theory value is exactly zero (then
/// `rel_err` is undefined and stays empty).
#[derive(Debug, Clone)]
pub struct VerificationRow {
    pub t: usize,
    pub c_numeric: f64,
    pub c_theory: f64,
    pub abs_err: f64,
    pub rel_err: Option<f64>,
    pub pass: bool,
}

impl VerificationRow {
    pub fn new(t: usize, c_numeric: f64, c_theory: f64, tol: f64) -> Self {
        let abs_err = (c_numeric - c_theory).abs();
        let (rel_err, pass) = if c_theory == 0.0 {
            (None, abs_err <= tol)
        } else {
            let rel = abs_err / c_theory.abs();
            (Some(rel), rel <= tol)
        };
        VerificationRow {
            t,
            c_numeric,
            c_theory,
            abs_err,
            rel_err,
            pass,
        }
    }
}

/// Everything an experiment produces before serialization.
pub struct ExperimentOutput {
    pub rows: Vec<DataRow>,
    /// Whether the two fidelity columns (`F_O`, `C_approx`) are in play.
    pub fotoc_columns: bool,
    /// Theory comparison rows, present only when a closed form applies
    /// (resonant ħ and the cosine initial state).
    pub verification: Option<Vec<VerificationRow>>,
    /// Human-readable result lines printed after the run.
    pub notes: Vec<String>,
    /// Extra key/value results merged into the JSON summary object.
    pub summary_extra: serde_json::Map<String, serde_json::Value>,
}

/// A runnable experiment kind.
pub trait Experiment {
    fn name(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig) -> CliResult<ExperimentOutput>;
}

/// Name-keyed strategy registry; the dispatcher resolves `--kind` here.
pub struct ExperimentRegistry {
    entries: Vec<Box<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn builtin() -> Self {
        ExperimentRegistry {
            entries: vec![
                Box::new(PairCorrelator),
                Box::new(TranslationCorrelator),
                Box::new(FidelityCorrelator),
                Box::new(EnergyDiagnostics),
                Box::new(LocalizationContrast),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
    }
}

/// Builds the propagator and initial state out of the configuration.
/// Failures here are the user's inputs, hence usage errors.
fn build_ops(cfg: &ExperimentConfig) -> CliResult<(FloquetOps, WaveFunction)> {
    let lattice = MomentumLattice::new(cfg.n, cfg.hbar_value).map_err(CliError::from_setup)?;
    let ops = FloquetOps::new(lattice, cfg.k, cfg.resonant_hint()).map_err(CliError::from_setup)?;
    let init = match &cfg.initial {
        InitialSpec::Cosine => InitialState::Cosine,
        InitialSpec::Plane(n0) => InitialState::Plane(*n0),
        InitialSpec::Custom(path) => InitialState::Custom(load_custom_state(path)?),
    };
    let psi0 = WaveFunction::initial(lattice, &init).map_err(CliError::from_setup)?;
    Ok((ops, psi0))
}

/// Runs the configured strategy (or both) over the schedule.
fn otoc_series(
    cfg: &ExperimentConfig,
    kind: &OtocKind,
) -> CliResult<(Vec<OtocSample>, Option<Vec<OtocSample>>)> {
    let (ops, psi0) = build_ops(cfg)?;
    let schedule = cfg.schedule();
    let registry = MethodRegistry::builtin();
    let run = |key: &str| -> CliResult<Vec<OtocSample>> {
        let method = registry.get(key).expect("built-in strategy key");
        run_series(&ops, kind, &schedule, &psi0, method).map_err(CliError::from_run)
    };
    match cfg.method {
        MethodSpec::Decomp => Ok((run("decomp")?, None)),
        MethodSpec::Norm => Ok((run("norm")?, None)),
        MethodSpec::Both => Ok((run("decomp")?, Some(run("norm")?))),
    }
}

/// Whether the closed-form theory column applies: exact resonance with the
/// cosine initial state.
fn theory_applies(cfg: &ExperimentConfig) -> bool {
    cfg.is_resonant() && cfg.initial == InitialSpec::Cosine
}

/// Assembles rows, optional verification, and method-agreement notes.
fn build_output(
    cfg: &ExperimentConfig,
    samples: Vec<OtocSample>,
    alt: Option<Vec<OtocSample>>,
    theory: Option<&dyn Fn(usize) -> f64>,
    fotoc_columns: bool,
) -> ExperimentOutput {
    let mut rows = Vec::with_capacity(samples.len());
    let mut verification = theory.map(|_| Vec::with_capacity(samples.len()));
    for s in &samples {
        let c_theory = theory.map(|f| f(s.t));
        let vrow = c_theory.map(|ct| VerificationRow::new(s.t, s.c, ct, cfg.tol));
        let rel_err = vrow.as_ref().and_then(|v| v.rel_err);
        if let (Some(v), Some(list)) = (vrow, verification.as_mut()) {
            list.push(v);
        }
        rows.push(DataRow {
            t: s.t,
            c: s.c,
            c1: s.c1,
            c2: s.c2,
            re_c3: s.c3.map(|z| z.re),
            im_c3: s.c3.map(|z| z.im),
            c_theory,
            rel_err,
            f_o: if fotoc_columns {
                s.extras.get("F_O").copied()
            } else {
                None
            },
            c_approx: None,
        });
    }
    let mut notes = Vec::new();
    let mut summary_extra = serde_json::Map::new();
    if let Some(alt) = alt {
        let max_rel = samples
            .iter()
            .zip(&alt)
            .map(|(a, b)| {
                let scale = a.c.abs().max(b.c.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (a.c - b.c).abs() / scale
                }
            })
            .fold(0.0, f64::max);
        notes.push(format!(
            "method agreement: max relative difference {max_rel:.3e} between decomp and norm"
        ));
        summary_extra.insert("method_max_rel_diff".into(), max_rel.into());
    }
    ExperimentOutput {
        rows,
        fotoc_columns,
        verification,
        notes,
        summary_extra,
    }
}

struct PairCorrelator;

impl Experiment for PairCorrelator {
    fn name(&self) -> &'static str {
        "pp"
    }

    fn run(&self, cfg: &ExperimentConfig) -> CliResult<ExperimentOutput> {
        let (samples, alt) = otoc_series(cfg, &OtocKind::pp())?;
        let k = cfg.k;
        let theory = |t: usize| cp_closed(k, t);
        let theory_ref: Option<&dyn Fn(usize) -> f64> = if theory_applies(cfg) {
            Some(&theory)
        } else {
            None
        };
        Ok(build_output(cfg, samples, alt, theory_ref, false))
    }
}

struct TranslationCorrelator;

impl Experiment for TranslationCorrelator {
    fn name(&self) -> &'static str {
        "tp"
    }

    fn run(&self, cfg: &ExperimentConfig) -> CliResult<ExperimentOutput> {
        let epsilon = cfg.epsilon.expect("validated at resolve time");
        let kind = OtocKind::tp(epsilon).map_err(CliError::from_setup)?;
        let (samples, alt) = otoc_series(cfg, &kind)?;
        let k = cfg.k;
        let theory = move |t: usize| ct_closed(k, t, epsilon);
        let theory_ref: Option<&dyn Fn(usize) -> f64> = if theory_applies(cfg) {
            Some(&theory)
        } else {
            None
        };
        Ok(build_output(cfg, samples, alt, theory_ref, false))
    }
}

struct FidelityCorrelator;

impl Experiment for FidelityCorrelator {
    fn name(&self) -> &'static str {
        "fotoc"
    }

    fn run(&self, cfg: &ExperimentConfig) -> CliResult<ExperimentOutput> {
        let epsilon = cfg.epsilon.expect("validated at resolve time");
        let kind = OtocKind::fotoc(epsilon).map_err(CliError::from_setup)?;
        let (samples, alt) = otoc_series(cfg, &kind)?;
        let mut out = build_output(cfg, samples, alt, None, true);
        for row in &mut out.rows {
            row.c_approx = Some(fotoc_small_eps(cfg.k, row.t, epsilon, cfg.hbar_value));
        }
        Ok(out)
    }
}

struct EnergyDiagnostics;

impl Experiment for EnergyDiagnostics {
    fn name(&self) -> &'static str {
        "energy"
    }

    fn run(&self, cfg: &ExperimentConfig) -> CliResult<ExperimentOutput> {
        let (ops, psi0) = build_ops(cfg)?;
        // Prepend t = 0 so the growth column has its baseline in-file.
        let mut schedule = cfg.schedule();
        schedule.insert(0, 0);
        let series = energy_series(&ops, &schedule, &psi0).map_err(CliError::from_run)?;
        let p2_0 = series[0].p2;
        let with_theory = theory_applies(cfg);
        let mut rows = Vec::with_capacity(series.len());
        let mut verification = with_theory.then(|| Vec::with_capacity(series.len()));
        for s in &series {
            let growth = s.p2 - p2_0;
            let c_theory = with_theory.then(|| {
                let kt = cfg.k * s.t as f64;
                kt * kt / 4.0
            });
            let vrow = c_theory.map(|ct| VerificationRow::new(s.t, growth, ct, cfg.tol));
            let rel_err = vrow.as_ref().and_then(|v| v.rel_err);
            if let (Some(v), Some(list)) = (vrow, verification.as_mut()) {
                list.push(v);
            }
            rows.push(DataRow {
                t: s.t,
                c: growth,
                c1: None,
                c2: None,
                re_c3: None,
                im_c3: None,
                c_theory,
                rel_err,
                f_o: None,
                c_approx: None,
            });
        }
        Ok(ExperimentOutput {
            rows,
            fotoc_columns: false,
            verification,
            notes: Vec::new(),
            summary_extra: serde_json::Map::new(),
        })
    }
}

struct LocalizationContrast;

impl Experiment for LocalizationContrast {
    fn name(&self) -> &'static str {
        "localization"
    }

    fn run(&self, cfg: &ExperimentConfig) -> CliResult<ExperimentOutput> {
        let (samples, alt) = otoc_series(cfg, &OtocKind::pp())?;
        let mut out = build_output(cfg, samples, alt, None, false);
        append_saturation_stats(&mut out);
        Ok(out)
    }
}

/// Late-time saturation statistics over the upper half of the schedule:
/// mean/min/max of C plus a log-log growth exponent fit. An exponent well
/// below the ballistic value flags suppressed operator growth.
fn append_saturation_stats(out: &mut ExperimentOutput) {
    let n = out.rows.len();
    if n < 4 {
        out.notes.push(
            "localization: schedule too short for saturation statistics (need >= 4 samples)"
                .to_string(),
        );
        return;
    }
    let window = &out.rows[n / 2..];
    let (t_lo, t_hi) = (window[0].t, window[window.len() - 1].t);
    let len = window.len() as f64;
    let mean = window.iter().map(|r| r.c).sum::<f64>() / len;
    let min = window.iter().map(|r| r.c).fold(f64::INFINITY, f64::min);
    let max = window.iter().map(|r| r.c).fold(f64::NEG_INFINITY, f64::max);
    out.notes.push(format!(
        "localization: late-time window t in [{t_lo}, {t_hi}]: mean C = {mean:.6e}, \
         min = {min:.6e}, max = {max:.6e}"
    ));
    let pts: Vec<(f64, f64)> = window
        .iter()
        .filter(|r| r.c > 0.0 && r.t > 0)
        .map(|r| ((r.t as f64).ln(), r.c.ln()))
        .collect();
    if pts.len() < 2 {
        out.notes
            .push("localization: not enough positive samples for an exponent fit".to_string());
        return;
    }
    let exponent = least_squares_slope(&pts);
    let saturated = exponent < 0.5;
    out.notes.push(format!(
        "localization: fitted late-time growth exponent {exponent:.3}; \
         sub-quadratic saturation (exponent < 0.5): {saturated}"
    ));
    let mut stats = serde_json::Map::new();
    stats.insert("t_lo".into(), t_lo.into());
    stats.insert("t_hi".into(), t_hi.into());
    stats.insert("mean_c".into(), mean.into());
    stats.insert("min_c".into(), min.into());
    stats.insert("max_c".into(), max.into());
    stats.insert("exponent".into(), exponent.into());
    stats.insert("saturated".into(), saturated.into());
    out.summary_extra
        .insert("localization".into(), serde_json::Value::Object(stats));
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    sxy / sxx
}

/// Artifacts of one completed run: the experiment output plus every file
/// path written.
pub struct RunArtifacts {
    pub output: ExperimentOutput,
    pub data_path: PathBuf,
    pub verification_path: Option<PathBuf>,
}

/// Runs one experiment and writes its files without printing — shared by
/// the single-run path and sweep workers.
pub fn run_to_files(cfg: &ExperimentConfig) -> CliResult<RunArtifacts> {
    let registry = ExperimentRegistry::builtin();
    let experiment = registry.get(cfg.kind.name()).expect("built-in kind");
    let output = experiment.run(cfg)?;
    let verification_path = output::write_run_files(cfg, &output)?;
    Ok(RunArtifacts {
        output,
        data_path: cfg.out.clone(),
        verification_path,
    })
}

/// The no-subcommand entry: run, print notes and the verification verdict,
/// and fail the process if verification rows failed.
pub fn execute_run(cfg: &ExperimentConfig) -> CliResult<i32> {
    let artifacts = run_to_files(cfg)?;
    println!("wrote {}", artifacts.data_path.display());
    if let Some(vpath) = &artifacts.verification_path {
        println!("wrote {}", vpath.display());
    }
    for note in &artifacts.output.notes {
        println!("{note}");
    }
    if let Some(vrows) = &artifacts.output.verification {
        let failing = vrows.iter().filter(|v| !v.pass).count();
        let worst = vrows
            .iter()
            .filter_map(|v| v.rel_err)
            .fold(0.0_f64, f64::max);
        println!(
            "verification: {} rows, {} failing, worst rel_err {:.3e} (tol {:.1e})",
            vrows.len(),
            failing,
            worst,
            cfg.tol
        );
        if failing > 0 {
            return Err(CliError::Verification(format!(
                "{failing} of {} verification rows failed (tol {:.1e})",
                vrows.len(),
                cfg.tol
            )));
        }
    }
    Ok(0)
}
