//! Experiment configuration: typed field specs, `key = value` config files,
//! flag/file precedence, and validation into a resolved [`ExperimentConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use otoc_core::{auto_basis_size, RESONANT_HBAR};

use crate::error::{CliError, CliResult};

/// Default detuned ħ for localization runs: 4π scaled by the inverse golden
/// ratio, a maximally irrational detuning that makes the contrast demo
/// reproducible without hand-picking a constant.
pub const GOLDEN_HBAR: f64 = RESONANT_HBAR * 0.618_033_988_749_894_9;

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindSpec {
    /// Momentum-pair correlator C(t) with A = B = p.
    Pp,
    /// Translation-pair correlator with A = p, B = T(ε).
    Tp,
    /// Fidelity correlator with A = p, B = |ψ₀⟩⟨ψ₀|.
    Fotoc,
    /// Kinetic-energy diagnostics ⟨p²(t)⟩ − ⟨p²(0)⟩.
    Energy,
    /// Momentum-pair correlator at detuned ħ with saturation statistics.
    Localization,
}

impl KindSpec {
    pub fn name(&self) -> &'static str {
        match self {
            KindSpec::Pp => "pp",
            KindSpec::Tp => "tp",
            KindSpec::Fotoc => "fotoc",
            KindSpec::Energy => "energy",
            KindSpec::Localization => "localization",
        }
    }

    pub fn needs_epsilon(&self) -> bool {
        matches!(self, KindSpec::Tp | KindSpec::Fotoc)
    }
}

/// Effective Planck constant: an explicit value, or the exact resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HbarSpec {
    /// The `resonant` keyword: exact 4π with the resonant construction
    /// asserted on the propagator.
    Resonant,
    /// An explicit positive value. A literal merely close to 4π does not
    /// engage resonant semantics; only the keyword (or exact bit equality
    /// with the resonant constant) does.
    Value(f64),
}

/// Basis size: explicit, or derived from (K, t_max, ħ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeSpec {
    Auto,
    Fixed(usize),
}

/// Initial state selector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialSpec {
    /// ψ(θ) = cos(θ)/√π.
    Cosine,
    /// Momentum eigenstate |n₀⟩.
    Plane(i64),
    /// Coefficients read from a text file (`n re [im]` lines).
    Custom(PathBuf),
}

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialSpec::Cosine => write!(f, "cosine"),
            InitialSpec::Plane(n0) => write!(f, "plane:{n0}"),
            InitialSpec::Custom(path) => write!(f, "custom:{}", path.display()),
        }
    }
}

/// Correlator evaluation strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSpec {
    Decomp,
    Norm,
    /// Run both strategies and report their agreement.
    Both,
}

impl MethodSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::Decomp => "decomp",
            MethodSpec::Norm => "norm",
            MethodSpec::Both => "both",
        }
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatSpec {
    Csv,
    Json,
}

impl FormatSpec {
    pub fn name(&self) -> &'static str {
        match self {
            FormatSpec::Csv => "csv",
            FormatSpec::Json => "json",
        }
    }

    pub fn extension(&self) -> &'static str {
        self.name()
    }
}

fn invalid(key: &str, value: &str, expected: &str) -> CliError {
    CliError::Usage(format!(
        "invalid value for `{key}`: `{value}` (expected {expected})"
    ))
}

fn parse_real(key: &str, value: &str) -> CliResult<f64> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(invalid(key, value, "a finite real number")),
    }
}

fn parse_int(key: &str, value: &str) -> CliResult<usize> {
    value
        .parse::<usize>()
        .map_err(|_| invalid(key, value, "a non-negative integer"))
}

pub fn parse_kind(value: &str) -> CliResult<KindSpec> {
    match value {
        "pp" => Ok(KindSpec::Pp),
        "tp" => Ok(KindSpec::Tp),
        "fotoc" => Ok(KindSpec::Fotoc),
        "energy" => Ok(KindSpec::Energy),
        "localization" => Ok(KindSpec::Localization),
        _ => Err(invalid(
            "kind",
            value,
            "pp | tp | fotoc | energy | localization",
        )),
    }
}

pub fn parse_hbar(value: &str) -> CliResult<HbarSpec> {
    if value == "resonant" {
        Ok(HbarSpec::Resonant)
    } else {
        parse_real("hbar", value).map(HbarSpec::Value)
    }
}

pub fn parse_size(value: &str) -> CliResult<SizeSpec> {
    if value == "auto" {
        Ok(SizeSpec::Auto)
    } else {
        value
            .parse::<usize>()
            .map(SizeSpec::Fixed)
            .map_err(|_| invalid("N", value, "a positive even integer or `auto`"))
    }
}

pub fn parse_initial(value: &str) -> CliResult<InitialSpec> {
    if value == "cosine" {
        return Ok(InitialSpec::Cosine);
    }
    if let Some(rest) = value.strip_prefix("plane:") {
        return rest
            .parse::<i64>()
            .map(InitialSpec::Plane)
            .map_err(|_| invalid("initial", value, "plane:<integer>"));
    }
    if let Some(rest) = value.strip_prefix("custom:") {
        if rest.is_empty() {
            return Err(invalid("initial", value, "custom:<path>"));
        }
        return Ok(InitialSpec::Custom(PathBuf::from(rest)));
    }
    Err(invalid(
        "initial",
        value,
        "cosine | plane:<n0> | custom:<path>",
    ))
}

pub fn parse_method(value: &str) -> CliResult<MethodSpec> {
    match value {
        "decomp" => Ok(MethodSpec::Decomp),
        "norm" => Ok(MethodSpec::Norm),
        "both" => Ok(MethodSpec::Both),
        _ => Err(invalid("method", value, "decomp | norm | both")),
    }
}

pub fn parse_format(value: &str) -> CliResult<FormatSpec> {
    match value {
        "csv" => Ok(FormatSpec::Csv),
        "json" => Ok(FormatSpec::Json),
        _ => Err(invalid("format", value, "csv | json")),
    }
}

/// Partially specified configuration: every field optional so that defaults,
/// a config file, and command-line flags can be layered in that order.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub kind: Option<KindSpec>,
    pub k: Option<f64>,
    pub hbar: Option<HbarSpec>,
    pub epsilon: Option<f64>,
    pub n: Option<SizeSpec>,
    pub t_max: Option<usize>,
    pub t_stride: Option<usize>,
    pub initial: Option<InitialSpec>,
    pub method: Option<MethodSpec>,
    pub out: Option<PathBuf>,
    pub format: Option<FormatSpec>,
    pub tol: Option<f64>,
}

impl RawConfig {
    /// Sets one field by its config-file key name.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "kind" => self.kind = Some(parse_kind(value)?),
            "K" => self.k = Some(parse_real("K", value)?),
            "hbar" => self.hbar = Some(parse_hbar(value)?),
            "epsilon" => self.epsilon = Some(parse_real("epsilon", value)?),
            "N" => self.n = Some(parse_size(value)?),
            "t_max" => self.t_max = Some(parse_int("t_max", value)?),
            "t_stride" => self.t_stride = Some(parse_int("t_stride", value)?),
            "initial" => self.initial = Some(parse_initial(value)?),
            "method" => self.method = Some(parse_method(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(parse_format(value)?),
            "tol" => self.tol = Some(parse_real("tol", value)?),
            other => {
                return Err(CliError::Usage(format!("unknown config key `{other}`")));
            }
        }
        Ok(())
    }

    /// Parses a config file: UTF-8 text, one `key = value` per line,
    /// `#` starts a comment, blank lines ignored.
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                )));
            };
            raw.set(key.trim(), value.trim()).map_err(|e| match e {
                CliError::Usage(msg) => {
                    CliError::Usage(format!("{}:{}: {msg}", path.display(), lineno + 1))
                }
                other => other,
            })?;
        }
        Ok(raw)
    }

    /// Layers `over` on top of `self`: fields set in `over` win.
    pub fn overlay(mut self, over: RawConfig) -> RawConfig {
        macro_rules! take {
            ($field:ident) => {
                if over.$field.is_some() {
                    self.$field = over.$field;
                }
            };
        }
        take!(kind);
        take!(k);
        take!(hbar);
        take!(epsilon);
        take!(n);
        take!(t_max);
        take!(t_stride);
        take!(initial);
        take!(method);
        take!(out);
        take!(format);
        take!(tol);
        self
    }
}

/// Fully validated configuration for one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: KindSpec,
    pub k: f64,
    pub hbar: HbarSpec,
    /// Numeric ħ (the resonant constant when the keyword was used).
    pub hbar_value: f64,
    pub epsilon: Option<f64>,
    /// Resolved basis size.
    pub n: usize,
    /// The size as requested (`auto` or explicit), kept for reporting.
    pub n_spec: SizeSpec,
    pub t_max: usize,
    pub t_stride: usize,
    pub initial: InitialSpec,
    pub method: MethodSpec,
    pub out: PathBuf,
    pub format: FormatSpec,
    /// Verification tolerance: relative, or absolute where the theory
    /// value is exactly zero.
    pub tol: f64,
}

impl ExperimentConfig {
    /// Validates and fills defaults. Distinct messages per failure mode.
    pub fn resolve(raw: &RawConfig) -> CliResult<Self> {
        let kind = raw.kind.ok_or_else(|| {
            CliError::Usage("kind required (pp | tp | fotoc | energy | localization)".into())
        })?;
        let t_max = raw
            .t_max
            .ok_or_else(|| CliError::Usage("t_max required".into()))?;
        let k = raw.k.unwrap_or(1.0);
        if k < 0.0 {
            return Err(CliError::Usage(format!(
                "invalid value for `K`: `{k}` (expected a kick strength >= 0)"
            )));
        }
        let hbar = raw.hbar.unwrap_or(match kind {
            KindSpec::Localization => HbarSpec::Value(GOLDEN_HBAR),
            _ => HbarSpec::Resonant,
        });
        let hbar_value = match hbar {
            HbarSpec::Resonant => RESONANT_HBAR,
            HbarSpec::Value(v) => v,
        };
        if !hbar_value.is_finite() || hbar_value <= 0.0 {
            return Err(CliError::Usage(format!(
                "invalid value for `hbar`: `{hbar_value}` (expected a positive real or `resonant`)"
            )));
        }
        let epsilon = raw.epsilon;
        if kind.needs_epsilon() && epsilon.is_none() {
            return Err(CliError::Usage("epsilon required".into()));
        }
        let t_stride = raw.t_stride.unwrap_or(1);
        if t_stride == 0 {
            return Err(CliError::Usage("t_stride must be >= 1".into()));
        }
        let n_spec = raw.n.unwrap_or(SizeSpec::Auto);
        let n = match n_spec {
            SizeSpec::Auto => auto_basis_size(k, t_max, hbar_value),
            SizeSpec::Fixed(n) => n,
        };
        let initial = raw.initial.clone().unwrap_or(InitialSpec::Cosine);
        let method = raw.method.unwrap_or(MethodSpec::Decomp);
        let format = raw.format.unwrap_or(FormatSpec::Csv);
        let out = raw.out.clone().unwrap_or_else(|| {
            PathBuf::from(format!("otoc-{}.{}", kind.name(), format.extension()))
        });
        let tol = raw.tol.unwrap_or(1e-6);
        if !tol.is_finite() || tol <= 0.0 {
            return Err(CliError::Usage(format!(
                "invalid value for `tol`: `{tol}` (expected a positive real)"
            )));
        }
        Ok(ExperimentConfig {
            kind,
            k,
            hbar,
            hbar_value,
            epsilon,
            n,
            n_spec,
            t_max,
            t_stride,
            initial,
            method,
            out,
            format,
            tol,
        })
    }

    /// The sampling schedule: multiples of the stride up to `t_max`
    /// (stride 1 gives t = 1, 2, …, t_max). Energy runs prepend t = 0
    /// themselves to record the baseline.
    pub fn schedule(&self) -> Vec<usize> {
        (1..)
            .map(|i| i * self.t_stride)
            .take_while(|&t| t <= self.t_max)
            .collect()
    }

    /// Whether the exact-resonance construction is active. Opt-in via the
    /// keyword, or bit equality of an explicit value with the resonant
    /// constant — never magnitude proximity.
    pub fn is_resonant(&self) -> bool {
        match self.hbar {
            HbarSpec::Resonant => true,
            HbarSpec::Value(v) => v == RESONANT_HBAR,
        }
    }

    /// The resonance hint handed to the propagator constructor.
    pub fn resonant_hint(&self) -> Option<bool> {
        match self.hbar {
            HbarSpec::Resonant => Some(true),
            HbarSpec::Value(_) => None,
        }
    }

    /// Requested-size string for reporting (`auto` or the explicit number).
    pub fn n_requested(&self) -> String {
        match self.n_spec {
            SizeSpec::Auto => "auto".to_string(),
            SizeSpec::Fixed(n) => n.to_string(),
        }
    }
}

/// Reads a custom initial state file: UTF-8 text, one `n re [im]` triple per
/// line (imaginary part optional), `#` comments and blank lines allowed.
/// Coefficients are normalized downstream.
pub fn load_custom_state(path: &Path) -> CliResult<BTreeMap<i64, Complex64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read state file {}: {e}", path.display())))?;
    let mut coeffs = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || {
            CliError::Usage(format!(
                "{}:{}: expected `n re [im]`",
                path.display(),
                lineno + 1
            ))
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(bad());
        }
        let n: i64 = fields[0].parse().map_err(|_| bad())?;
        let re: f64 = fields[1].parse().map_err(|_| bad())?;
        let im: f64 = match fields.get(2) {
            Some(s) => s.parse().map_err(|_| bad())?,
            None => 0.0,
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        if coeffs.insert(n, Complex64::new(re, im)).is_some() {
            return Err(CliError::Usage(format!(
                "{}:{}: duplicate momentum index {n}",
                path.display(),
                lineno + 1
            )));
        }
    }
    if coeffs.is_empty() {
        return Err(CliError::Usage(format!(
            "state file {} has no coefficients",
            path.display()
        )));
    }
    Ok(coeffs)
}
