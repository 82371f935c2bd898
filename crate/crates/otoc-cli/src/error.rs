//! Process-level error taxonomy and its exit-code mapping.
//!
//! Exit codes: 0 success, 1 verification failure or runtime fault,
//! 2 usage/config error, 3 numerical-guard abort.

use otoc_core::CoreError;

/// Anything that should terminate the process with a nonzero status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config file contents, or malformed input files.
    #[error("{0}")]
    Usage(String),
    /// A verification report contains failing rows.
    #[error("{0}")]
    Verification(String),
    /// A numerical guard aborted the computation.
    #[error("{0}")]
    Guard(String),
    /// I/O or other unexpected runtime failure.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// The process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Runtime(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    /// Maps a core error raised while running an experiment. Guard trips get
    /// an actionable message; anything else is an internal runtime fault.
    pub fn from_run(err: CoreError) -> Self {
        match err {
            CoreError::BoundaryLeakage { leakage, threshold } => CliError::Guard(format!(
                "boundary leakage {leakage:.3e} exceeded the {threshold:.0e} guard: \
                 the momentum window is too small for this evolution; increase N \
                 (use --N auto or a larger explicit size)"
            )),
            CoreError::GridTooCoarse { m, fraction } => CliError::Guard(format!(
                "quadrature grid of {m} nodes is under-resolved \
                 (high-band power fraction {fraction:.3e}); increase the grid size"
            )),
            other => CliError::Runtime(other.to_string()),
        }
    }

    /// Maps a core error raised while building lattices, propagators, or
    /// states out of the configuration — those reflect the user's inputs.
    pub fn from_setup(err: CoreError) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
