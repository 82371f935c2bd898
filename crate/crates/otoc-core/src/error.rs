//! Error taxonomy shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong while building lattices, states, operators,
/// evolutions, correlators, or quadratures.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    /// Momentum truncations must pair +n with −n, so the basis size is even;
    /// sizes below 4 cannot hold even the two-mode initial states.
    #[error("momentum basis size must be an even integer >= 4, got {0}")]
    InvalidBasisSize(usize),

    /// The effective Planck constant scales every momentum eigenvalue and
    /// free phase; zero or negative values are meaningless.
    #[error("effective Planck constant must be positive and finite, got {0}")]
    InvalidHbar(f64),

    /// Kick strengths enter phase tables directly and must be finite.
    #[error("kick strength must be finite, got {0}")]
    InvalidKickStrength(f64),

    /// Translation shifts enter phase tables directly and must be finite.
    #[error("translation shift must be finite, got {0}")]
    InvalidTranslation(f64),

    /// A momentum index fell outside the truncated lattice.
    #[error("momentum index {index} outside lattice range [{lo}, {hi}]")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },

    /// A coefficient map summed to zero norm, so no state can be normalized from it.
    #[error("initial coefficients have zero norm")]
    ZeroNorm,

    /// Two objects built on different lattices were combined.
    #[error(
        "lattice mismatch: left has N={left_size}, hbar={left_hbar}; \
         right has N={right_size}, hbar={right_hbar}"
    )]
    LatticeMismatch {
        left_size: usize,
        left_hbar: f64,
        right_size: usize,
        right_hbar: f64,
    },

    /// A sample or phase table had the wrong length for its lattice.
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Phase operators must be strictly unit-modulus; anything else would
    /// silently break unitarity of the evolution.
    #[error("phase table entry {index} has modulus {modulus:.17e}, expected 1 within 1e-12")]
    NonUnitaryPhase { index: usize, modulus: f64 },

    /// Population reached the edge of the momentum truncation; results would
    /// alias, so the computation is aborted instead.
    #[error(
        "boundary leakage {leakage:.3e} exceeds {threshold:.1e}; \
         increase the basis size N"
    )]
    BoundaryLeakage { leakage: f64, threshold: f64 },

    /// Expectation values are only meaningful on normalized states.
    #[error("state must be normalized for expectation values (norm^2 = {norm_sq:.17e})")]
    Unnormalized { norm_sq: f64 },

    /// Spectral derivatives are provided for orders 1 through 3.
    #[error("unsupported derivative order {0}; supported orders are 1..=3")]
    UnsupportedDerivativeOrder(u32),

    /// The caller claimed resonance but supplied a different Planck constant.
    #[error("resonant hint requires hbar = 4*pi (= {expected:.17e}) exactly, got {hbar:.17e}")]
    ResonanceContradiction { hbar: f64, expected: f64 },

    /// Correlator schedules must be strictly increasing kick counts.
    #[error("schedule must be strictly increasing (violation at position {position})")]
    NonMonotoneSchedule { position: usize },

    /// The closed-form expressions evaluated by the oracle are derived at the
    /// principal resonance and are not valid elsewhere.
    #[error("analytic oracle requires resonant hbar = 4*pi, got {0}")]
    NonResonantOracle(f64),

    /// Quadrature grids share the even-size convention of the basis.
    #[error("quadrature grid size must be an even integer >= 4, got {0}")]
    InvalidGridSize(usize),

    /// A quadrature grid was asked to hold a state it cannot represent.
    #[error("quadrature grid with M={m} nodes cannot resolve a basis of size N={n}")]
    GridSmallerThanBasis { m: usize, n: usize },

    /// The integrand has spectral weight beyond a quarter of the grid,
    /// so trapezoidal quadrature can no longer be trusted to be exact.
    #[error(
        "quadrature grid too coarse: fraction {fraction:.3e} of the integrand's \
         spectral power lies beyond |k| = M/4 (M = {m}); enlarge the grid"
    )]
    GridTooCoarse { m: usize, fraction: f64 },
}

/// Crate-wide result alias.
pub type CoreResult<T> = Result<T, CoreError>;
