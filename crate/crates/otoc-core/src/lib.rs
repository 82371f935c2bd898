//! Spectral simulator of the quantum kicked rotor with out-of-time-ordered
//! correlator (OTOC) engines and analytic cross-check oracles.
//!
//! The model is the standard kicked rotor: free rotation on a circle
//! punctuated by periodic δ-kicks of strength K in cosθ, propagated
//! stroboscopically by the one-period Floquet map U = U_f U_K with
//! U_f = exp(−ip²/2ħ) diagonal in momentum and U_K = exp(−iK cosθ/ħ)
//! diagonal in angle. States live on a truncated integer momentum lattice
//! p_n = nħ; the angle grid is the conjugate view under an exactly unitary
//! discrete Fourier pair.
//!
//! The crate computes correlators C(t) = ⟨[A(t),B]†[A(t),B]⟩ by the
//! forward/operator/time-reversal protocol — evolve forward t kicks, apply A,
//! undo the evolution with bit-exact conjugate phases — for the operator
//! pairs (p, p), (T(ε), p) and (T(ε), |ψ₀⟩⟨ψ₀|). At the quantum resonance
//! ħ = 4π everything is also available in closed form or as spectrally exact
//! quadrature, which [`oracle`] evaluates through an entirely independent
//! code path so the two routes verify each other.
//!
//! Module map:
//!
//! * [`lattice`] — the truncated momentum basis and the resonance constant.
//! * [`state`] — wavefunctions, the angle-grid view, observables, spectral
//!   derivatives, and the boundary-leakage guard.
//! * [`operator`] — momentum, translation, diagonal phase and projector
//!   operators.
//! * [`floquet`] — one-kick propagation, exact time reversal, Heisenberg
//!   conjugation.
//! * [`otoc`] — correlator kinds, evaluation strategies, schedules, energy
//!   series, and the automatic basis-size rule.
//! * [`oracle`] — closed forms, analytic reversed states, and trapezoidal
//!   quadrature of the component integrals.

pub mod error;
pub mod floquet;
mod fourier;
pub mod lattice;
pub mod operator;
pub mod oracle;
pub mod otoc;
pub mod state;

pub use error::{CoreError, CoreResult};
pub use floquet::{Direction, FloquetOps};
pub use lattice::{MomentumLattice, RESONANT_HBAR};
pub use operator::Operator;
pub use oracle::{OtocComponents, QuadratureGrid};
pub use otoc::{
    auto_basis_size, energy_series, fotoc, otoc_commutator_norm, otoc_decomposition, run_series,
    EnergySample, MethodRegistry, OtocKind, OtocMethod, OtocSample,
};
pub use state::{AngleSamples, InitialState, WaveFunction};
