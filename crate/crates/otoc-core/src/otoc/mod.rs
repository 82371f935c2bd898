//! Out-of-time-ordered correlators for the kicked rotor.
//!
//! For operators A, B the correlator is the Hermitian form
//! C(t) = ⟨ψ₀| [A(t),B]† [A(t),B] |ψ₀⟩ with A(t) = U†(t) A U(t). Taking the
//! literal square −⟨[A(t),B]²⟩ would not even be real once A is non-Hermitian
//! (the translation is not), so the Hermitian form is the operational
//! definition used for every kind here; for Hermitian A, B the two coincide.
//!
//! Three operator pairs are built in:
//!
//! * `pp`: A = p, B = p — momentum correlator,
//! * `tp`: A = T(ε), B = p — translation/momentum correlator,
//! * `fotoc`: A = T(ε), B = |ψ₀⟩⟨ψ₀| — fidelity correlator, where
//!   C = 1 − F_O with F_O = |⟨ψ₀|T(t)|ψ₀⟩|².
//!
//! Schedule evaluation resumes the forward trajectory between sample points
//! instead of restarting it, so a series over t₁ < t₂ < … costs one forward
//! pass plus one time reversal per sample and uses a single consistent phase
//! history.

pub mod method;

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{CoreError, CoreResult};
use crate::floquet::{Direction, FloquetOps};
use crate::lattice::MomentumLattice;
use crate::operator::Operator;
use crate::state::WaveFunction;

pub use method::{CommutatorNormMethod, DecompositionMethod, MethodRegistry, OtocMethod};

/// Which operator pair (A, B) the correlator probes.
#[derive(Debug, Clone, PartialEq)]
pub enum OtocKind {
    /// A = p, B = p.
    MomentumMomentum,
    /// A = T(ε), B = p.
    TranslationMomentum { epsilon: f64 },
    /// A = T(ε), B = |ψ₀⟩⟨ψ₀|.
    Fidelity { epsilon: f64 },
}

pub(crate) fn canonical_epsilon(epsilon: f64) -> CoreResult<f64> {
    if !epsilon.is_finite() {
        return Err(CoreError::InvalidTranslation(epsilon));
    }
    Ok(epsilon.rem_euclid(2.0 * std::f64::consts::PI))
}

impl OtocKind {
    /// The momentum/momentum kind.
    pub fn pp() -> Self {
        OtocKind::MomentumMomentum
    }

    /// The translation/momentum kind; ε is reduced modulo 2π.
    pub fn tp(epsilon: f64) -> CoreResult<Self> {
        Ok(OtocKind::TranslationMomentum {
            epsilon: canonical_epsilon(epsilon)?,
        })
    }

    /// The fidelity kind; ε is reduced modulo 2π.
    pub fn fotoc(epsilon: f64) -> CoreResult<Self> {
        Ok(OtocKind::Fidelity {
            epsilon: canonical_epsilon(epsilon)?,
        })
    }

    /// Short tag, matching the experiment vocabulary.
    pub fn tag(&self) -> &'static str {
        match self {
            OtocKind::MomentumMomentum => "pp",
            OtocKind::TranslationMomentum { .. } => "tp",
            OtocKind::Fidelity { .. } => "fotoc",
        }
    }

    /// The translation shift, when this kind has one.
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            OtocKind::MomentumMomentum => None,
            OtocKind::TranslationMomentum { epsilon } | OtocKind::Fidelity { epsilon } => {
                Some(*epsilon)
            }
        }
    }

    /// Whether B projects onto the initial state.
    pub fn is_fidelity(&self) -> bool {
        matches!(self, OtocKind::Fidelity { .. })
    }

    /// The operator A that undergoes Heisenberg evolution.
    pub fn a_operator(&self, lattice: MomentumLattice) -> CoreResult<Operator> {
        match self {
            OtocKind::MomentumMomentum => Ok(Operator::momentum()),
            OtocKind::TranslationMomentum { epsilon } | OtocKind::Fidelity { epsilon } => {
                Operator::translation(lattice, *epsilon)
            }
        }
    }

    /// The static operator B.
    pub fn b_operator(&self, psi0: &WaveFunction) -> Operator {
        match self {
            OtocKind::MomentumMomentum | OtocKind::TranslationMomentum { .. } => {
                Operator::momentum()
            }
            OtocKind::Fidelity { .. } => Operator::projector(psi0.clone()),
        }
    }
}

/// One correlator value at one kick count.
#[derive(Debug, Clone)]
pub struct OtocSample {
    /// Kick count.
    pub t: usize,
    /// The correlator C(t); numerically ≥ −10⁻¹⁰.
    pub c: f64,
    /// ⟨ψ_R|B²|ψ_R⟩, reported by the decomposition strategy.
    pub c1: Option<f64>,
    /// ⟨φ_R|φ_R⟩, reported by the decomposition strategy.
    pub c2: Option<f64>,
    /// ⟨ψ_R|B|φ_R⟩, reported by the decomposition strategy.
    pub c3: Option<C64>,
    /// Tag of the strategy that produced this sample.
    pub method: &'static str,
    /// Kind-specific scalars (`F_O`, `p2`).
    pub extras: BTreeMap<&'static str, f64>,
}

/// Energy diagnostics at one kick count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    /// Kick count.
    pub t: usize,
    /// ⟨p²(t)⟩.
    pub p2: f64,
    /// ⟨p(t)⟩.
    pub p: f64,
}

fn validate_schedule(schedule: &[usize]) -> CoreResult<()> {
    for (position, pair) in schedule.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(CoreError::NonMonotoneSchedule {
                position: position + 1,
            });
        }
    }
    Ok(())
}

fn require_normalized(psi0: &WaveFunction) -> CoreResult<()> {
    if !psi0.is_normalized() {
        return Err(CoreError::Unnormalized {
            norm_sq: psi0.norm_sq(),
        });
    }
    Ok(())
}

/// Evaluates the correlator on a strictly increasing schedule of kick
/// counts, resuming forward evolution between samples.
pub fn run_series(
    ops: &FloquetOps,
    kind: &OtocKind,
    schedule: &[usize],
    psi0: &WaveFunction,
    method: &dyn OtocMethod,
) -> CoreResult<Vec<OtocSample>> {
    validate_schedule(schedule)?;
    require_normalized(psi0)?;
    psi0.lattice().ensure_matches(&ops.lattice())?;
    let a = kind.a_operator(ops.lattice())?;
    let b = kind.b_operator(psi0);
    let mut u_psi = psi0.clone();
    let mut u_b_psi = b.apply(psi0)?;
    let mut reached = 0usize;
    let mut series = Vec::with_capacity(schedule.len());
    for &t in schedule {
        u_psi = ops.evolve(&u_psi, t - reached, Direction::Forward)?;
        u_b_psi = ops.evolve(&u_b_psi, t - reached, Direction::Forward)?;
        reached = t;
        let psi_r = ops.evolve(&a.apply(&u_psi)?, t, Direction::Backward)?;
        let phi_r = ops.evolve(&a.apply(&u_b_psi)?, t, Direction::Backward)?;
        let mut sample = method.assemble(t, kind, &b, &psi_r, &phi_r)?;
        if kind.is_fidelity() {
            sample.extras.insert("p2", u_psi.expectation_p2()?);
        }
        series.push(sample);
    }
    Ok(series)
}

/// Single-point evaluation with the three-term decomposition strategy.
pub fn otoc_decomposition(
    ops: &FloquetOps,
    kind: &OtocKind,
    t: usize,
    psi0: &WaveFunction,
) -> CoreResult<OtocSample> {
    let mut series = run_series(ops, kind, &[t], psi0, &DecompositionMethod)?;
    Ok(series.pop().expect("one schedule point yields one sample"))
}

/// Single-point evaluation with the commutator-norm strategy.
pub fn otoc_commutator_norm(
    ops: &FloquetOps,
    kind: &OtocKind,
    t: usize,
    psi0: &WaveFunction,
) -> CoreResult<OtocSample> {
    let mut series = run_series(ops, kind, &[t], psi0, &CommutatorNormMethod)?;
    Ok(series.pop().expect("one schedule point yields one sample"))
}

/// Fidelity correlator evaluated directly from the overlap:
/// F_O(t) = |⟨ψ₀| U†(t) T(ε) U(t) |ψ₀⟩|² and C = 1 − F_O, which equals the
/// projector-B commutator norm identically.
pub fn fotoc(
    ops: &FloquetOps,
    epsilon: f64,
    t: usize,
    psi0: &WaveFunction,
) -> CoreResult<OtocSample> {
    require_normalized(psi0)?;
    psi0.lattice().ensure_matches(&ops.lattice())?;
    let translation = Operator::translation(ops.lattice(), epsilon)?;
    let psi_r = ops.heisenberg_apply(&translation, t, psi0)?;
    let overlap = psi0.inner(&psi_r)?;
    let f_o = overlap.norm_sqr();
    let c = 1.0 - f_o;
    let mut extras = BTreeMap::new();
    extras.insert("F_O", f_o);
    Ok(OtocSample {
        t,
        c,
        // B² = B for a projector, so C₁ is the overlap square itself; φ_R
        // coincides with ψ_R, and C₃ = ⟨ψ₀|ψ_R⟩⟨ψ_R|ψ₀⟩ is real.
        c1: Some(f_o),
        c2: Some(psi_r.norm_sq()),
        c3: Some(C64::new(f_o, 0.0)),
        method: "decomposition",
        extras,
    })
}

/// Energy diagnostics ⟨p²(t)⟩, ⟨p(t)⟩ on a strictly increasing schedule.
pub fn energy_series(
    ops: &FloquetOps,
    schedule: &[usize],
    psi0: &WaveFunction,
) -> CoreResult<Vec<EnergySample>> {
    validate_schedule(schedule)?;
    require_normalized(psi0)?;
    psi0.lattice().ensure_matches(&ops.lattice())?;
    let mut u_psi = psi0.clone();
    let mut reached = 0usize;
    let mut series = Vec::with_capacity(schedule.len());
    for &t in schedule {
        u_psi = ops.evolve(&u_psi, t - reached, Direction::Forward)?;
        reached = t;
        series.push(EnergySample {
            t,
            p2: u_psi.expectation_p2()?,
            p: u_psi.expectation_p()?,
        });
    }
    Ok(series)
}

/// Smallest power-of-two basis size that accommodates the expected momentum
/// drift: at resonance the occupied bandwidth grows like K·t/ħ, and the rule
/// N = next power of two ≥ 64 + 8·⌈K·t_max/ħ⌉ leaves the boundary margin the
/// leakage guard then verifies.
pub fn auto_basis_size(kick_strength: f64, t_max: usize, hbar: f64) -> usize {
    let drift = (kick_strength.abs() * t_max as f64 / hbar).ceil() as usize;
    (64 + 8 * drift).next_power_of_two()
}
