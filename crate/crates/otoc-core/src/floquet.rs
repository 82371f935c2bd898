//! One-kick Floquet propagation for the kicked rotor, with exact time
//! reversal and Heisenberg-picture conjugation.
//!
//! One period applies the kick phase U_K = exp(−iK cosθ/ħ) on the angle grid
//! and then the free phase U_f = exp(−iħn²/2) on the momentum lattice, i.e.
//! U = U_f U_K. The adjoint U† = U_K† U_f† therefore applies the conjugated
//! free phase first and the conjugated kick phase second. Both directions
//! read the same two stored tables (backward uses their elementwise
//! conjugates), so a forward/backward pair cancels phase-by-phase at the bit
//! level rather than merely to formula accuracy.
//!
//! At the resonance ħ = 4π every free phase exp(−i2πn²) is unity. The table
//! is then constructed as the exact constant 1: evaluating exp(−i2πn²) in
//! floating point would instead pick up argument-reduction error growing
//! with n², which is precisely the artifact the resonant flag exists to
//! exclude.

use num_complex::Complex64 as C64;

use crate::error::{CoreError, CoreResult};
use crate::lattice::{MomentumLattice, RESONANT_HBAR};
use crate::operator::Operator;
use crate::state::{AngleSamples, WaveFunction};

/// Propagation direction for [`FloquetOps::step`] and [`FloquetOps::evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Apply U = U_f U_K per kick.
    Forward,
    /// Apply U† = U_K† U_f† per kick.
    Backward,
}

/// Precomputed one-period propagator for fixed (K, ħ, lattice).
///
/// Immutable after construction and freely shareable across threads; a
/// single trajectory is inherently sequential but distinct trajectories may
/// run in parallel against the same `FloquetOps`.
#[derive(Debug, Clone)]
pub struct FloquetOps {
    lattice: MomentumLattice,
    kick_strength: f64,
    resonant: bool,
    /// f(n) per momentum slot; exactly 1 everywhere when `resonant`.
    free_fwd: Vec<C64>,
    /// Elementwise conjugate of `free_fwd`.
    free_bwd: Vec<C64>,
    /// g(θ_j) per angle node.
    kick_fwd: Vec<C64>,
    /// Elementwise conjugate of `kick_fwd`.
    kick_bwd: Vec<C64>,
}

impl FloquetOps {
    /// Builds the propagator.
    ///
    /// `resonant_hint` semantics: `Some(true)` asserts that the lattice was
    /// constructed with the exact representable 4π and errors on any other ħ;
    /// otherwise resonance is detected by bit equality with that constant.
    /// Passing a value merely close to 4π does not engage the resonant
    /// construction — resonance is exact-value semantics, not proximity.
    pub fn new(
        lattice: MomentumLattice,
        kick_strength: f64,
        resonant_hint: Option<bool>,
    ) -> CoreResult<Self> {
        if !kick_strength.is_finite() || kick_strength < 0.0 {
            return Err(CoreError::InvalidKickStrength(kick_strength));
        }
        let resonant = match resonant_hint {
            Some(true) => {
                if !lattice.is_resonant_hbar() {
                    return Err(CoreError::ResonanceContradiction {
                        hbar: lattice.hbar(),
                        expected: RESONANT_HBAR,
                    });
                }
                true
            }
            _ => lattice.is_resonant_hbar(),
        };
        let free_fwd: Vec<C64> = if resonant {
            vec![C64::new(1.0, 0.0); lattice.size()]
        } else {
            lattice
                .indices()
                .map(|n| {
                    let arg = -lattice.hbar() * (n as f64) * (n as f64) / 2.0;
                    C64::new(arg.cos(), arg.sin())
                })
                .collect()
        };
        let kick_fwd: Vec<C64> = (0..lattice.size())
            .map(|j| {
                let arg = -kick_strength * lattice.angle_node(j).cos() / lattice.hbar();
                C64::new(arg.cos(), arg.sin())
            })
            .collect();
        let free_bwd = free_fwd.iter().map(C64::conj).collect();
        let kick_bwd = kick_fwd.iter().map(C64::conj).collect();
        Ok(Self {
            lattice,
            kick_strength,
            resonant,
            free_fwd,
            free_bwd,
            kick_fwd,
            kick_bwd,
        })
    }

    /// The lattice this propagator acts on.
    pub fn lattice(&self) -> MomentumLattice {
        self.lattice
    }

    /// The kick strength K.
    pub fn kick_strength(&self) -> f64 {
        self.kick_strength
    }

    /// Whether the exact-resonance construction is active.
    pub fn is_resonant(&self) -> bool {
        self.resonant
    }

    fn kick_multiply(&self, psi: &WaveFunction, table: &[C64]) -> WaveFunction {
        let values: Vec<C64> = psi
            .to_angle()
            .values()
            .iter()
            .zip(table)
            .map(|(v, u)| v * u)
            .collect();
        AngleSamples::from_values(psi.lattice(), values)
            .expect("kick table length equals the lattice size")
            .to_momentum()
    }

    fn free_multiply(psi: &mut WaveFunction, table: &[C64]) {
        for (a, u) in psi.amps_mut().iter_mut().zip(table) {
            *a *= *u;
        }
    }

    /// Applies one kick period in the given direction.
    pub fn step(&self, psi: &WaveFunction, direction: Direction) -> CoreResult<WaveFunction> {
        psi.lattice().ensure_matches(&self.lattice)?;
        match direction {
            Direction::Forward => {
                let mut out = self.kick_multiply(psi, &self.kick_fwd);
                Self::free_multiply(&mut out, &self.free_fwd);
                Ok(out)
            }
            Direction::Backward => {
                let mut pre = psi.clone();
                Self::free_multiply(&mut pre, &self.free_bwd);
                Ok(self.kick_multiply(&pre, &self.kick_bwd))
            }
        }
    }

    /// Applies `t` kick periods, checking the boundary-leakage guard after
    /// every step so that an undersized lattice fails loudly instead of
    /// aliasing.
    pub fn evolve(
        &self,
        psi: &WaveFunction,
        t: usize,
        direction: Direction,
    ) -> CoreResult<WaveFunction> {
        let mut current = psi.clone();
        for _ in 0..t {
            current = self.step(&current, direction)?;
            current.check_leakage()?;
        }
        Ok(current)
    }

    /// Heisenberg conjugation applied to a state:
    /// A(t)|ψ⟩ = U†(t) A U(t)|ψ⟩, computed as forward evolution, operator
    /// application, then exact backward evolution.
    pub fn heisenberg_apply(
        &self,
        a: &Operator,
        t: usize,
        psi: &WaveFunction,
    ) -> CoreResult<WaveFunction> {
        let forward = self.evolve(psi, t, Direction::Forward)?;
        let mid = a.apply(&forward)?;
        self.evolve(&mid, t, Direction::Backward)
    }
}
