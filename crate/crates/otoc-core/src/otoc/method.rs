//! Interchangeable evaluation strategies for the correlator.
//!
//! Both strategies consume the same reversed states |ψ_R⟩ = U†(t) A U(t)|ψ₀⟩
//! and |φ_R⟩ = U†(t) A U(t) B|ψ₀⟩ and assemble
//! C(t) = ⟨[A(t),B]† [A(t),B]⟩ from them:
//!
//! * `decomposition` reports the three terms C₁ = ⟨ψ_R|B²|ψ_R⟩,
//!   C₂ = ⟨φ_R|φ_R⟩, C₃ = ⟨ψ_R|B|φ_R⟩ and their combination
//!   C = C₁ + C₂ − 2 Re C₃.
//! * `commutator-norm` evaluates the same quantity as the single norm
//!   C = ‖ |φ_R⟩ − B|ψ_R⟩ ‖², leaving the components unset.
//!
//! Having two algebraically equal but numerically independent routes is the
//! point: their agreement is a structural cross-check on the whole protocol.

use crate::error::CoreResult;
use crate::operator::Operator;
use crate::state::WaveFunction;

use super::{OtocKind, OtocSample};

/// A correlator evaluation strategy.
pub trait OtocMethod: Send + Sync {
    /// Tag recorded in every sample this strategy produces.
    fn name(&self) -> &'static str;

    /// Combines the reversed states into one sample at kick count `t`.
    fn assemble(
        &self,
        t: usize,
        kind: &OtocKind,
        b: &Operator,
        psi_r: &WaveFunction,
        phi_r: &WaveFunction,
    ) -> CoreResult<OtocSample>;
}

/// Three-term evaluation with all components reported.
#[derive(Debug, Default)]
pub struct DecompositionMethod;

impl OtocMethod for DecompositionMethod {
    fn name(&self) -> &'static str {
        "decomposition"
    }

    fn assemble(
        &self,
        t: usize,
        kind: &OtocKind,
        b: &Operator,
        psi_r: &WaveFunction,
        phi_r: &WaveFunction,
    ) -> CoreResult<OtocSample> {
        let b_psi_r = b.apply(psi_r)?;
        let c1 = b_psi_r.norm_sq();
        let c2 = phi_r.norm_sq();
        let c3 = b_psi_r.inner(phi_r)?;
        let c = c1 + c2 - 2.0 * c3.re;
        let mut sample = OtocSample {
            t,
            c,
            c1: Some(c1),
            c2: Some(c2),
            c3: Some(c3),
            method: self.name(),
            extras: Default::default(),
        };
        if kind.is_fidelity() {
            // For projector B, B² = B makes C₁ the squared overlap itself.
            sample.extras.insert("F_O", c1);
        }
        Ok(sample)
    }
}

/// Single-norm evaluation of the commutator acting on the initial state.
#[derive(Debug, Default)]
pub struct CommutatorNormMethod;

impl OtocMethod for CommutatorNormMethod {
    fn name(&self) -> &'static str {
        "commutator-norm"
    }

    fn assemble(
        &self,
        t: usize,
        kind: &OtocKind,
        b: &Operator,
        psi_r: &WaveFunction,
        phi_r: &WaveFunction,
    ) -> CoreResult<OtocSample> {
        let b_psi_r = b.apply(psi_r)?;
        phi_r.lattice().ensure_matches(&b_psi_r.lattice())?;
        let c: f64 = phi_r
            .amps()
            .iter()
            .zip(b_psi_r.amps())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        let mut sample = OtocSample {
            t,
            c,
            c1: None,
            c2: None,
            c3: None,
            method: self.name(),
            extras: Default::default(),
        };
        if kind.is_fidelity() {
            sample.extras.insert("F_O", b_psi_r.norm_sq());
        }
        Ok(sample)
    }
}

/// Name-keyed strategy registry; new strategies are registered here and the
/// rest of the pipeline dispatches through the trait object.
pub struct MethodRegistry {
    entries: Vec<(&'static str, Box<dyn OtocMethod>)>,
}

impl MethodRegistry {
    /// The built-in strategies, keyed `decomp` and `norm`.
    pub fn builtin() -> Self {
        Self {
            entries: vec![
                (
                    "decomp",
                    Box::new(DecompositionMethod) as Box<dyn OtocMethod>,
                ),
                ("norm", Box::new(CommutatorNormMethod)),
            ],
        }
    }

    /// Looks a strategy up by registry key.
    pub fn get(&self, key: &str) -> Option<&dyn OtocMethod> {
        self.entries
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, m)| m.as_ref())
    }

    /// Registered keys, in registration order.
    pub fn keys(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(k, _)| *k).collect()
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
