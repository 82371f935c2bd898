//! Rotor states in the momentum representation and on the conjugate angle grid.
//!
//! The momentum amplitudes a_n are canonical; angle samples
//! ψ(θ_j) = (1/√2π) Σ_n a_n e^{inθ_j} are a derived, losslessly invertible
//! view obtained by a unitary discrete transform pair, with Parseval identity
//! Σ_n |a_n|² = (2π/N) Σ_j |ψ(θ_j)|².

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{CoreError, CoreResult};
use crate::fourier;
use crate::lattice::MomentumLattice;

/// Tolerance for the `normalized` bookkeeping flag: a state is marked
/// normalized when |Σ|a_n|² − 1| is below this.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Boundary-leakage threshold: the total population in the outer 10% of
/// momentum slots must stay below this for any state that feeds an
/// observable, otherwise the truncation is aliasing and we abort.
pub const LEAKAGE_THRESHOLD: f64 = 1e-12;

/// Ready-made initial states.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// ψ(θ) = cos(θ)/√π, i.e. amplitudes 1/√2 at n = ±1.
    Cosine,
    /// Momentum eigenstate |n₀⟩.
    Plane(i64),
    /// Arbitrary coefficient map n ↦ a_n; normalized on construction.
    Custom(BTreeMap<i64, C64>),
}

/// A rotor state: momentum amplitudes in ascending-index order plus a
/// normalization flag maintained through unitary operations.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    lattice: MomentumLattice,
    amps: Vec<C64>,
    normalized: bool,
}

impl WaveFunction {
    /// Prepares one of the standard initial states on `lattice`.
    pub fn initial(lattice: MomentumLattice, init: &InitialState) -> CoreResult<Self> {
        let mut amps = vec![C64::new(0.0, 0.0); lattice.size()];
        match init {
            InitialState::Cosine => {
                let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                amps[lattice.slot_of(1)?] = a;
                amps[lattice.slot_of(-1)?] = a;
            }
            InitialState::Plane(n0) => {
                amps[lattice.slot_of(*n0)?] = C64::new(1.0, 0.0);
            }
            InitialState::Custom(coeffs) => {
                let mut norm_sq = 0.0;
                for (&n, &c) in coeffs {
                    amps[lattice.slot_of(n)?] = c;
                    norm_sq += c.norm_sqr();
                }
                if norm_sq <= 0.0 {
                    return Err(CoreError::ZeroNorm);
                }
                let scale = 1.0 / norm_sq.sqrt();
                for a in &mut amps {
                    *a *= scale;
                }
            }
        }
        Ok(Self {
            lattice,
            amps,
            normalized: true,
        })
    }

    /// Wraps raw amplitudes; the normalization flag is deduced from the data.
    pub fn from_amplitudes(lattice: MomentumLattice, amps: Vec<C64>) -> CoreResult<Self> {
        if amps.len() != lattice.size() {
            return Err(CoreError::LengthMismatch {
                expected: lattice.size(),
                got: amps.len(),
            });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let normalized = (norm_sq - 1.0).abs() <= NORMALIZATION_TOL;
        Ok(Self {
            lattice,
            amps,
            normalized,
        })
    }

    /// Internal constructor that carries an already-known flag through an
    /// operation instead of re-measuring the norm.
    pub(crate) fn with_flag(lattice: MomentumLattice, amps: Vec<C64>, normalized: bool) -> Self {
        debug_assert_eq!(amps.len(), lattice.size());
        Self {
            lattice,
            amps,
            normalized,
        }
    }

    /// The lattice this state lives on.
    pub fn lattice(&self) -> MomentumLattice {
        self.lattice
    }

    /// Amplitudes in ascending-index order.
    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// Amplitude of momentum index `index`.
    pub fn amp(&self, index: i64) -> CoreResult<C64> {
        Ok(self.amps[self.lattice.slot_of(index)?])
    }

    /// Whether the state is flagged as unit-norm.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Σ_n |a_n|².
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Hermitian inner product ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &WaveFunction) -> CoreResult<C64> {
        self.lattice.ensure_matches(&other.lattice)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Population in the outer 10% of momentum slots (⌈N/20⌉ at each edge).
    pub fn boundary_leakage(&self) -> f64 {
        let n = self.lattice.size();
        let edge = n.div_ceil(20).max(1);
        let low: f64 = self.amps[..edge].iter().map(|a| a.norm_sqr()).sum();
        let high: f64 = self.amps[n - edge..].iter().map(|a| a.norm_sqr()).sum();
        low + high
    }

    /// Errors when the boundary population exceeds [`LEAKAGE_THRESHOLD`].
    pub fn check_leakage(&self) -> CoreResult<()> {
        let leakage = self.boundary_leakage();
        if leakage >= LEAKAGE_THRESHOLD {
            return Err(CoreError::BoundaryLeakage {
                leakage,
                threshold: LEAKAGE_THRESHOLD,
            });
        }
        Ok(())
    }

    fn ensure_observable_input(&self) -> CoreResult<()> {
        if !self.normalized {
            return Err(CoreError::Unnormalized {
                norm_sq: self.norm_sq(),
            });
        }
        self.check_leakage()
    }

    /// ⟨p⟩ = Σ_n nħ |a_n|² on a normalized, leakage-free state.
    pub fn expectation_p(&self) -> CoreResult<f64> {
        self.ensure_observable_input()?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(slot, a)| self.lattice.momentum(self.lattice.index_at(slot)) * a.norm_sqr())
            .sum())
    }

    /// ⟨p²⟩ = Σ_n (nħ)² |a_n|² on a normalized, leakage-free state.
    pub fn expectation_p2(&self) -> CoreResult<f64> {
        self.ensure_observable_input()?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(slot, a)| {
                let p = self.lattice.momentum(self.lattice.index_at(slot));
                p * p * a.norm_sqr()
            })
            .sum())
    }

    /// Synthesizes the angle-grid view ψ(θ_j) = (1/√2π) Σ_n a_n e^{inθ_j}.
    pub fn to_angle(&self) -> AngleSamples {
        let values = fourier::synthesize_on_grid(&self.amps, self.lattice.size());
        AngleSamples {
            lattice: self.lattice,
            values,
        }
    }

    /// Multiplies amplitudes by e^{inε}; this is the exact momentum-space
    /// form of the argument shift ψ(θ) ↦ ψ(θ + ε).
    pub(crate) fn translated(&self, epsilon: f64) -> WaveFunction {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(slot, &a)| {
                let n = self.lattice.index_at(slot) as f64;
                a * C64::new((n * epsilon).cos(), (n * epsilon).sin())
            })
            .collect();
        WaveFunction::with_flag(self.lattice, amps, self.normalized)
    }

    /// Multiplies amplitudes by (in)^order, yielding the coefficient vector
    /// of the order-th angle derivative (no ħ factor).
    pub(crate) fn derivative_coefficients(&self, order: u32) -> WaveFunction {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(slot, &a)| {
                let n = self.lattice.index_at(slot) as f64;
                a * C64::new(0.0, n).powu(order)
            })
            .collect();
        WaveFunction::with_flag(self.lattice, amps, false)
    }
}

/// Angle-grid view of a state: values ψ(θ_j) at θ_j = 2πj/N.
#[derive(Debug, Clone)]
pub struct AngleSamples {
    lattice: MomentumLattice,
    values: Vec<C64>,
}

impl AngleSamples {
    /// Wraps externally produced samples (one per angle node).
    pub fn from_values(lattice: MomentumLattice, values: Vec<C64>) -> CoreResult<Self> {
        if values.len() != lattice.size() {
            return Err(CoreError::LengthMismatch {
                expected: lattice.size(),
                got: values.len(),
            });
        }
        Ok(Self { lattice, values })
    }

    /// The lattice whose angle grid these samples live on.
    pub fn lattice(&self) -> MomentumLattice {
        self.lattice
    }

    /// Sample values in node order.
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Analyzes the samples back into momentum amplitudes,
    /// a_n = (√2π/N) Σ_j ψ(θ_j) e^{−inθ_j}.
    pub fn to_momentum(&self) -> WaveFunction {
        let mut buf = self.values.clone();
        fourier::dft_forward(&mut buf);
        let scale = (2.0 * std::f64::consts::PI).sqrt() / self.lattice.size() as f64;
        for v in &mut buf {
            *v *= scale;
        }
        let amps = fourier::fft_to_lattice_order(&buf);
        WaveFunction::from_amplitudes(self.lattice, amps)
            .expect("analysis preserves the sample count")
    }

    /// Spectral derivative d^order/dθ^order for order ∈ {1, 2, 3}: transforms
    /// to momentum, multiplies by (in)^order, and synthesizes back.
    pub fn spectral_derivative(&self, order: u32) -> CoreResult<AngleSamples> {
        if !(1..=3).contains(&order) {
            return Err(CoreError::UnsupportedDerivativeOrder(order));
        }
        Ok(self.to_momentum().derivative_coefficients(order).to_angle())
    }

    /// Maximum |self − other| over the grid; lattices must match.
    pub fn max_deviation(&self, other: &AngleSamples) -> CoreResult<f64> {
        self.lattice.ensure_matches(&other.lattice)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}
