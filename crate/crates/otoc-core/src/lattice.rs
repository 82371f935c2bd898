//! Truncated momentum lattice for the planar rotor.
//!
//! The rotor's canonical basis is the set of angular-momentum eigenstates
//! ⟨θ|n⟩ = e^{inθ}/√(2π) with eigenvalues p_n = nħ_eff. A simulation keeps
//! the symmetric window n ∈ [−N/2, N/2) together with the conjugate angle
//! grid θ_j = 2πj/N; both views share the same index count N.

use crate::error::{CoreError, CoreResult};

/// Effective Planck constant at the principal quantum resonance, ħ_eff = 4π.
///
/// Resonance is detected by bit equality against this constant (or requested
/// explicitly); it is never inferred from approximate magnitude comparisons.
pub const RESONANT_HBAR: f64 = 4.0 * std::f64::consts::PI;

/// Symmetric momentum truncation: indices n ∈ [−N/2, N/2), momenta p_n = nħ.
///
/// The struct is tiny and copyable; amplitudes live in
/// [`WaveFunction`](crate::state::WaveFunction), ordered by ascending index
/// so that slot j holds n = j − N/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumLattice {
    size: usize,
    hbar: f64,
}

impl MomentumLattice {
    /// Builds a lattice with `size` momentum states and effective Planck
    /// constant `hbar`.
    ///
    /// `size` must be an even integer ≥ 4 and `hbar` positive and finite.
    pub fn new(size: usize, hbar: f64) -> CoreResult<Self> {
        if size < 4 || !size.is_multiple_of(2) {
            return Err(CoreError::InvalidBasisSize(size));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(CoreError::InvalidHbar(hbar));
        }
        Ok(Self { size, hbar })
    }

    /// Number of momentum states (equals the number of angle nodes).
    pub fn size(&self) -> usize {
        self.size
    }

    /// Effective Planck constant ħ_eff.
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Smallest momentum index, −N/2.
    pub fn index_min(&self) -> i64 {
        -((self.size / 2) as i64)
    }

    /// Largest momentum index, N/2 − 1.
    pub fn index_max(&self) -> i64 {
        (self.size / 2) as i64 - 1
    }

    /// Ascending momentum indices −N/2, …, N/2 − 1.
    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.index_min()..=self.index_max()
    }

    /// Momentum index stored in slot `slot` (slot 0 ↔ n = −N/2).
    pub fn index_at(&self, slot: usize) -> i64 {
        slot as i64 + self.index_min()
    }

    /// Storage slot of momentum index `index`.
    pub fn slot_of(&self, index: i64) -> CoreResult<usize> {
        if index < self.index_min() || index > self.index_max() {
            return Err(CoreError::IndexOutOfRange {
                index,
                lo: self.index_min(),
                hi: self.index_max(),
            });
        }
        Ok((index - self.index_min()) as usize)
    }

    /// Momentum eigenvalue p_n = nħ of index `index`.
    pub fn momentum(&self, index: i64) -> f64 {
        index as f64 * self.hbar
    }

    /// Angle node θ_j = 2πj/N.
    pub fn angle_node(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.size as f64
    }

    /// All angle nodes θ_0, …, θ_{N−1}.
    pub fn angle_nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.size).map(|j| self.angle_node(j))
    }

    /// True when ħ_eff bit-equals the principal-resonance constant 4π.
    pub fn is_resonant_hbar(&self) -> bool {
        self.hbar.to_bits() == RESONANT_HBAR.to_bits()
    }

    /// Errors unless `other` is the same lattice (same size, identical ħ).
    pub(crate) fn ensure_matches(&self, other: &MomentumLattice) -> CoreResult<()> {
        if self.size != other.size || self.hbar.to_bits() != other.hbar.to_bits() {
            return Err(CoreError::LatticeMismatch {
                left_size: self.size,
                left_hbar: self.hbar,
                right_size: other.size,
                right_hbar: other.hbar,
            });
        }
        Ok(())
    }
}
