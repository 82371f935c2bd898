//! Observables and simple unitaries acting on rotor states.
//!
//! Everything here is either diagonal in one of the two conjugate bases or a
//! rank-one projector, which covers the operator content of the correlators:
//! the momentum observable p, the angle translation T(ε) = e^{ipε/ħ}
//! (momentum-diagonal with phases e^{inε}), diagonal phase unitaries supplied
//! as explicit tables, and the projector |χ⟩⟨χ| used for fidelity-type
//! correlators.

use num_complex::Complex64 as C64;

use crate::error::{CoreError, CoreResult};
use crate::lattice::MomentumLattice;
use crate::state::WaveFunction;

/// Maximum allowed deviation of a phase-table entry from unit modulus.
pub const PHASE_UNITARITY_TOL: f64 = 1e-12;

/// An operator on rotor states.
#[derive(Debug, Clone)]
pub enum Operator {
    /// The momentum observable: a_n ↦ nħ a_n.
    Momentum,
    /// A unitary that is diagonal in the momentum basis: a_n ↦ u_n a_n.
    MomentumPhase {
        lattice: MomentumLattice,
        /// One unit-modulus factor per momentum slot, ascending-index order.
        phases: Vec<C64>,
    },
    /// A unitary that is diagonal on the angle grid: ψ(θ_j) ↦ u_j ψ(θ_j).
    AnglePhase {
        lattice: MomentumLattice,
        /// One unit-modulus factor per angle node.
        phases: Vec<C64>,
    },
    /// The rank-one projector |χ⟩⟨χ|.
    Projector(WaveFunction),
    /// The identity.
    Identity,
}

fn validate_phases(lattice: &MomentumLattice, phases: &[C64]) -> CoreResult<()> {
    if phases.len() != lattice.size() {
        return Err(CoreError::LengthMismatch {
            expected: lattice.size(),
            got: phases.len(),
        });
    }
    for (index, u) in phases.iter().enumerate() {
        let modulus = u.norm();
        if (modulus - 1.0).abs() > PHASE_UNITARITY_TOL {
            return Err(CoreError::NonUnitaryPhase { index, modulus });
        }
    }
    Ok(())
}

impl Operator {
    /// The momentum observable p.
    pub fn momentum() -> Self {
        Operator::Momentum
    }

    /// The identity operator.
    pub fn identity() -> Self {
        Operator::Identity
    }

    /// The translation T(ε): (Tψ)(θ) = ψ(θ + ε), i.e. phases e^{inε} in the
    /// momentum basis. The shift is reduced modulo 2π first so that ε = 2π
    /// yields the identity table exactly.
    pub fn translation(lattice: MomentumLattice, epsilon: f64) -> CoreResult<Self> {
        if !epsilon.is_finite() {
            return Err(CoreError::InvalidTranslation(epsilon));
        }
        let eps = epsilon.rem_euclid(2.0 * std::f64::consts::PI);
        let phases = lattice
            .indices()
            .map(|n| {
                let arg = n as f64 * eps;
                C64::new(arg.cos(), arg.sin())
            })
            .collect();
        Ok(Operator::MomentumPhase { lattice, phases })
    }

    /// A momentum-diagonal unitary from an explicit phase table.
    pub fn momentum_phase(lattice: MomentumLattice, phases: Vec<C64>) -> CoreResult<Self> {
        validate_phases(&lattice, &phases)?;
        Ok(Operator::MomentumPhase { lattice, phases })
    }

    /// An angle-diagonal unitary from an explicit phase table.
    pub fn angle_phase(lattice: MomentumLattice, phases: Vec<C64>) -> CoreResult<Self> {
        validate_phases(&lattice, &phases)?;
        Ok(Operator::AnglePhase { lattice, phases })
    }

    /// The projector onto `target`.
    pub fn projector(target: WaveFunction) -> Self {
        Operator::Projector(target)
    }

    /// Whether this operator preserves norms.
    pub fn is_unitary(&self) -> bool {
        matches!(
            self,
            Operator::MomentumPhase { .. } | Operator::AnglePhase { .. } | Operator::Identity
        )
    }

    /// Applies the operator, producing a new state on the same lattice.
    pub fn apply(&self, psi: &WaveFunction) -> CoreResult<WaveFunction> {
        match self {
            Operator::Momentum => {
                let l = psi.lattice();
                let amps = psi
                    .amps()
                    .iter()
                    .enumerate()
                    .map(|(slot, &a)| a * l.momentum(l.index_at(slot)))
                    .collect();
                let out = WaveFunction::with_flag(l, amps, false);
                // p amplifies the basis edges by ±Nħ/2, so aliasing that was
                // invisible in the input becomes an error here.
                out.check_leakage()?;
                Ok(out)
            }
            Operator::MomentumPhase { lattice, phases } => {
                psi.lattice().ensure_matches(lattice)?;
                let amps = psi
                    .amps()
                    .iter()
                    .zip(phases)
                    .map(|(&a, &u)| a * u)
                    .collect();
                Ok(WaveFunction::with_flag(
                    psi.lattice(),
                    amps,
                    psi.is_normalized(),
                ))
            }
            Operator::AnglePhase { lattice, phases } => {
                psi.lattice().ensure_matches(lattice)?;
                let multiplied: Vec<C64> = psi
                    .to_angle()
                    .values()
                    .iter()
                    .zip(phases)
                    .map(|(v, u)| v * u)
                    .collect();
                let samples = crate::state::AngleSamples::from_values(psi.lattice(), multiplied)
                    .expect("phase table length was validated at construction");
                Ok(samples.to_momentum())
            }
            Operator::Projector(target) => {
                target.lattice().ensure_matches(&psi.lattice())?;
                let c = target.inner(psi)?;
                let amps = target.amps().iter().map(|&a| a * c).collect();
                Ok(WaveFunction::with_flag(psi.lattice(), amps, false))
            }
            Operator::Identity => Ok(psi.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RESONANT_HBAR;
    use crate::state::InitialState;
    use std::collections::BTreeMap;

    fn lat(n: usize) -> MomentumLattice {
        MomentumLattice::new(n, RESONANT_HBAR).expect("valid lattice")
    }

    #[test]
    fn momentum_scales_each_amplitude_by_n_hbar() {
        let psi = WaveFunction::initial(lat(8), &InitialState::Cosine).expect("cosine");
        let p_psi = Operator::momentum().apply(&psi).expect("apply p");
        let plus = p_psi.amp(1).unwrap();
        let minus = p_psi.amp(-1).unwrap();
        // 4*pi / sqrt(2) = 8.885765876316732
        assert!(
            (plus.re - 8.885765876316732).abs() < 1e-14,
            "p a_1 should be 4pi/sqrt(2), got {plus}"
        );
        assert!(
            (minus.re + 8.885765876316732).abs() < 1e-14,
            "p a_-1 should be -4pi/sqrt(2), got {minus}"
        );
        assert!(!p_psi.is_normalized(), "p is not norm-preserving");
    }

    #[test]
    fn full_turn_translation_is_exactly_the_identity() {
        let l = lat(32);
        let op = Operator::translation(l, 2.0 * std::f64::consts::PI).expect("translation");
        match &op {
            Operator::MomentumPhase { phases, .. } => {
                for (i, u) in phases.iter().enumerate() {
                    assert_eq!(*u, C64::new(1.0, 0.0), "phase {i} must be exactly 1");
                }
            }
            other => panic!("translation must be momentum-diagonal, got {other:?}"),
        }
    }

    #[test]
    fn half_turn_translation_flips_odd_plane_waves() {
        let l = lat(8);
        let psi = WaveFunction::initial(l, &InitialState::Plane(1)).expect("plane");
        let t = Operator::translation(l, std::f64::consts::PI).expect("translation");
        let shifted = t.apply(&psi).expect("apply");
        let a = shifted.amp(1).unwrap();
        assert!(
            (a - C64::new(-1.0, 0.0)).norm() < 1e-15,
            "e^{{i pi}} must flip the sign, got {a}"
        );
    }

    #[test]
    fn translation_matches_sampled_argument_shift() {
        let l = lat(64);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(-4, C64::new(0.5, 0.1));
        coeffs.insert(2, C64::new(-0.3, 0.8));
        let psi = WaveFunction::initial(l, &InitialState::Custom(coeffs)).expect("custom");
        let eps = 1.3;
        let shifted = Operator::translation(l, eps)
            .expect("translation")
            .apply(&psi)
            .expect("apply")
            .to_angle();
        let norm = 0.3989422804014327;
        for (j, v) in shifted.values().iter().enumerate() {
            let theta = l.angle_node(j) + eps;
            let mut direct = C64::new(0.0, 0.0);
            for n in l.indices() {
                let phase = n as f64 * theta;
                direct += psi.amp(n).unwrap() * C64::new(phase.cos(), phase.sin());
            }
            direct *= norm;
            assert!(
                (v - direct).norm() < 1e-13,
                "node {j}: got {v}, want psi(theta+eps) = {direct}"
            );
        }
    }

    #[test]
    fn projector_reproduces_overlap_times_target() {
        let l = lat(8);
        let chi = WaveFunction::initial(l, &InitialState::Cosine).expect("cosine");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, C64::new(1.0, 0.0));
        coeffs.insert(3, C64::new(1.0, 0.0));
        let psi = WaveFunction::initial(l, &InitialState::Custom(coeffs)).expect("custom");
        let proj = Operator::projector(chi.clone());
        let out = proj.apply(&psi).expect("apply");
        // <chi|psi> = (1/sqrt2)(1/sqrt2) = 1/2, so the output is chi/2.
        let want = chi.amp(1).unwrap() * 0.5;
        let got = out.amp(1).unwrap();
        assert!((got - want).norm() < 1e-15, "want {want}, got {got}");
        assert!((out.norm_sq() - 0.25).abs() < 1e-15, "|c|^2 = 1/4");
    }

    #[test]
    fn angle_phase_agrees_with_direct_grid_multiplication() {
        let l = lat(32);
        let phases: Vec<C64> = (0..l.size())
            .map(|j| {
                let arg = 0.7 * l.angle_node(j).cos();
                C64::new(arg.cos(), arg.sin())
            })
            .collect();
        let op = Operator::angle_phase(l, phases.clone()).expect("valid table");
        let psi = WaveFunction::initial(l, &InitialState::Cosine).expect("cosine");
        let out = op.apply(&psi).expect("apply").to_angle();
        let base = psi.to_angle();
        for (j, v) in out.values().iter().enumerate() {
            let want = base.values()[j] * phases[j];
            assert!((v - want).norm() < 1e-13, "node {j}: want {want}, got {v}");
        }
        assert!(op.is_unitary());
    }

    #[test]
    fn non_unit_modulus_tables_are_rejected() {
        let l = lat(8);
        let mut phases = vec![C64::new(1.0, 0.0); 8];
        phases[3] = C64::new(1.0, 1.0);
        let err = Operator::momentum_phase(l, phases).unwrap_err();
        match err {
            CoreError::NonUnitaryPhase { index, modulus } => {
                assert_eq!(index, 3);
                assert!((modulus - std::f64::consts::SQRT_2).abs() < 1e-15);
            }
            other => panic!("expected NonUnitaryPhase, got {other:?}"),
        }
    }

    #[test]
    fn operators_reject_mismatched_lattices() {
        let op = Operator::translation(lat(8), 0.5).expect("translation");
        let psi = WaveFunction::initial(lat(16), &InitialState::Cosine).expect("cosine");
        assert!(matches!(
            op.apply(&psi).unwrap_err(),
            CoreError::LatticeMismatch { .. }
        ));
    }
}
