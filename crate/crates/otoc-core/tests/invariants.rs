//! Structural invariants of the lattice machinery and the correlator
//! protocol: unitarity, transform consistency, operator algebra, method
//! agreement, and the growth laws that hold by symmetry rather than by a
//! particular closed form.

mod common;

use common::{close_rel, loglog_slope, random_band_state};
use num_complex::Complex64 as C64;
use otoc_core::{
    auto_basis_size, energy_series, fotoc, run_series, Direction, FloquetOps, InitialState,
    MethodRegistry, MomentumLattice, Operator, OtocKind, WaveFunction, RESONANT_HBAR,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn lattice(n: usize, hbar: f64) -> MomentumLattice {
    MomentumLattice::new(n, hbar).expect("valid lattice")
}

fn state_from_seed(n: usize, hbar: f64, band: i64, seed: u64) -> WaveFunction {
    random_band_state(lattice(n, hbar), band, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    /// Angle synthesis followed by analysis reproduces the amplitudes.
    #[test]
    fn transform_round_trip(seed in any::<u64>(), band in 1i64..12) {
        let psi = state_from_seed(64, RESONANT_HBAR, band, seed);
        let back = psi.to_angle().to_momentum();
        for (a, b) in psi.amps().iter().zip(back.amps()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    /// Σ|aₙ|² equals (2π/N)·Σ|ψ(θ_j)|² (the transform is an isometry).
    #[test]
    fn parseval_identity(seed in any::<u64>(), band in 1i64..12) {
        let psi = state_from_seed(64, RESONANT_HBAR, band, seed);
        let grid_power: f64 = psi
            .to_angle()
            .values()
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            * (2.0 * PI / 64.0);
        prop_assert!((psi.norm_sq() - grid_power).abs() < 1e-12);
    }

    /// Diagonal unit-modulus phase operators preserve the norm.
    #[test]
    fn phase_operators_preserve_norm(
        seed in any::<u64>(),
        band in 1i64..12,
        alpha in -10.0f64..10.0,
        beta in -10.0f64..10.0,
    ) {
        let psi = state_from_seed(64, RESONANT_HBAR, band, seed);
        let lat = psi.lattice();
        let momentum_phases: Vec<C64> = lat
            .indices()
            .map(|n| C64::from_polar(1.0, alpha * n as f64 + beta * (n * n) as f64))
            .collect();
        let mp = Operator::momentum_phase(lat, momentum_phases).expect("unit phases");
        let angle_phases: Vec<C64> = (0..lat.size())
            .map(|j| C64::from_polar(1.0, alpha * lat.angle_node(j).cos() + beta))
            .collect();
        let ap = Operator::angle_phase(lat, angle_phases).expect("unit phases");
        let after = ap.apply(&mp.apply(&psi).expect("apply")).expect("apply");
        prop_assert!((after.norm_sq() - 1.0).abs() < 1e-12);
    }

    /// ⟨ψ|p χ⟩ = ⟨p ψ|χ⟩: the momentum operator is symmetric on the lattice.
    #[test]
    fn momentum_operator_is_hermitian(sa in any::<u64>(), sb in any::<u64>(), band in 1i64..12) {
        let psi = state_from_seed(64, RESONANT_HBAR, band, sa);
        let chi = state_from_seed(64, RESONANT_HBAR, band, sb);
        let p = Operator::momentum();
        let lhs = psi.inner(&p.apply(&chi).expect("p chi")).expect("inner");
        let rhs = chi.inner(&p.apply(&psi).expect("p psi")).expect("inner").conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    /// A backward step exactly inverts a forward step for any parameters.
    #[test]
    fn step_then_inverse_step_is_identity(
        seed in any::<u64>(),
        band in 1i64..12,
        k in 0.0f64..6.0,
        hbar in 0.5f64..13.0,
    ) {
        let psi = state_from_seed(64, hbar, band, seed);
        let ops = FloquetOps::new(psi.lattice(), k, None).expect("engine");
        let fwd = ops.step(&psi, Direction::Forward).expect("forward");
        let back = ops.step(&fwd, Direction::Backward).expect("backward");
        for (a, b) in psi.amps().iter().zip(back.amps()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}

/// Norm conservation under 20 kicks for 100 random states across resonant
/// and generic Planck constants.
#[test]
fn evolution_is_unitary_over_random_states() {
    for seed in 0..100u64 {
        let hbar = match seed % 3 {
            0 => RESONANT_HBAR,
            1 => 2.7,
            _ => 7.766444154901866,
        };
        let k = 0.5 + (seed % 10) as f64 * 0.5;
        let psi = state_from_seed(512, hbar, 12, seed);
        let ops = FloquetOps::new(psi.lattice(), k, None).expect("engine");
        let evolved = ops.evolve(&psi, 20, Direction::Forward).expect("evolve");
        let drift = (evolved.norm_sq() - 1.0).abs();
        assert!(
            drift < 1e-12,
            "norm drift {drift:.3e} at seed {seed}, K={k}, hbar={hbar}"
        );
    }
}

/// The three-term decomposition and the direct commutator norm are two
/// routes to the same number, on and off resonance, for every kind.
#[test]
fn methods_agree_across_parameters() {
    let registry = MethodRegistry::builtin();
    let decomp = registry.get("decomp").expect("registered");
    let norm = registry.get("norm").expect("registered");
    let epsilons = [0.3, PI / 2.0, 5.9];
    let mut checked = 0usize;
    for &hbar in &[RESONANT_HBAR, 2.0] {
        for &k in &[0.0, 2.3, 5.0] {
            for (i, &t) in [1usize, 7, 31].iter().enumerate() {
                let n = auto_basis_size(k, t, hbar).max(128);
                let lat = lattice(n, hbar);
                let psi0 = WaveFunction::initial(lat, &InitialState::Cosine).expect("cosine");
                let ops = FloquetOps::new(lat, k, None).expect("engine");
                let eps = epsilons[i % epsilons.len()];
                for kind in [
                    OtocKind::pp(),
                    OtocKind::tp(eps).expect("shift"),
                    OtocKind::fotoc(eps).expect("shift"),
                ] {
                    let a = run_series(&ops, &kind, &[t], &psi0, decomp).expect("decomp")[0].c;
                    let b = run_series(&ops, &kind, &[t], &psi0, norm).expect("norm")[0].c;
                    assert!(
                        close_rel(a, b, 1e-8, 1e-10),
                        "methods disagree: {a} vs {b} for {} at K={k}, t={t}, eps={eps}, hbar={hbar}",
                        kind.tag()
                    );
                    assert!(
                        b >= -1e-10,
                        "commutator norm must be nonnegative, got {b} for {} at K={k}, t={t}",
                        kind.tag()
                    );
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 54, "sweep size drifted");
}

/// Doubling the kick strength quadruples the correlator in the
/// kick-dominated resonant regime.
#[test]
fn kick_scaling_is_quadratic_at_resonance() {
    let lat = lattice(128, RESONANT_HBAR);
    let psi0 = WaveFunction::initial(lat, &InitialState::Cosine).expect("cosine");
    for kind in [OtocKind::pp(), OtocKind::tp(1.3).expect("shift")] {
        let mut values = Vec::new();
        for k in [1.0, 2.0] {
            let ops = FloquetOps::new(lat, k, None).expect("engine");
            let registry = MethodRegistry::builtin();
            let method = registry.get("decomp").expect("registered");
            values.push(run_series(&ops, &kind, &[5], &psi0, method).expect("series")[0].c);
        }
        let ratio = values[1] / values[0];
        assert!(
            (ratio - 4.0).abs() < 4e-8,
            "C(2K)/C(K) = {ratio} for {}",
            kind.tag()
        );
    }
}

/// Resonant growth is a clean power law with exponent 2.
#[test]
fn resonant_growth_exponent_is_two() {
    let lat = lattice(256, RESONANT_HBAR);
    let psi0 = WaveFunction::initial(lat, &InitialState::Cosine).expect("cosine");
    let ops = FloquetOps::new(lat, 2.0, None).expect("engine");
    let schedule = [1usize, 2, 4, 8, 16, 32, 64, 100];
    let registry = MethodRegistry::builtin();
    let method = registry.get("decomp").expect("registered");
    let series = run_series(&ops, &OtocKind::pp(), &schedule, &psi0, method).expect("series");
    let points: Vec<(usize, f64)> = series.iter().map(|s| (s.t, s.c)).collect();
    let slope = loglog_slope(&points);
    assert!((slope - 2.0).abs() < 1e-3, "fitted growth exponent {slope}");
}

/// The fidelity correlator stays inside [0, 1] and equals 1 − F_O exactly.
#[test]
fn fidelity_correlator_bounds_and_identity() {
    let lat = lattice(256, RESONANT_HBAR);
    let psi0 = WaveFunction::initial(lat, &InitialState::Cosine).expect("cosine");
    let ops = FloquetOps::new(lat, 3.0, None).expect("engine");
    for t in [0usize, 1, 5, 20, 60] {
        for eps in [0.05, 0.9, PI, 5.5] {
            let sample = fotoc(&ops, eps, t, &psi0).expect("fidelity run");
            let f_o = sample.extras["F_O"];
            assert!(
                (-1e-12..=1.0 + 1e-12).contains(&f_o),
                "overlap out of bounds: F_O = {f_o} at t={t}, eps={eps}"
            );
            assert_eq!(sample.c, 1.0 - f_o, "C and F_O must be the same number");
            assert!(sample.c >= -1e-12, "C = {} below zero", sample.c);
        }
    }
}

/// At a generic (irrational multiple of 4π) Planck constant the kinetic
/// energy stops growing: late windows agree to within 20%.
#[test]
fn off_resonance_energy_saturates() {
    let hbar = 7.766444154901866; // 4π scaled by the inverse golden ratio
    let lat = lattice(512, hbar);
    let psi0 = WaveFunction::initial(lat, &InitialState::Cosine).expect("cosine");
    let ops = FloquetOps::new(lat, 5.0, None).expect("engine");
    let schedule: Vec<usize> = (1..=80).map(|i| i * 25).collect();
    let series = energy_series(&ops, &schedule, &psi0).expect("energy");
    let window_mean = |lo: usize, hi: usize| {
        let vals: Vec<f64> = series
            .iter()
            .filter(|s| s.t >= lo && s.t <= hi)
            .map(|s| s.p2)
            .collect();
        assert!(!vals.is_empty());
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let early = window_mean(500, 1000);
    let late = window_mean(1500, 2000);
    assert!(
        (late - early).abs() <= 0.2 * early,
        "kinetic energy still drifting: ⟨p²⟩ {early} → {late}"
    );
}
