//! Analytic cross-checks for the resonant kicked rotor.
//!
//! At the principal resonance ħ = 4π the correlator protocol can be carried
//! out by hand: forward evolution is a pure accumulated kick phase, the
//! reversed states |ψ_R⟩ and |φ_R⟩ have closed forms built from the initial
//! state and its angle derivatives, and every correlator component reduces to
//! an integral ∫₀^{2π}(…)dθ of smooth periodic functions. This module
//! evaluates those expressions by spectrally exact means — derivatives by
//! momentum-space multiplication, argument shifts by momentum phases, and
//! integrals by the periodic trapezoidal rule, which is exact for band-limited
//! integrands resolved by the grid.
//!
//! None of this shares code with the numeric engine's evolution path, so
//! agreement between the two is a genuine two-route consistency check. The
//! hard-coded factors 4π, 16π², 256π⁴ are the resonance value of ħ; the
//! functions refuse any other ħ instead of silently generalizing.

use num_complex::Complex64 as C64;

use crate::error::{CoreError, CoreResult};
use crate::fourier;
use crate::otoc::canonical_epsilon;
use crate::state::{AngleSamples, WaveFunction};

use std::f64::consts::PI;

/// Default quadrature grid size; ample for band-limited states with support
/// |n| ≤ a few hundred.
pub const DEFAULT_QUADRATURE_SIZE: usize = 4096;

/// Relative spectral power allowed beyond |k| = M/4 before an integrand is
/// declared under-resolved.
pub const BANDWIDTH_POWER_TOL: f64 = 1e-20;

/// C_p closed form at resonance for the cosine initial state: 12π²K²t².
pub fn cp_closed(kick_strength: f64, t: usize) -> f64 {
    let kt = kick_strength * t as f64;
    12.0 * PI * PI * kt * kt
}

/// C_T closed form at resonance for the cosine initial state:
/// sin²(ε/2)·(2 + cos ε)·K²t².
pub fn ct_closed(kick_strength: f64, t: usize, epsilon: f64) -> f64 {
    let kt = kick_strength * t as f64;
    let s = (epsilon / 2.0).sin();
    s * s * (2.0 + epsilon.cos()) * kt * kt
}

/// Small-shift fidelity-correlator estimate (εKt/2ħ)². The caller is
/// responsible for ε/ħ ≪ 1; no guard is applied.
pub fn fotoc_small_eps(kick_strength: f64, t: usize, epsilon: f64, hbar: f64) -> f64 {
    let x = epsilon * kick_strength * t as f64 / (2.0 * hbar);
    x * x
}

/// Resonant evolution in closed form: pointwise multiplication by the
/// accumulated kick phase exp(−iKt cosθ/ħ). Valid as the full propagator
/// only at resonance, which the caller asserts by construction.
pub fn resonant_state(psi0: &AngleSamples, kick_strength: f64, t: usize) -> AngleSamples {
    let lattice = psi0.lattice();
    let scale = -kick_strength * t as f64 / lattice.hbar();
    let values = psi0
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let arg = scale * lattice.angle_node(j).cos();
            v * C64::new(arg.cos(), arg.sin())
        })
        .collect();
    AngleSamples::from_values(lattice, values).expect("same node count as the input")
}

fn ensure_resonant(psi0: &WaveFunction) -> CoreResult<()> {
    if !psi0.lattice().is_resonant_hbar() {
        return Err(CoreError::NonResonantOracle(psi0.lattice().hbar()));
    }
    Ok(())
}

/// Closed-form |ψ_R(t₀)⟩ for A = p at resonance:
/// Kt sinθ·ψ(θ) − i4π·ψ⁽¹⁾(θ), on the lattice's angle grid.
pub fn psi_r_cp(psi0: &WaveFunction, kick_strength: f64, t: usize) -> CoreResult<AngleSamples> {
    ensure_resonant(psi0)?;
    let lattice = psi0.lattice();
    let base = psi0.to_angle();
    let d1 = base.spectral_derivative(1)?;
    let kt = kick_strength * t as f64;
    let minus_i_4pi = C64::new(0.0, -4.0 * PI);
    let values = (0..lattice.size())
        .map(|j| {
            base.values()[j] * (kt * lattice.angle_node(j).sin()) + minus_i_4pi * d1.values()[j]
        })
        .collect();
    AngleSamples::from_values(lattice, values)
}

/// Closed-form |φ_R(t₀)⟩ for A = p, B = p at resonance:
/// −i4π·Kt sinθ·ψ⁽¹⁾(θ) − 16π²·ψ⁽²⁾(θ).
pub fn phi_r_cp(psi0: &WaveFunction, kick_strength: f64, t: usize) -> CoreResult<AngleSamples> {
    ensure_resonant(psi0)?;
    let lattice = psi0.lattice();
    let base = psi0.to_angle();
    let d1 = base.spectral_derivative(1)?;
    let d2 = base.spectral_derivative(2)?;
    let kt = kick_strength * t as f64;
    let minus_i_4pi = C64::new(0.0, -4.0 * PI);
    let sixteen_pi2 = 16.0 * PI * PI;
    let values = (0..lattice.size())
        .map(|j| {
            minus_i_4pi * (kt * lattice.angle_node(j).sin()) * d1.values()[j]
                - d2.values()[j] * sixteen_pi2
        })
        .collect();
    AngleSamples::from_values(lattice, values)
}

/// Closed-form |ψ_R(t₀)⟩ for A = T(ε) at resonance:
/// ψ(θ+ε)·exp[i(Kt/2π)·sin(ε/2)·sin(θ+ε/2)].
pub fn psi_r_ct(
    psi0: &WaveFunction,
    kick_strength: f64,
    t: usize,
    epsilon: f64,
) -> CoreResult<AngleSamples> {
    ensure_resonant(psi0)?;
    let eps = canonical_epsilon(epsilon)?;
    let lattice = psi0.lattice();
    let shifted = psi0.translated(eps).to_angle();
    let amp = kick_strength * t as f64 / (2.0 * PI) * (eps / 2.0).sin();
    let values = (0..lattice.size())
        .map(|j| {
            let arg = amp * (lattice.angle_node(j) + eps / 2.0).sin();
            shifted.values()[j] * C64::new(arg.cos(), arg.sin())
        })
        .collect();
    AngleSamples::from_values(lattice, values)
}

/// Closed-form |φ_R(t₀)⟩ for A = T(ε), B = p at resonance:
/// −i4π·ψ⁽¹⁾(θ+ε)·exp[i(Kt/2π)·sin(ε/2)·sin(θ+ε/2)].
pub fn phi_r_ct(
    psi0: &WaveFunction,
    kick_strength: f64,
    t: usize,
    epsilon: f64,
) -> CoreResult<AngleSamples> {
    ensure_resonant(psi0)?;
    let eps = canonical_epsilon(epsilon)?;
    let lattice = psi0.lattice();
    let shifted_d1 = psi0.derivative_coefficients(1).translated(eps).to_angle();
    let amp = kick_strength * t as f64 / (2.0 * PI) * (eps / 2.0).sin();
    let minus_i_4pi = C64::new(0.0, -4.0 * PI);
    let values = (0..lattice.size())
        .map(|j| {
            let arg = amp * (lattice.angle_node(j) + eps / 2.0).sin();
            minus_i_4pi * shifted_d1.values()[j] * C64::new(arg.cos(), arg.sin())
        })
        .collect();
    AngleSamples::from_values(lattice, values)
}

/// Periodic trapezoidal quadrature over θ ∈ [0, 2π) on M uniform nodes.
///
/// On this domain the trapezoidal rule integrates every Fourier mode e^{ikθ}
/// with |k| < M exactly except the aliased multiples of M, so it is exact for
/// integrands whose spectrum the grid resolves; `integrate` verifies that
/// resolution instead of assuming it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureGrid {
    m: usize,
}

impl QuadratureGrid {
    /// A grid with `m` nodes θ_j = 2πj/m.
    pub fn new(m: usize) -> CoreResult<Self> {
        if m < 4 || !m.is_multiple_of(2) {
            return Err(CoreError::InvalidGridSize(m));
        }
        Ok(Self { m })
    }

    /// Node count M.
    pub fn size(&self) -> usize {
        self.m
    }

    /// Node θ_j = 2πj/M.
    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.m as f64
    }

    /// ∫₀^{2π} f(θ) dθ ≈ (2π/M) Σ_j f(θ_j), after checking that the
    /// integrand's spectral power beyond |k| = M/4 is negligible.
    ///
    /// Real or imaginary parts of complex products should be projected out
    /// *after* integrating (Re/Im commute with ∫): projecting pointwise can
    /// leave an integrand that is pure rounding noise, which is spectrally
    /// broadband and is rejected here as under-resolved.
    pub fn integrate(&self, integrand: &[C64]) -> CoreResult<C64> {
        if integrand.len() != self.m {
            return Err(CoreError::LengthMismatch {
                expected: self.m,
                got: integrand.len(),
            });
        }
        let mut spectrum = integrand.to_vec();
        fourier::dft_forward(&mut spectrum);
        let total: f64 = spectrum.iter().map(|s| s.norm_sqr()).sum();
        if total > 0.0 {
            let lo = self.m / 4 + 1;
            let hi = 3 * self.m / 4;
            let high_band: f64 = spectrum[lo..hi].iter().map(|s| s.norm_sqr()).sum();
            let fraction = high_band / total;
            if fraction > BANDWIDTH_POWER_TOL {
                return Err(CoreError::GridTooCoarse {
                    m: self.m,
                    fraction,
                });
            }
        }
        let sum: C64 = integrand.iter().sum();
        Ok(sum * (2.0 * PI / self.m as f64))
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            m: DEFAULT_QUADRATURE_SIZE,
        }
    }
}

/// A state and its first three angle derivatives sampled exactly on a
/// quadrature grid, with the composite functions the correlator integrals
/// are built from.
#[derive(Debug, Clone)]
pub struct AnalyticStateFns {
    grid: QuadratureGrid,
    psi: Vec<C64>,
    d1: Vec<C64>,
    d2: Vec<C64>,
    d3: Vec<C64>,
}

impl AnalyticStateFns {
    /// Samples ψ and ψ⁽¹⁾…ψ⁽³⁾ on `grid` by zero-padded synthesis, which is
    /// exact when the grid is at least as fine as the basis.
    pub fn new(psi0: &WaveFunction, grid: QuadratureGrid) -> CoreResult<Self> {
        if grid.size() < psi0.lattice().size() {
            return Err(CoreError::GridSmallerThanBasis {
                m: grid.size(),
                n: psi0.lattice().size(),
            });
        }
        let m = grid.size();
        Ok(Self {
            grid,
            psi: fourier::synthesize_on_grid(psi0.amps(), m),
            d1: fourier::synthesize_on_grid(psi0.derivative_coefficients(1).amps(), m),
            d2: fourier::synthesize_on_grid(psi0.derivative_coefficients(2).amps(), m),
            d3: fourier::synthesize_on_grid(psi0.derivative_coefficients(3).amps(), m),
        })
    }

    /// The grid everything is sampled on.
    pub fn grid(&self) -> QuadratureGrid {
        self.grid
    }

    /// ψ(θ_j).
    pub fn psi(&self) -> &[C64] {
        &self.psi
    }

    /// ψ⁽¹⁾(θ_j).
    pub fn d1(&self) -> &[C64] {
        &self.d1
    }

    /// ψ⁽²⁾(θ_j).
    pub fn d2(&self) -> &[C64] {
        &self.d2
    }

    /// ψ⁽³⁾(θ_j).
    pub fn d3(&self) -> &[C64] {
        &self.d3
    }

    /// Ψ(θ) = ψ·cosθ + ψ⁽¹⁾·sinθ, the density profile the kicked momentum
    /// state inherits from −i∂_θ(e^{−iKt cosθ/ħ}ψ).
    pub fn big_psi(&self) -> Vec<C64> {
        (0..self.grid.size())
            .map(|j| {
                let theta = self.grid.node(j);
                self.psi[j] * theta.cos() + self.d1[j] * theta.sin()
            })
            .collect()
    }

    /// Γ(θ) = ψ*·[sin²θ·ψ⁽²⁾ + ½·sin2θ·ψ⁽¹⁾], the t²-weight of the cross
    /// component.
    pub fn big_gamma(&self) -> Vec<C64> {
        (0..self.grid.size())
            .map(|j| {
                let theta = self.grid.node(j);
                let s = theta.sin();
                self.psi[j].conj()
                    * (self.d2[j] * (s * s) + self.d1[j] * (0.5 * (2.0 * theta).sin()))
            })
            .collect()
    }

    /// Υ(θ) = sinθ·[ψ*ψ⁽³⁾ − ψ⁽¹⁾*ψ⁽²⁾] − cosθ·|ψ⁽¹⁾|², the t-linear weight
    /// of the cross component.
    pub fn big_upsilon(&self) -> Vec<C64> {
        (0..self.grid.size())
            .map(|j| {
                let theta = self.grid.node(j);
                (self.psi[j].conj() * self.d3[j] - self.d1[j].conj() * self.d2[j]) * theta.sin()
                    - C64::new(self.d1[j].norm_sqr() * theta.cos(), 0.0)
            })
            .collect()
    }

    /// υ(θ) = ψ*·ψ⁽¹⁾·cos(θ + ε/2), evaluated on already-shifted samples for
    /// the translation correlator's cross terms.
    pub fn small_upsilon(&self, epsilon: f64) -> Vec<C64> {
        (0..self.grid.size())
            .map(|j| self.psi[j].conj() * self.d1[j] * (self.grid.node(j) + epsilon / 2.0).cos())
            .collect()
    }
}

/// Correlator components produced by the quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OtocComponents {
    /// ⟨ψ_R|B²|ψ_R⟩.
    pub c1: f64,
    /// ⟨φ_R|φ_R⟩.
    pub c2: f64,
    /// ⟨ψ_R|B|φ_R⟩.
    pub c3: C64,
    /// C₁ + C₂ − 2 Re C₃.
    pub c: f64,
}

/// Quadrature evaluation of the momentum-correlator components for an
/// arbitrary band-limited initial state at resonance.
pub fn cp_components_quadrature(
    psi0: &WaveFunction,
    kick_strength: f64,
    t: usize,
    grid: QuadratureGrid,
) -> CoreResult<OtocComponents> {
    ensure_resonant(psi0)?;
    let fns = AnalyticStateFns::new(psi0, grid)?;
    let m = grid.size();
    let kt = kick_strength * t as f64;
    let w_t2 = 16.0 * PI * PI * kt * kt;
    let w_0 = 256.0 * PI.powi(4);
    let w_t1 = 128.0 * PI.powi(3) * kt;
    let w_t1_half = 64.0 * PI.powi(3) * kt;

    let big_psi = fns.big_psi();
    let real = |x: f64| C64::new(x, 0.0);

    // ∫|Ψ|², ∫|ψ⁽²⁾|², ∫Im[Ψ*ψ⁽²⁾]
    let i_big_sq = grid
        .integrate(
            &(0..m)
                .map(|j| real(big_psi[j].norm_sqr()))
                .collect::<Vec<_>>(),
        )?
        .re;
    let i_d2_sq = grid
        .integrate(
            &(0..m)
                .map(|j| real(fns.d2()[j].norm_sqr()))
                .collect::<Vec<_>>(),
        )?
        .re;
    let i_cross_1 = grid
        .integrate(
            &(0..m)
                .map(|j| big_psi[j].conj() * fns.d2()[j])
                .collect::<Vec<_>>(),
        )?
        .im;
    let c1 = w_t2 * i_big_sq + w_0 * i_d2_sq + w_t1 * i_cross_1;

    // ∫sin²θ|ψ⁽¹⁾|², ∫sinθ·Im[ψ⁽¹⁾*ψ⁽²⁾]
    let i_sin_d1 = grid
        .integrate(
            &(0..m)
                .map(|j| {
                    let s = grid.node(j).sin();
                    real(s * s * fns.d1()[j].norm_sqr())
                })
                .collect::<Vec<_>>(),
        )?
        .re;
    let i_cross_2 = grid
        .integrate(
            &(0..m)
                .map(|j| fns.d1()[j].conj() * fns.d2()[j] * grid.node(j).sin())
                .collect::<Vec<_>>(),
        )?
        .im;
    let c2 = w_t2 * i_sin_d1 + w_0 * i_d2_sq + w_t1 * i_cross_2;

    // −16π²K²t²∫Γ + i·64π³Kt∫Υ − 256π⁴∫ψ⁽¹⁾*ψ⁽³⁾
    let i_gamma = grid.integrate(&fns.big_gamma())?;
    let i_upsilon = grid.integrate(&fns.big_upsilon())?;
    let i_13 = grid.integrate(
        &(0..m)
            .map(|j| fns.d1()[j].conj() * fns.d3()[j])
            .collect::<Vec<_>>(),
    )?;
    let c3 = i_gamma * (-w_t2) + C64::i() * w_t1_half * i_upsilon - i_13 * w_0;

    let c = c1 + c2 - 2.0 * c3.re;
    Ok(OtocComponents { c1, c2, c3, c })
}

/// Quadrature evaluation of the translation-correlator components for an
/// arbitrary band-limited initial state at resonance.
pub fn ct_components_quadrature(
    psi0: &WaveFunction,
    kick_strength: f64,
    t: usize,
    epsilon: f64,
    grid: QuadratureGrid,
) -> CoreResult<OtocComponents> {
    ensure_resonant(psi0)?;
    let eps = canonical_epsilon(epsilon)?;
    // Build every function of θ+ε by shifting the state first (exact in
    // momentum space), so the same grid nodes serve all integrals.
    let fns = AnalyticStateFns::new(&psi0.translated(eps), grid)?;
    let m = grid.size();
    let kt = kick_strength * t as f64;
    let s_half = (eps / 2.0).sin();
    let sixteen_pi2 = 16.0 * PI * PI;
    let real = |x: f64| C64::new(x, 0.0);

    // ∫cos²(θ+ε/2)|ψ(θ+ε)|², ∫|ψ⁽¹⁾(θ+ε)|², ∫Im[υ]
    let i_cos_sq = grid
        .integrate(
            &(0..m)
                .map(|j| {
                    let c = (grid.node(j) + eps / 2.0).cos();
                    real(c * c * fns.psi()[j].norm_sqr())
                })
                .collect::<Vec<_>>(),
        )?
        .re;
    let i_d1_sq = grid
        .integrate(
            &(0..m)
                .map(|j| real(fns.d1()[j].norm_sqr()))
                .collect::<Vec<_>>(),
        )?
        .re;
    let upsilon = fns.small_upsilon(eps);
    let i_ups = grid.integrate(&upsilon)?;
    let c1 = 4.0 * kt * kt * s_half * s_half * i_cos_sq
        + sixteen_pi2 * i_d1_sq
        + 16.0 * PI * kt * s_half * i_ups.im;

    let c2 = sixteen_pi2 * i_d1_sq;

    // −i·8π·sin(ε/2)·Kt·∫υ − 16π²·∫ψ*(θ+ε)ψ⁽²⁾(θ+ε)
    let i_02 = grid.integrate(
        &(0..m)
            .map(|j| fns.psi()[j].conj() * fns.d2()[j])
            .collect::<Vec<_>>(),
    )?;
    let c3 = C64::new(0.0, -8.0 * PI * s_half * kt) * i_ups - i_02 * sixteen_pi2;

    let c = c1 + c2 - 2.0 * c3.re;
    Ok(OtocComponents { c1, c2, c3, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{MomentumLattice, RESONANT_HBAR};
    use crate::state::InitialState;
    use std::collections::BTreeMap;

    fn cosine(n: usize) -> WaveFunction {
        let lat = MomentumLattice::new(n, RESONANT_HBAR).expect("valid lattice");
        WaveFunction::initial(lat, &InitialState::Cosine).expect("cosine")
    }

    fn complex_band_state(n: usize) -> WaveFunction {
        let lat = MomentumLattice::new(n, RESONANT_HBAR).expect("valid lattice");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(-7, C64::new(0.21, -0.43));
        coeffs.insert(-2, C64::new(-0.55, 0.17));
        coeffs.insert(0, C64::new(0.38, 0.61));
        coeffs.insert(3, C64::new(0.09, -0.72));
        coeffs.insert(11, C64::new(-0.31, 0.24));
        WaveFunction::initial(lat, &InitialState::Custom(coeffs)).expect("custom")
    }

    #[test]
    fn momentum_correlator_closed_form_values() {
        assert!(
            (cp_closed(1.0, 1) - 118.4352528130723).abs() < 1e-12,
            "12 pi^2 expected, got {}",
            cp_closed(1.0, 1)
        );
        assert_eq!(cp_closed(3.0, 0), 0.0);
        let big = cp_closed(5.0, 10);
        assert!(
            ((big - 296088.13203268073) / big).abs() < 1e-14,
            "30000 pi^2 expected, got {big}"
        );
    }

    #[test]
    fn translation_correlator_closed_form_values() {
        assert!((ct_closed(1.0, 3, PI) - 9.0).abs() < 1e-13);
        assert_eq!(ct_closed(2.0, 5, 0.0), 0.0);
        assert!((ct_closed(2.0, 1, PI / 2.0) - 4.0).abs() < 1e-13);
        // Frozen shift-profile values g(eps) = sin^2(eps/2)(2+cos eps) at K=t=1.
        for (eps, want) in [
            (PI / 4.0, 0.3964466094067262),
            (PI / 2.0, 0.9999999999999998),
            (3.0 * PI / 2.0, 1.0),
            (1.3, 0.8304727740299431),
        ] {
            let got = ct_closed(1.0, 1, eps);
            assert!(
                (got - want).abs() < 1e-15,
                "shift profile at eps={eps}: want {want}, got {got}"
            );
        }
    }

    #[test]
    fn small_shift_estimate_matches_frozen_value() {
        let got = fotoc_small_eps(5.0, 100, 0.01, RESONANT_HBAR);
        assert!(
            ((got - 0.0395785873602882) / got).abs() < 1e-13,
            "(5/(8 pi))^2 expected, got {got}"
        );
        assert_eq!(fotoc_small_eps(5.0, 0, 0.01, RESONANT_HBAR), 0.0);
        let quadrupled = fotoc_small_eps(5.0, 100, 0.02, RESONANT_HBAR);
        assert!(
            ((quadrupled - 4.0 * got) / quadrupled).abs() < 1e-15,
            "doubling the shift must quadruple the estimate"
        );
    }

    #[test]
    fn resonant_state_is_a_pure_phase() {
        let psi = complex_band_state(64);
        let base = psi.to_angle();
        let zero_kicks = resonant_state(&base, 3.0, 0);
        assert_eq!(
            zero_kicks.max_deviation(&base).expect("same lattice"),
            0.0,
            "zero kicks must leave the samples untouched"
        );
        let evolved = resonant_state(&base, 3.0, 9);
        for (j, (u, v)) in base.values().iter().zip(evolved.values()).enumerate() {
            assert!(
                (u.norm_sqr() - v.norm_sqr()).abs() < 1e-15,
                "node {j}: a pure phase cannot change |psi|^2"
            );
        }
    }

    #[test]
    fn momentum_reversed_state_at_zero_time_is_the_derivative() {
        let psi = cosine(64);
        let lat = psi.lattice();
        let state = psi_r_cp(&psi, 2.0, 0).expect("oracle");
        // -i4pi * (-sin/sqrt(pi)) = +i 4pi sin(theta)/sqrt(pi)
        for (j, v) in state.values().iter().enumerate() {
            let want = C64::new(0.0, 4.0 * PI * lat.angle_node(j).sin() * 0.5641895835477563);
            assert!((v - want).norm() < 1e-12, "node {j}: want {want}, got {v}");
        }
    }

    #[test]
    fn momentum_reversed_companion_at_zero_time_is_p_squared() {
        let psi = cosine(64);
        let lat = psi.lattice();
        let state = phi_r_cp(&psi, 2.0, 0).expect("oracle");
        // -16 pi^2 * psi'' = +16 pi^2 cos(theta)/sqrt(pi) for the cosine state.
        for (j, v) in state.values().iter().enumerate() {
            let want = C64::new(
                16.0 * PI * PI * lat.angle_node(j).cos() * 0.5641895835477563,
                0.0,
            );
            assert!((v - want).norm() < 1e-9, "node {j}: want {want}, got {v}");
        }
    }

    #[test]
    fn translation_reversed_state_special_shifts() {
        let psi = cosine(64);
        let lat = psi.lattice();
        // Full-turn shift: identity up to the vanishing phase.
        let full = psi_r_ct(&psi, 2.0, 3, 2.0 * PI).expect("oracle");
        let base = psi.to_angle();
        assert!(
            full.max_deviation(&base).expect("same lattice") < 1e-12,
            "a 2 pi shift must reproduce the state"
        );
        // Half-turn at t=0: pure argument shift, cos(theta+pi) = -cos(theta).
        let half = psi_r_ct(&psi, 2.0, 0, PI).expect("oracle");
        for (j, v) in half.values().iter().enumerate() {
            let want = C64::new(-lat.angle_node(j).cos() * 0.5641895835477563, 0.0);
            assert!((v - want).norm() < 1e-13, "node {j}: want {want}, got {v}");
        }
    }

    #[test]
    fn oracle_state_functions_refuse_generic_hbar() {
        let lat = MomentumLattice::new(32, 1.0).expect("valid");
        let psi = WaveFunction::initial(lat, &InitialState::Cosine).expect("cosine");
        assert!(matches!(
            psi_r_cp(&psi, 1.0, 1).unwrap_err(),
            CoreError::NonResonantOracle(_)
        ));
        assert!(matches!(
            ct_components_quadrature(&psi, 1.0, 1, 0.5, QuadratureGrid::default()).unwrap_err(),
            CoreError::NonResonantOracle(_)
        ));
    }

    #[test]
    fn composite_profile_of_the_cosine_state_is_cos_two_theta() {
        let psi = cosine(64);
        let grid = QuadratureGrid::new(512).expect("grid");
        let fns = AnalyticStateFns::new(&psi, grid).expect("fns");
        let profile = fns.big_psi();
        for (j, v) in profile.iter().enumerate() {
            let want = (2.0 * grid.node(j)).cos() * 0.5641895835477563;
            assert!(
                (v.re - want).abs() < 1e-10 && v.im.abs() < 1e-12,
                "node {j}: want {want}, got {v}"
            );
        }
    }

    #[test]
    fn quadrature_reproduces_the_momentum_closed_form() {
        let psi = cosine(64);
        let grid = QuadratureGrid::default();
        for k in [1.0, 2.0, 3.0, 5.0] {
            for t in 1..=10usize {
                let parts = cp_components_quadrature(&psi, k, t, grid).expect("quadrature");
                let want = cp_closed(k, t);
                assert!(
                    ((parts.c - want) / want).abs() < 1e-10,
                    "K={k}, t={t}: quadrature {} vs closed {want}",
                    parts.c
                );
            }
        }
    }

    #[test]
    fn quadrature_reproduces_the_translation_closed_form() {
        let psi = cosine(64);
        let grid = QuadratureGrid::default();
        for k in [1.0, 2.0, 3.0, 5.0] {
            for eps in [PI / 4.0, PI / 2.0, PI] {
                for t in 1..=10usize {
                    let parts =
                        ct_components_quadrature(&psi, k, t, eps, grid).expect("quadrature");
                    let want = ct_closed(k, t, eps);
                    assert!(
                        ((parts.c - want) / want).abs() < 1e-10,
                        "K={k}, eps={eps}, t={t}: quadrature {} vs closed {want}",
                        parts.c
                    );
                }
            }
        }
    }

    #[test]
    fn translation_second_component_is_the_initial_kinetic_term() {
        let psi = cosine(64);
        let grid = QuadratureGrid::default();
        for (k, t, eps) in [(1.0, 1, 0.7), (3.0, 6, 2.1), (5.0, 10, PI)] {
            let parts = ct_components_quadrature(&psi, k, t, eps, grid).expect("quadrature");
            assert!(
                (parts.c2 - 157.91367041742973).abs() < 1e-9,
                "C2 should stay at 16 pi^2 for the cosine state, got {}",
                parts.c2
            );
        }
    }

    #[test]
    fn zero_shift_components_cancel_exactly() {
        let psi = complex_band_state(64);
        let grid = QuadratureGrid::default();
        let parts = ct_components_quadrature(&psi, 3.0, 7, 0.0, grid).expect("quadrature");
        assert!(
            parts.c.abs() < 1e-9,
            "identity translation must cancel: C = {}",
            parts.c
        );
        assert!(
            (parts.c1 - parts.c2).abs() < 1e-9,
            "C1 and C2 must coincide at zero shift"
        );
    }

    #[test]
    fn grid_doubling_leaves_the_components_unchanged() {
        // Once M resolves the integrand bandwidth with margin, the trapezoid
        // rule is exact and doubling M only reshuffles summation roundoff.
        // Each integral is stable to 1e-12 of its own magnitude; the final C
        // is a contraction of components much larger than itself, so its
        // stability is measured against the largest component.
        let psi = complex_band_state(64);
        let coarse = QuadratureGrid::new(512).expect("grid");
        let fine = QuadratureGrid::new(1024).expect("grid");
        let a = cp_components_quadrature(&psi, 2.0, 5, coarse).expect("coarse");
        let b = cp_components_quadrature(&psi, 2.0, 5, fine).expect("fine");
        let component_scale = a.c1.abs().max(a.c2.abs());
        assert!(((a.c1 - b.c1) / a.c1).abs() < 1e-12, "c1 moved");
        assert!(((a.c2 - b.c2) / a.c2).abs() < 1e-12, "c2 moved");
        assert!(
            (a.c3 - b.c3).norm() / component_scale < 1e-12,
            "c3 moved: {} -> {}",
            a.c3,
            b.c3
        );
        assert!(
            ((a.c - b.c) / component_scale).abs() < 1e-12,
            "doubling M moved C from {} to {}",
            a.c,
            b.c
        );
    }

    #[test]
    fn under_resolved_integrands_are_rejected() {
        // Support out to |n| = 16 makes |psi|^2-type integrands 32 modes wide,
        // beyond M/4 = 16 for M = 64.
        let lat = MomentumLattice::new(64, RESONANT_HBAR).expect("valid");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(16, C64::new(1.0, 0.0));
        coeffs.insert(-16, C64::new(0.5, 0.2));
        coeffs.insert(1, C64::new(0.3, 0.0));
        let psi = WaveFunction::initial(lat, &InitialState::Custom(coeffs)).expect("custom");
        let grid = QuadratureGrid::new(64).expect("grid");
        let err = cp_components_quadrature(&psi, 1.0, 1, grid).unwrap_err();
        assert!(
            matches!(err, CoreError::GridTooCoarse { .. }),
            "expected a resolution failure, got {err:?}"
        );
    }

    #[test]
    fn grids_smaller_than_the_basis_are_rejected() {
        let psi = cosine(256);
        let grid = QuadratureGrid::new(128).expect("grid");
        let err = AnalyticStateFns::new(&psi, grid).unwrap_err();
        assert_eq!(err, CoreError::GridSmallerThanBasis { m: 128, n: 256 });
    }

    #[test]
    fn grid_size_validation() {
        assert!(QuadratureGrid::new(3).is_err());
        assert!(QuadratureGrid::new(7).is_err());
        assert!(QuadratureGrid::new(4).is_ok());
        assert_eq!(QuadratureGrid::default().size(), DEFAULT_QUADRATURE_SIZE);
    }
}
