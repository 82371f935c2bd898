//! Helpers shared by the integration suites.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use otoc_core::{InitialState, MomentumLattice, WaveFunction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Deterministic band-limited random state: coefficients on |n| ≤ `band`
/// drawn uniformly from the unit square, normalized by construction.
pub fn random_band_state(
    lattice: MomentumLattice,
    band: i64,
    rng: &mut ChaCha8Rng,
) -> WaveFunction {
    let mut coeffs = BTreeMap::new();
    for n in -band..=band {
        coeffs.insert(
            n,
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
    }
    WaveFunction::initial(lattice, &InitialState::Custom(coeffs)).expect("band-limited state")
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(xs.len() == ys.len() && xs.len() >= 2, "need paired samples");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Growth exponent: slope of ln y against ln t over a (t, y) series.
pub fn loglog_slope(series: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = series.iter().map(|(t, _)| (*t as f64).ln()).collect();
    let ys: Vec<f64> = series.iter().map(|(_, y)| y.ln()).collect();
    fit_slope(&xs, &ys)
}

/// |a − b| within `rel`·max(|a|,|b|), with an absolute floor for values
/// near zero.
pub fn close_rel(a: f64, b: f64, rel: f64, abs_floor: f64) -> bool {
    (a - b).abs() <= (a.abs().max(b.abs()) * rel).max(abs_floor)
}

/// Largest per-amplitude deviation between two states on the same lattice.
pub fn max_amp_deviation(a: &WaveFunction, b: &WaveFunction) -> f64 {
    assert_eq!(a.lattice().size(), b.lattice().size(), "lattice mismatch");
    a.amps()
        .iter()
        .zip(b.amps())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
