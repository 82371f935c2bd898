//! FFT plumbing shared by the basis transforms and the quadrature oracle.
//!
//! Amplitude storage is in ascending-index ("lattice") order, slot j ↔
//! n = j − N/2, while the FFT kernel wants wrap-around order m = n mod N.
//! This module owns that reindexing, a global plan cache, and the
//! zero-padded synthesis used to evaluate a state on a finer angle grid.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

struct PlanCache {
    planner: FftPlanner<f64>,
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

fn cache() -> &'static Mutex<PlanCache> {
    static CACHE: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(PlanCache {
            planner: FftPlanner::new(),
            forward: HashMap::new(),
            inverse: HashMap::new(),
        })
    })
}

fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    let mut guard = cache().lock().expect("FFT plan cache poisoned");
    if let Some(plan) = guard.forward.get(&len) {
        return Arc::clone(plan);
    }
    let plan = guard.planner.plan_fft_forward(len);
    guard.forward.insert(len, Arc::clone(&plan));
    plan
}

fn inverse_plan(len: usize) -> Arc<dyn Fft<f64>> {
    let mut guard = cache().lock().expect("FFT plan cache poisoned");
    if let Some(plan) = guard.inverse.get(&len) {
        return Arc::clone(plan);
    }
    let plan = guard.planner.plan_fft_inverse(len);
    guard.inverse.insert(len, Arc::clone(&plan));
    plan
}

/// In-place unnormalized DFT, X_k = Σ_j x_j e^{−2πi jk/len}.
pub(crate) fn dft_forward(buf: &mut [C64]) {
    forward_plan(buf.len()).process(buf);
}

/// In-place unnormalized inverse DFT, x_j = Σ_k X_k e^{+2πi jk/len}.
pub(crate) fn dft_inverse(buf: &mut [C64]) {
    inverse_plan(buf.len()).process(buf);
}

/// Re-orders wrap-around FFT output (slot m ↔ n ≡ m mod N) into
/// ascending-index amplitudes (slot j ↔ n = j − N/2).
pub(crate) fn fft_to_lattice_order(spec: &[C64]) -> Vec<C64> {
    let n = spec.len();
    let half = n / 2;
    let mut out = vec![C64::new(0.0, 0.0); n];
    out[..half].copy_from_slice(&spec[n - half..]);
    out[half..].copy_from_slice(&spec[..n - half]);
    out
}

/// Evaluates ψ(θ_j) = (1/√2π) Σ_n a_n e^{inθ_j} on an `m`-node angle grid
/// θ_j = 2πj/m for amplitudes given in ascending-index order.
///
/// For m ≥ N the evaluation is exact (zero-padded inverse DFT); the caller
/// guarantees m ≥ N.
pub(crate) fn synthesize_on_grid(amps: &[C64], m: usize) -> Vec<C64> {
    debug_assert!(m >= amps.len(), "synthesis grid must resolve the basis");
    let n = amps.len();
    let half = (n / 2) as i64;
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for (slot, &a) in amps.iter().enumerate() {
        let idx = slot as i64 - half;
        buf[idx.rem_euclid(m as i64) as usize] = a;
    }
    dft_inverse(&mut buf);
    let scale = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    buf
}
