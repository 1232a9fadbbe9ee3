#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wplab::basis::Truncation;
use wplab::{SpinorState, C64};

/// Normalized state with independent complex Gaussian-ish amplitudes.
pub fn random_state(trunc: Truncation, seed: u64) -> SpinorState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..trunc.dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut s = SpinorState::from_amplitudes(trunc, amps).unwrap();
    s.normalize();
    s
}

pub fn max_diff(a: &SpinorState, b: &SpinorState) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn l2_diff(a: &SpinorState, b: &SpinorState) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn small_truncation() -> Truncation {
    Truncation::new(4, 3, 1e-8).unwrap()
}
