//! Factorized propagator against direct exponentiation of the Hamiltonian
//! on a small basis.
//!
//!     cargo run --example oracle_check

use std::f64::consts::PI;

use wplab::evolution::{apply_dense, brute_force_propagator, evolve, EvolutionParams};
use wplab::{SpinorState, Truncation, C64};

fn main() -> wplab::Result<()> {
    let trunc = Truncation::new(4, 3, 1e-8)?;
    let params = EvolutionParams::default();
    println!("basis dimension {}", trunc.dim());

    // Deterministic, unstructured test vector.
    let amps = (0..trunc.dim()).map(|k| C64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos())).collect();
    let mut psi = SpinorState::from_amplitudes(trunc, amps)?;
    psi.normalize();

    for t in [0.3, 1.7, PI, 2.0 * PI] {
        let fast = evolve(&psi, t, &params)?;
        let dense = apply_dense(&brute_force_propagator(&trunc, t, &params)?, &psi);
        let err: f64 = fast
            .amplitudes()
            .iter()
            .zip(dense.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        println!("t = {t:6.4}: |factorized - dense| = {err:.2e}");
    }
    Ok(())
}
