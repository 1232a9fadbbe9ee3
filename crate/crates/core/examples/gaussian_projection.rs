//! Numerical projection of displaced Gaussians onto the oscillator basis.
//!
//! The Gaussian at (√N, 0, 0) with momentum (0, √N, 0) is the circular
//! coherent state; this compares the two constructions, then writes the
//! projected state in the plain-text state format.
//!
//!     cargo run --example gaussian_projection -- [N]

use wplab::io::write_state;
use wplab::observables::{orbital_expectation, overlap};
use wplab::states::{circular_coherent, general_gaussian};
use wplab::Truncation;

fn main() -> wplab::Result<()> {
    let n_mean: f64 = std::env::args().nth(1).map_or(12.0, |s| s.parse().expect("N must be a number"));
    let trunc = Truncation::for_mean(n_mean);
    let x0 = n_mean.sqrt();

    let projected = general_gaussian([x0, 0.0, 0.0], [0.0, x0, 0.0], &trunc)?;
    let circular = circular_coherent(n_mean, &trunc)?;
    let f = overlap(&projected, &circular)?.norm_sqr();
    let l = orbital_expectation(&projected);
    eprintln!("N = {n_mean}: fidelity 1 - {:.2e}, <l> = ({:.2e}, {:.2e}, {:.6})", 1.0 - f, l[0], l[1], l[2]);

    // Only the occupied amplitudes are interesting; the file lists them all.
    let occupied = projected.nonzero().filter(|(_, a)| a.norm() > 1e-6).count();
    eprintln!("{occupied} amplitudes above 1e-6 out of {}", trunc.dim());
    write_state(std::io::stdout().lock(), &projected)
}
