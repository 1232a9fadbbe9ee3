//! Spin-orbit pendulum of a circular packet: ⟨s⟩, ⟨l⟩ and the spin purity
//! over two spin-orbit periods, printed as CSV.
//!
//!     cargo run --example pendulum -- [N]

use std::f64::consts::PI;

use wplab::evolution::EvolutionParams;
use wplab::io::write_observables_csv;
use wplab::observables::time_series;
use wplab::states::{attach_spin, circular_coherent};
use wplab::{SpinDirection, Truncation};

fn main() -> wplab::Result<()> {
    let n_mean: f64 = std::env::args().nth(1).map_or(Ok(18.0), |s| s.parse()).expect("N must be a number");
    let trunc = Truncation::for_mean(n_mean);
    let psi0 = attach_spin(&circular_coherent(n_mean, &trunc)?, SpinDirection::X)?;
    let times: Vec<f64> = (0..=200).map(|k| 4.0 * PI * k as f64 / 200.0).collect();
    let rows = time_series(&psi0, &times, &EvolutionParams::ls_only())?;

    let (t_min, sx_min) = rows
        .iter()
        .map(|(o, _)| (o.time, o.s[0]))
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let dip = rows.iter().map(|(o, _)| o.purity).fold(f64::INFINITY, f64::min);
    eprintln!("N = {n_mean}: min <s_x> = {sx_min:.6} at tau = {t_min:.4}, min purity = {dip:.6}");

    write_observables_csv(std::io::stdout().lock(), &rows)
}
