//! Vortex ring of a linear packet under spin-orbit coupling.
//!
//! A Gaussian displaced along z with spin up spreads into a ring around the
//! z axis and refocuses after one spin-orbit period. Prints the torus
//! metrics and optionally writes rasters into the given directory.
//!
//!     cargo run --example vortex -- [out_dir]

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;

use wplab::density::{evaluate_density, torus_metrics, Axis, GridSpec};
use wplab::evolution::apply_uls;
use wplab::io::write_raster;
use wplab::states::{attach_spin, linear_gaussian};
use wplab::{SpinDirection, Truncation};

fn main() -> wplab::Result<()> {
    let out_dir = std::env::args().nth(1);
    let n_mean = 8.0;
    let trunc = Truncation::for_mean(n_mean);
    let psi = attach_spin(&linear_gaussian(n_mean, SpinDirection::Z, &trunc)?, SpinDirection::Z)?;
    let spec = GridSpec::for_mean(n_mean, 64)?;

    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "tau/pi", "ring r", "on-axis", "global", "norm");
    for k in 0..=8 {
        let tau = PI * k as f64 / 4.0;
        let field = evaluate_density(&apply_uls(&psi, tau), &spec)?;
        let m = torus_metrics(&field, Axis::Z)?;
        println!(
            "{:>8.2} {:>10.4} {:>10.5} {:>10.5} {:>10.5}",
            tau / PI,
            m.ring_radius,
            m.on_axis_max,
            m.global_max,
            field.integral()
        );
        if let Some(dir) = &out_dir {
            std::fs::create_dir_all(dir)?;
            write_raster(BufWriter::new(File::create(format!("{dir}/vortex_{k}.raster"))?), &field)?;
        }
    }
    Ok(())
}
