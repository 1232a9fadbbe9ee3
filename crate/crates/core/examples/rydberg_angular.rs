//! Along-orbit density at the fractional revivals t_rev/4, t_rev/3, t_rev/2,
//! drawn as a coarse text histogram with the lobe count.
//!
//!     cargo run --example rydberg_angular

use wplab::rydberg::{count_lobes, gaussian_weights, orbital_angular_density, phi_grid};

fn main() -> wplab::Result<()> {
    let packet = gaussian_weights(60.0, 1.5, 50, 70)?;
    let t_rev = packet.time_scales().t_rev;
    let phi = phi_grid(4096);
    for q in [4u32, 3, 2] {
        let d = orbital_angular_density(&packet, t_rev / q as f64, &phi);
        let max = d.iter().copied().fold(0.0, f64::max);
        let bars: String = d
            .chunks(64)
            .map(|c| {
                let v = c.iter().copied().fold(0.0, f64::max) / max;
                [' ', '.', ':', '|', '#'][((v * 4.0).round() as usize).min(4)]
            })
            .collect();
        println!("t_rev/{q}: {} lobes  [{bars}]", count_lobes(&d));
    }
    Ok(())
}
