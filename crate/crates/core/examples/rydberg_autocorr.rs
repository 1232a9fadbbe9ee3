//! Collapse and revival of a Rydberg wave packet.
//!
//! Samples the recurrence probability of the N = 60, σ = 1.5 packet and lists
//! the strongest recurrences in a few windows: the classical period, the
//! fractional revivals, the full revival and the superrevival region.
//!
//!     cargo run --example rydberg_autocorr

use wplab::rydberg::{find_revival_peaks, gaussian_weights, median_spacing, strongest, DEFAULT_PEAK_THRESHOLD};

fn main() -> wplab::Result<()> {
    let packet = gaussian_weights(60.0, 1.5, 50, 70)?;
    let ts = packet.time_scales();
    let t_cl = ts.t_cl;
    println!("T_cl = {:.6e} au, t_rev = {:.2} T_cl, t_sr = {:.2} T_cl", t_cl, ts.t_rev / t_cl, ts.t_sr / t_cl);

    for (centre, label) in [(5.0, "t_rev/4"), (7.0, "t_rev/3"), (10.0, "t_rev/2")] {
        let peaks = find_revival_peaks(&packet, (centre - 1.0) * t_cl, (centre + 1.0) * t_cl, t_cl / 200.0, DEFAULT_PEAK_THRESHOLD)?;
        let spacing = median_spacing(&peaks).unwrap_or(f64::NAN) / t_cl;
        println!("around {centre:>4} T_cl ({label}): {} peaks, spacing {spacing:.4} T_cl", peaks.len());
    }

    let revival = find_revival_peaks(&packet, 5.0 * t_cl, 35.0 * t_cl, t_cl / 100.0, DEFAULT_PEAK_THRESHOLD)?;
    let mut top: Vec<_> = revival.clone();
    top.sort_by(|a, b| b.p.total_cmp(&a.p));
    println!("strongest recurrences in (5, 35) T_cl:");
    for pk in top.iter().take(4) {
        println!("  t = {:8.3} T_cl  P = {:.5}", pk.time / t_cl, pk.p);
    }

    let late = find_revival_peaks(&packet, 250.0 * t_cl, 350.0 * t_cl, t_cl / 40.0, DEFAULT_PEAK_THRESHOLD)?;
    if let Some(best) = strongest(&late) {
        println!("superrevival region: strongest at {:.2} T_cl, P = {:.5}", best.time / t_cl, best.p);
    }
    Ok(())
}
