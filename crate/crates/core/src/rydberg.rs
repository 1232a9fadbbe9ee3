//! Rydberg wave packets built from circular hydrogenic states.
//!
//! Level energies are `E_n = −1/(2n²)` hartree, so the exact autocorrelation
//! is `P(t) = |Σ w_n e^{it/(2n²)}|²`. The time scales follow
//! `T_cl = 2πN³`, `t_rev = (N/3 + 1/2) T_cl`, `t_sr = (N²/4 + 1/2) T_cl`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct RydbergPacket {
    pub n_mean: f64,
    pub sigma: f64,
    pub n_min: u32,
    pub n_max: u32,
    /// `w_n = |c_n|²` for `n = n_min..=n_max`, summing to one.
    pub weights: Vec<f64>,
}

impl RydbergPacket {
    pub fn n_values(&self) -> impl Iterator<Item = u32> + '_ {
        self.n_min..=self.n_max
    }

    /// Real positive amplitudes `c_n = sqrt(w_n)`.
    pub fn amplitudes(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.sqrt()).collect()
    }

    pub fn time_scales(&self) -> TimeScales {
        time_scales(self.n_mean)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeScales {
    pub t_cl: f64,
    pub t_rev: f64,
    pub t_sr: f64,
}

/// Gaussian weights `∝ exp[−((n−N)/2σ)²]²` on `[n_min, n_max]`, renormalized.
pub fn gaussian_weights(n_mean: f64, sigma: f64, n_min: u32, n_max: u32) -> Result<RydbergPacket> {
    if n_min < 1 || n_min > n_max {
        return Err(Error::invalid(format!("empty or invalid window [{n_min}, {n_max}]")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid("sigma must be positive"));
    }
    if !n_mean.is_finite() {
        return Err(Error::invalid("N must be finite"));
    }
    let c0 = (2.0 * PI * sigma).powf(-0.25);
    let mut weights: Vec<f64> = (n_min..=n_max)
        .map(|n| {
            let c = c0 * (-((n as f64 - n_mean) / (2.0 * sigma)).powi(2)).exp();
            c * c
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::invalid("window carries no weight"));
    }
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(RydbergPacket { n_mean, sigma, n_min, n_max, weights })
}

pub fn time_scales(n_mean: f64) -> TimeScales {
    let t_cl = 2.0 * PI * n_mean.powi(3);
    TimeScales {
        t_cl,
        t_rev: (n_mean / 3.0 + 0.5) * t_cl,
        t_sr: (n_mean * n_mean / 4.0 + 0.5) * t_cl,
    }
}

/// Exact recurrence probability with hydrogenic phases.
pub fn autocorrelation_exact(packet: &RydbergPacket, t: f64) -> f64 {
    packet
        .n_values()
        .zip(&packet.weights)
        .map(|(n, &w)| {
            let nf = n as f64;
            C64::from_polar(w, t / (2.0 * nf * nf))
        })
        .sum::<C64>()
        .norm_sqr()
}

/// Recurrence probability from the Taylor-expanded phases
/// `2π[(n−N)t/T_cl + (n−N)²t/t_rev + (n−N)³t/t_sr]`, kept through `order`.
pub fn autocorrelation_taylor(packet: &RydbergPacket, t: f64, order: u32) -> Result<f64> {
    if !(1..=3).contains(&order) {
        return Err(Error::invalid(format!("Taylor order {order} not in 1..=3")));
    }
    let ts = packet.time_scales();
    let rates = [ts.t_cl, ts.t_rev, ts.t_sr];
    Ok(packet
        .n_values()
        .zip(&packet.weights)
        .map(|(n, &w)| {
            let k = n as f64 - packet.n_mean;
            let phase: f64 = (0..order as usize)
                .map(|j| k.powi(j as i32 + 1) * t / rates[j])
                .sum();
            C64::from_polar(w, -2.0 * PI * phase)
        })
        .sum::<C64>()
        .norm_sqr())
}

/// Exact `P(t)` on a list of times.
pub fn sample_autocorrelation(packet: &RydbergPacket, times: &[f64]) -> Vec<f64> {
    times.par_iter().map(|&t| autocorrelation_exact(packet, t)).collect()
}

/// Along-orbit density `|Σ c_n e^{i[(n−1)φ + t/(2n²)]}|² / 2π` of the
/// circular-state packet; integrates to one over `[0, 2π)`.
pub fn orbital_angular_density(packet: &RydbergPacket, t: f64, phi: &[f64]) -> Vec<f64> {
    let terms: Vec<(f64, f64, f64)> = packet
        .n_values()
        .zip(packet.amplitudes())
        .map(|(n, c)| {
            let nf = n as f64;
            (c, nf - 1.0, t / (2.0 * nf * nf))
        })
        .collect();
    phi.par_iter()
        .map(|&p| {
            terms
                .iter()
                .map(|&(c, m, ph)| C64::from_polar(c, m * p + ph))
                .sum::<C64>()
                .norm_sqr()
                / (2.0 * PI)
        })
        .collect()
}

/// Uniform grid of `n` angles on `[0, 2π)`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// Number of periodic local maxima exceeding half the global maximum.
pub fn count_lobes(density: &[f64]) -> usize {
    let n = density.len();
    let max = density.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..n)
        .filter(|&k| {
            let d = density[k];
            d > 0.5 * max && d > density[(k + n - 1) % n] && d >= density[(k + 1) % n]
        })
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub time: f64,
    pub p: f64,
}

pub const DEFAULT_PEAK_THRESHOLD: f64 = 0.1;

/// Local maxima of `P` on the grid `t_start + k·dt` within `[t_start, t_end]`.
///
/// A sample is a peak when it is strictly above its left neighbour, not
/// below its right one (plateaus resolve to the earliest sample) and above
/// `threshold`. The grid must resolve `T_cl/20`.
pub fn find_revival_peaks(
    packet: &RydbergPacket,
    t_start: f64,
    t_end: f64,
    dt: f64,
    threshold: f64,
) -> Result<Vec<Peak>> {
    let t_cl = packet.time_scales().t_cl;
    if !(dt > 0.0) || dt > t_cl / 20.0 {
        return Err(Error::invalid(format!("dt = {dt} does not resolve T_cl/20 = {}", t_cl / 20.0)));
    }
    if !(t_end > t_start) {
        return Err(Error::invalid("empty time range"));
    }
    let count = ((t_end - t_start) / dt + 1e-9).floor() as usize + 1;
    let times: Vec<f64> = (0..count).map(|k| t_start + k as f64 * dt).collect();
    let p = sample_autocorrelation(packet, &times);
    Ok(local_maxima(&times, &p, threshold))
}

/// Peak scan shared by the Rydberg and CLI code paths.
pub fn local_maxima(times: &[f64], values: &[f64], threshold: f64) -> Vec<Peak> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| values[k] > threshold && values[k] > values[k - 1] && values[k] >= values[k + 1])
        .map(|k| Peak { time: times[k], p: values[k] })
        .collect()
}

/// Median distance between consecutive peaks.
pub fn median_spacing(peaks: &[Peak]) -> Option<f64> {
    if peaks.len() < 2 {
        return None;
    }
    let mut gaps: Vec<f64> = peaks.windows(2).map(|w| w[1].time - w[0].time).collect();
    gaps.sort_by(|a, b| a.total_cmp(b));
    let n = gaps.len();
    Some(if n % 2 == 1 { gaps[n / 2] } else { 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]) })
}

/// Highest peak, earliest on ties.
pub fn strongest(peaks: &[Peak]) -> Option<Peak> {
    peaks.iter().copied().fold(None, |best, p| match best {
        Some(b) if b.p >= p.p => Some(b),
        _ => Some(p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_packet() -> RydbergPacket {
        gaussian_weights(60.0, 1.5, 50, 70).unwrap()
    }

    #[test]
    fn weights_peak_symmetry_and_sum() {
        let p = reference_packet();
        let w = &p.weights;
        let imax = w.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(imax as u32 + p.n_min, 60);
        assert!((w[9] - w[11]).abs() <= 1e-15);
        assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn weights_reject_bad_input() {
        assert!(gaussian_weights(60.0, 1.5, 0, 10).is_err());
        assert!(gaussian_weights(60.0, 1.5, 20, 10).is_err());
        assert!(gaussian_weights(60.0, 0.0, 50, 70).is_err());
        assert!(gaussian_weights(60.0, -1.0, 50, 70).is_err());
    }

    #[test]
    fn reference_time_scales() {
        let ts = time_scales(60.0);
        assert_eq!(ts.t_cl, 2.0 * PI * 216000.0);
        assert!((ts.t_rev / ts.t_cl - 20.5).abs() < 1e-12);
        assert!((ts.t_sr / ts.t_cl - 900.5).abs() < 1e-12);
        assert!(ts.t_cl < ts.t_rev && ts.t_rev < ts.t_sr);
    }

    #[test]
    fn autocorrelation_at_zero_is_one() {
        let p = reference_packet();
        assert!((autocorrelation_exact(&p, 0.0) - 1.0).abs() < 1e-14);
        for order in 1..=3 {
            assert!((autocorrelation_taylor(&p, 0.0, order).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(autocorrelation_taylor(&p, 0.0, 4).is_err());
        assert!(autocorrelation_taylor(&p, 0.0, 0).is_err());
    }

    #[test]
    fn first_order_taylor_is_classically_periodic() {
        let p = reference_packet();
        let tcl = p.time_scales().t_cl;
        for t in [0.13, 1.7, 12.25, 33.0] {
            let a = autocorrelation_taylor(&p, t * tcl, 1).unwrap();
            let b = autocorrelation_taylor(&p, (t + 1.0) * tcl, 1).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_recurrence_on_small_window() {
        let p = gaussian_weights(2.5, 1.0, 2, 3).unwrap();
        let period = 4.0 * PI * 36.0;
        for t in [0.0, 1.0, 17.3, 250.0] {
            let a = autocorrelation_exact(&p, t);
            let b = autocorrelation_exact(&p, t + period);
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn peaks_threshold_and_origin() {
        let p = reference_packet();
        let tcl = p.time_scales().t_cl;
        assert!(find_revival_peaks(&p, 0.0, 50.0 * tcl, tcl / 100.0, 1.1).unwrap().is_empty());
        let peaks = find_revival_peaks(&p, -0.5 * tcl, 0.5 * tcl, tcl / 100.0, 0.1).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!(peaks[0].time.abs() < 1e-6 * tcl);
        assert!((peaks[0].p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let p = reference_packet();
        let tcl = p.time_scales().t_cl;
        assert!(find_revival_peaks(&p, 0.0, tcl, tcl / 10.0, 0.1).is_err());
        assert!(find_revival_peaks(&p, 0.0, tcl, 0.0, 0.1).is_err());
    }

    #[test]
    fn angular_density_integrates_to_one() {
        let p = reference_packet();
        let phi = phi_grid(4096);
        let dphi = 2.0 * PI / 4096.0;
        for t in [0.0, 1234.5, p.time_scales().t_rev / 3.0] {
            let d = orbital_angular_density(&p, t, &phi);
            let total: f64 = d.iter().sum::<f64>() * dphi;
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn localized_packet_has_one_lobe() {
        let p = reference_packet();
        let d = orbital_angular_density(&p, 0.0, &phi_grid(4096));
        assert_eq!(count_lobes(&d), 1);
    }

    #[test]
    fn fractional_revival_lobes() {
        let p = reference_packet();
        let phi = phi_grid(4096);
        let trev = p.time_scales().t_rev;
        for (frac, lobes) in [(0.25, 4), (1.0 / 3.0, 3), (0.5, 2)] {
            let d = orbital_angular_density(&p, frac * trev, &phi);
            assert_eq!(count_lobes(&d), lobes, "t_rev × {frac}");
        }
    }

    #[test]
    fn half_revival_twin_peaks() {
        // Within half an orbit of 20.5 T_cl there is a peak whose height matches
        // the global maximum on (5, 35) T_cl to 1e-3; its twin near 19.45 T_cl
        // is marginally higher.
        let p = reference_packet();
        let tcl = p.time_scales().t_cl;
        let peaks = find_revival_peaks(&p, 5.0 * tcl, 35.0 * tcl, tcl / 1000.0, 0.1).unwrap();
        let top = strongest(&peaks).unwrap();
        let near = peaks.iter().filter(|q| (q.time / tcl - 20.5).abs() <= 0.5).max_by(|a, b| a.p.total_cmp(&b.p)).unwrap();
        assert!(top.p - near.p < 1e-3);
        assert!((top.time / tcl - 19.45).abs() < 0.05);
    }

    #[test]
    fn median_spacing_basic() {
        let pk = |t| Peak { time: t, p: 1.0 };
        assert_eq!(median_spacing(&[pk(0.0)]), None);
        assert_eq!(median_spacing(&[pk(0.0), pk(1.0), pk(3.0)]), Some(1.5));
        assert_eq!(median_spacing(&[pk(0.0), pk(1.0), pk(2.0), pk(5.0)]), Some(1.0));
    }
}
