//! Quadrature projection of a displaced Gaussian onto `|n_r l m⟩`.
//!
//! Radial Gauss–Legendre on the window where the Gaussian is non-negligible,
//! Gauss–Legendre in `cos θ`, and a uniform `φ` grid reduced by FFT. When
//! both `x0` and `p0` lie on the z axis the packet is azimuthally symmetric
//! and only `m = 0` is computed; all other amplitudes stay exactly zero.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::basis::special::{legendre_table, RadialRecurrence};
use crate::basis::{Spin, Truncation};
use crate::quadrature::{gauss_legendre, gauss_legendre_interval};
use crate::C64;

/// Half-width of the radial window around `|x0|`; `e^{-R²/2}` is below 1e-21.
const RADIAL_WINDOW: f64 = 10.0;

/// Writes `⟨n_r l m| G⟩` into the spin-up slots of `out`.
pub fn project_gaussian(x0: [f64; 3], p0: [f64; 3], trunc: &Truncation, out: &mut [C64]) {
    let l_max = trunc.l_max as usize;
    let n_r_count = trunc.n_r_max as usize + 1;
    let lm_count = trunc.lm_count();
    let a = norm(x0);
    let b = norm(p0);
    let axial = x0[0] == 0.0 && x0[1] == 0.0 && p0[0] == 0.0 && p0[1] == 0.0;

    let r_lo = (a - RADIAL_WINDOW).max(0.0);
    let r_hi = a + RADIAL_WINDOW;
    let n_rad = 80 + 2 * n_r_count + l_max / 2 + (2.0 * RADIAL_WINDOW * b).ceil() as usize;
    let (radii, rw) = gauss_legendre_interval(n_rad, r_lo, r_hi);

    // Angular bandwidth of exp(r (x0 + i p0)·Ω) over the radial window.
    let band = (1.5 * r_hi * (a + b)).ceil() as usize + 16;
    let n_theta = (l_max + band) / 2 + 8;
    let n_phi = (l_max + band + 2).next_power_of_two();
    let (cos_nodes, cos_weights) = gauss_legendre(n_theta);
    let legendre: Vec<Vec<f64>> = cos_nodes
        .iter()
        .map(|&x| legendre_table(trunc.l_max, x, (1.0 - x * x).max(0.0).sqrt()))
        .collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_phi);
    let dphi = 2.0 * PI / n_phi as f64;
    let phi_trig: Vec<(f64, f64)> = (0..n_phi).map(|k| (k as f64 * dphi).sin_cos()).collect();
    let norm_g = PI.powf(-0.75);

    // g[i][l² + l + m] = ∫ Y*_lm(Ω) G(r_i Ω) dΩ
    let angular: Vec<Vec<C64>> = radii
        .par_iter()
        .map(|&r| {
            let mut g = vec![C64::new(0.0, 0.0); lm_count];
            let base = -0.5 * (r * r + a * a);
            let mut buf = vec![C64::new(0.0, 0.0); n_phi];
            for (j, (&x, &wt)) in cos_nodes.iter().zip(&cos_weights).enumerate() {
                let s = (1.0 - x * x).max(0.0).sqrt();
                let table = &legendre[j];
                if axial {
                    let f0 = 2.0 * PI * norm_g * C64::from_polar((base + r * x0[2] * x).exp(), r * p0[2] * x);
                    for l in 0..=l_max {
                        g[l * l + l] += wt * table[l * (l + 1) / 2] * f0;
                    }
                    continue;
                }
                for (k, &(sp, cp)) in phi_trig.iter().enumerate() {
                    let dir = [s * cp, s * sp, x];
                    let re = base + r * dot(x0, dir);
                    let im = r * dot(p0, dir);
                    buf[k] = C64::from_polar(norm_g * re.exp(), im);
                }
                fft.process(&mut buf);
                for m in -(l_max as i64)..=(l_max as i64) {
                    let fm = buf[m.rem_euclid(n_phi as i64) as usize] * (wt * dphi);
                    let ma = m.unsigned_abs() as usize;
                    let sign = if m < 0 && ma % 2 == 1 { -1.0 } else { 1.0 };
                    for l in ma..=l_max {
                        let p = sign * table[l * (l + 1) / 2 + ma];
                        g[((l * l + l) as i64 + m) as usize] += p * fm;
                    }
                }
            }
            g
        })
        .collect();

    // radial[i][l][n_r] = w_i r_i² R_{n_r,l}(r_i)
    let recurrences: Vec<RadialRecurrence> = (0..=trunc.l_max).map(|l| RadialRecurrence::new(l, n_r_count)).collect();
    let radial: Vec<Vec<f64>> = radii
        .par_iter()
        .zip(rw.par_iter())
        .map(|(&r, &w)| {
            let mut col = vec![0.0; (l_max + 1) * n_r_count];
            for l in 0..=l_max {
                let slot = &mut col[l * n_r_count..(l + 1) * n_r_count];
                recurrences[l].fill(r, slot);
                slot.iter_mut().for_each(|v| *v *= w * r * r);
            }
            col
        })
        .collect();

    out.par_chunks_mut(trunc.slab_len()).enumerate().for_each(|(n_r, slab)| {
        for l in 0..=l_max {
            let ms: Vec<i64> = if axial { vec![0] } else { (-(l as i64)..=l as i64).collect() };
            for m in ms {
                let lm = (l * l + l) as i64 + m;
                let mut acc = C64::new(0.0, 0.0);
                for (g, rad) in angular.iter().zip(&radial) {
                    acc += rad[l * n_r_count + n_r] * g[lm as usize];
                }
                slab[lm as usize * 2 + Spin::Up.offset()] = acc;
            }
        }
    });
}

fn norm(v: [f64; 3]) -> f64 {
    dot(v, v).sqrt()
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
