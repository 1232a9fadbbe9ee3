//! Radial and angular basis functions of the isotropic oscillator.
//!
//! Everything is evaluated through normalized recurrences; no raw factorial
//! or Gamma value is ever formed, and prefactors go through logs.

use std::f64::consts::PI;

use crate::C64;

/// `ln Γ(l + 3/2)` for integer `l ≥ 0`, summed exactly from `Γ(3/2) = √π/2`.
pub fn ln_gamma_l_three_halves(l: u32) -> f64 {
    let mut acc = 0.5 * PI.ln() - std::f64::consts::LN_2;
    for k in 1..=l {
        acc += (k as f64 + 0.5).ln();
    }
    acc
}

/// `ln k!`.
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// Normalized oscillator radial function `R_{n_r,l}(r)` with
/// `∫ R² r² dr = 1`, positive near the origin.
pub fn radial_wavefunction(n_r: u32, l: u32, r: f64) -> f64 {
    let mut out = vec![0.0; n_r as usize + 1];
    radial_column(l, r, ln_gamma_l_three_halves(l), &mut out);
    out[n_r as usize]
}

/// Fills `out[n] = R_{n,l}(r)` for `n = 0..out.len()`.
///
/// `ln_gamma` must be `ln Γ(l + 3/2)`. For many radii at fixed `l`, a
/// [`RadialRecurrence`] avoids recomputing the recurrence coefficients.
pub fn radial_column(l: u32, r: f64, ln_gamma: f64, out: &mut [f64]) {
    let rec = RadialRecurrence { l, ln_gamma, coeffs: radial_coefficients(l, out.len()) };
    rec.fill(r, out);
}

fn radial_coefficients(l: u32, depth: usize) -> Vec<[f64; 3]> {
    let alpha = l as f64 + 0.5;
    (0..depth)
        .map(|n| {
            let nf = n as f64;
            if n == 0 {
                return [0.0; 3];
            }
            let inv = 1.0 / (nf * (nf + alpha)).sqrt();
            [(2.0 * nf - 1.0 + alpha) * inv, inv, ((nf - 1.0) * (nf - 1.0 + alpha)).sqrt() * inv]
        })
        .collect()
}

/// `R_{n,l}(r)` for `n < depth` at a fixed `l`, with the recurrence
/// coefficients computed once.
#[derive(Clone, Debug)]
pub struct RadialRecurrence {
    l: u32,
    ln_gamma: f64,
    coeffs: Vec<[f64; 3]>,
}

impl RadialRecurrence {
    pub fn new(l: u32, depth: usize) -> Self {
        RadialRecurrence { l, ln_gamma: ln_gamma_l_three_halves(l), coeffs: radial_coefficients(l, depth) }
    }

    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// Writes `R_{n,l}(r)` to `out[n]` for `n < min(out.len(), depth)`.
    pub fn fill(&self, r: f64, out: &mut [f64]) {
        let depth = out.len().min(self.coeffs.len());
        if depth == 0 {
            return;
        }
        let x = r * r;
        let l = self.l;
        // sqrt(2) r^l e^{-r²/2} / sqrt(Γ(l+3/2)), in the log domain.
        let prefactor = if l == 0 {
            (0.5 * std::f64::consts::LN_2 - 0.5 * x - 0.5 * self.ln_gamma).exp()
        } else if r == 0.0 {
            0.0
        } else {
            (0.5 * std::f64::consts::LN_2 + l as f64 * r.ln() - 0.5 * x - 0.5 * self.ln_gamma).exp()
        };
        // Normalized Laguerre: L̃_n = sqrt(n!/Γ(n+α+1)) L_n^α, scaled by sqrt(Γ(α+1)).
        let mut prev = 0.0;
        let mut cur = 1.0;
        out[0] = prefactor;
        for n in 1..depth {
            let [c0, c1, c2] = self.coeffs[n];
            let next = (c0 - c1 * x) * cur - c2 * prev;
            prev = cur;
            cur = next;
            out[n] = prefactor * cur;
        }
    }
}

/// Normalized associated Legendre values `P̄_l^m(cos θ)` for fixed `m ≥ 0`
/// and `l = m..=l_max`, written to `out[l - m]`.
///
/// Includes the Condon–Shortley phase and the `1/sqrt(4π)` factor, so that
/// `Y_lm = P̄_l^m(cos θ) e^{imφ}`.
pub fn legendre_column(m: u32, l_max: u32, cos_theta: f64, sin_theta: f64, out: &mut [f64]) {
    LegendreRecurrence::new(m, l_max).fill(cos_theta, sin_theta, out);
}

/// `P̄_l^m` for `l = m..=l_max` at a fixed `m`, coefficients computed once.
#[derive(Clone, Debug)]
pub struct LegendreRecurrence {
    m: u32,
    seed: f64,
    coeffs: Vec<[f64; 2]>,
}

impl LegendreRecurrence {
    pub fn new(m: u32, l_max: u32) -> Self {
        assert!(l_max >= m, "l_max must be at least m");
        let mut seed = 0.5 / PI.sqrt();
        for k in 1..=m {
            let kf = k as f64;
            seed *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt();
        }
        let mf = m as f64;
        let coeffs = (m..=l_max)
            .map(|l| {
                let lf = l as f64;
                if l < m + 2 {
                    return [(2.0 * mf + 3.0).sqrt(), 0.0];
                }
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                [a, a * b]
            })
            .collect();
        LegendreRecurrence { m, seed, coeffs }
    }

    /// Writes `P̄_{m+k}^m` to `out[k]`; `out` must hold `l_max − m + 1` values.
    pub fn fill(&self, cos_theta: f64, sin_theta: f64, out: &mut [f64]) {
        let len = self.coeffs.len();
        debug_assert!(out.len() >= len);
        let pmm = self.seed * sin_theta.powi(self.m as i32);
        out[0] = pmm;
        if len == 1 {
            return;
        }
        let mut p_prev = pmm;
        let mut p_cur = self.coeffs[1][0] * cos_theta * pmm;
        out[1] = p_cur;
        for k in 2..len {
            let [a, ab] = self.coeffs[k];
            let next = a * cos_theta * p_cur - ab * p_prev;
            p_prev = p_cur;
            p_cur = next;
            out[k] = p_cur;
        }
    }
}

/// Full table `P̄_l^m` for `0 ≤ m ≤ l ≤ l_max`, packed at `l(l+1)/2 + m`.
pub fn legendre_table(l_max: u32, cos_theta: f64, sin_theta: f64) -> Vec<f64> {
    let lm = l_max as usize;
    let mut table = vec![0.0; (lm + 1) * (lm + 2) / 2];
    let mut col = vec![0.0; lm + 1];
    for m in 0..=l_max {
        legendre_column(m, l_max, cos_theta, sin_theta, &mut col);
        for l in m..=l_max {
            let lu = l as usize;
            table[lu * (lu + 1) / 2 + m as usize] = col[(l - m) as usize];
        }
    }
    table
}

/// Orthonormal spherical harmonic with Condon–Shortley phase.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> C64 {
    assert!(m.unsigned_abs() <= l, "|m| must not exceed l");
    let ma = m.unsigned_abs();
    let mut col = vec![0.0; (l - ma) as usize + 1];
    legendre_column(ma, l, theta.cos(), theta.sin(), &mut col);
    let p = col[(l - ma) as usize];
    let p = if m < 0 && ma % 2 == 1 { -p } else { p };
    C64::from_polar(p, m as f64 * phi)
}
