//! Spin and orbital expectation values, the reduced spin density matrix and
//! state overlaps.
//!
//! Reductions run per radial slab in parallel and are combined in slab
//! order, so results do not depend on the thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{evolve, EvolutionParams};
use crate::states::SpinorState;
use crate::C64;

/// Observables at one instant. Spin in units of ħ (`s = σ/2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinObservables {
    pub time: f64,
    pub s: [f64; 3],
    pub l: [f64; 3],
    pub purity: f64,
    pub norm: f64,
}

impl SpinObservables {
    pub fn of(state: &SpinorState, time: f64) -> Self {
        let rho = spin_density_matrix(state);
        SpinObservables {
            time,
            s: spin_from_rho(&rho.rho),
            l: orbital_expectation(state),
            purity: rho.purity,
            norm: rho.trace(),
        }
    }

    /// `⟨j⟩ = ⟨l⟩ + ⟨s⟩`.
    pub fn total_angular_momentum(&self) -> [f64; 3] {
        [self.l[0] + self.s[0], self.l[1] + self.s[1], self.l[2] + self.s[2]]
    }
}

/// Reduced spin density matrix in the `{+, −}` basis and its purity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinDensity {
    pub rho: [[C64; 2]; 2],
    pub purity: f64,
}

impl SpinDensity {
    pub fn trace(&self) -> f64 {
        self.rho[0][0].re + self.rho[1][1].re
    }
}

fn ordered_sum<T, F>(state: &SpinorState, f: F) -> T
where
    T: Send + std::iter::Sum<T>,
    F: Fn(usize, &[C64]) -> T + Sync + Send,
{
    let slab = state.truncation().slab_len();
    let parts: Vec<T> = state.amplitudes().par_chunks(slab).enumerate().map(|(i, s)| f(i, s)).collect();
    parts.into_iter().sum()
}

#[derive(Clone, Copy, Default)]
struct SpinSums {
    up: f64,
    down: f64,
    cross: C64,
}

impl std::iter::Sum for SpinSums {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(SpinSums::default(), |a, b| SpinSums {
            up: a.up + b.up,
            down: a.down + b.down,
            cross: a.cross + b.cross,
        })
    }
}

/// `ρ = [[⟨Ψ₊|Ψ₊⟩, ⟨Ψ₋|Ψ₊⟩], [⟨Ψ₊|Ψ₋⟩, ⟨Ψ₋|Ψ₋⟩]]` and `Tr ρ²`.
pub fn spin_density_matrix(state: &SpinorState) -> SpinDensity {
    let sums: SpinSums = ordered_sum(state, |_, slab| {
        let mut acc = SpinSums::default();
        for c in slab.chunks_exact(2) {
            acc.up += c[0].norm_sqr();
            acc.down += c[1].norm_sqr();
            acc.cross += c[0].conj() * c[1];
        }
        acc
    });
    let rho = [
        [C64::new(sums.up, 0.0), sums.cross.conj()],
        [sums.cross, C64::new(sums.down, 0.0)],
    ];
    let purity = sums.up * sums.up + sums.down * sums.down + 2.0 * sums.cross.norm_sqr();
    SpinDensity { rho, purity }
}

fn spin_from_rho(rho: &[[C64; 2]; 2]) -> [f64; 3] {
    let cross = rho[1][0];
    [cross.re, cross.im, 0.5 * (rho[0][0].re - rho[1][1].re)]
}

/// `⟨s⟩`: `s_x = Re⟨Ψ₊|Ψ₋⟩`, `s_y = Im⟨Ψ₊|Ψ₋⟩`, `s_z = (‖Ψ₊‖² − ‖Ψ₋‖²)/2`.
pub fn spin_expectation(state: &SpinorState) -> [f64; 3] {
    spin_from_rho(&spin_density_matrix(state).rho)
}

#[derive(Clone, Copy, Default)]
struct OrbitalSums {
    lz: f64,
    lplus: C64,
}

impl std::iter::Sum for OrbitalSums {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(OrbitalSums::default(), |a, b| OrbitalSums { lz: a.lz + b.lz, lplus: a.lplus + b.lplus })
    }
}

/// `⟨l⟩` from `l_z` and the raising operator, `⟨l_+⟩ = ⟨l_x⟩ + i⟨l_y⟩`.
pub fn orbital_expectation(state: &SpinorState) -> [f64; 3] {
    let trunc = *state.truncation();
    let sums: OrbitalSums = ordered_sum(state, |_, slab| {
        let mut acc = OrbitalSums::default();
        for l in 0..=trunc.l_max {
            let li = l as i32;
            for m in -li..=li {
                for s in [crate::Spin::Up, crate::Spin::Down] {
                    let a = slab[trunc.position(0, l, m, s)];
                    acc.lz += m as f64 * a.norm_sqr();
                    if m < li {
                        let b = slab[trunc.position(0, l, m + 1, s)];
                        let ladder = (((li - m) * (li + m + 1)) as f64).sqrt();
                        acc.lplus += b.conj() * a * ladder;
                    }
                }
            }
        }
        acc
    });
    [sums.lplus.re, sums.lplus.im, sums.lz]
}

/// `⟨a|b⟩`.
pub fn overlap(a: &SpinorState, b: &SpinorState) -> Result<C64> {
    if a.truncation() != b.truncation() {
        return Err(Error::TruncationMismatch);
    }
    let slab = a.truncation().slab_len();
    let parts: Vec<C64> = a
        .amplitudes()
        .par_chunks(slab)
        .zip(b.amplitudes().par_chunks(slab))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.conj() * q).sum())
        .collect();
    Ok(parts.into_iter().sum())
}

/// Observables and recurrence probability `|⟨Ψ(0)|Ψ(t)⟩|²` on the given times.
pub fn time_series(
    initial: &SpinorState,
    times: &[f64],
    params: &EvolutionParams,
) -> Result<Vec<(SpinObservables, f64)>> {
    params.validate()?;
    times
        .iter()
        .map(|&t| {
            let psi = evolve(initial, t, params)?;
            let p = overlap(initial, &psi)?.norm_sqr();
            Ok((SpinObservables::of(&psi, t), p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisIndex, Spin, Truncation};

    fn ground(spin: (C64, C64)) -> SpinorState {
        let t = Truncation::new(2, 1, 1e-8).unwrap();
        let mut s = SpinorState::zeros(t);
        s.set(&BasisIndex::new(0, 0, 0, Spin::Up).unwrap(), spin.0).unwrap();
        s.set(&BasisIndex::new(0, 0, 0, Spin::Down).unwrap(), spin.1).unwrap();
        s
    }

    #[test]
    fn spin_y_eigenstate() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = ground((C64::new(h, 0.0), C64::new(0.0, h)));
        let sv = spin_expectation(&s);
        assert!((sv[1] - 0.5).abs() < 1e-15 && sv[0].abs() < 1e-15 && sv[2].abs() < 1e-15);
    }

    #[test]
    fn orthogonal_spins_have_zero_overlap() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = ground((C64::new(h, 0.0), C64::new(h, 0.0)));
        let b = ground((C64::new(h, 0.0), C64::new(-h, 0.0)));
        assert!(overlap(&a, &b).unwrap().norm() < 1e-12);
        assert!((overlap(&a, &a).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_truncations() {
        let a = SpinorState::zeros(Truncation::new(2, 1, 1e-8).unwrap());
        let b = SpinorState::zeros(Truncation::new(3, 1, 1e-8).unwrap());
        assert!(matches!(overlap(&a, &b), Err(Error::TruncationMismatch)));
    }

    #[test]
    fn mixed_spin_purity_is_half() {
        let t = Truncation::new(1, 0, 1e-8).unwrap();
        let mut s = SpinorState::zeros(t);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        s.set(&BasisIndex::new(0, 0, 0, Spin::Up).unwrap(), C64::new(h, 0.0)).unwrap();
        s.set(&BasisIndex::new(0, 1, 0, Spin::Down).unwrap(), C64::new(h, 0.0)).unwrap();
        let d = spin_density_matrix(&s);
        assert!((d.purity - 0.5).abs() < 1e-15);
        assert!((d.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orbital_ladder_on_l1() {
        // (|1,1⟩ + |1,0⟩)/√2: ⟨l_x⟩ = √2·(1/2)... l_+|1,0⟩ = √2|1,1⟩ → ⟨l_+⟩ = √2/2.
        let t = Truncation::new(1, 0, 1e-8).unwrap();
        let mut s = SpinorState::zeros(t);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        s.set(&BasisIndex::new(0, 1, 1, Spin::Up).unwrap(), C64::new(h, 0.0)).unwrap();
        s.set(&BasisIndex::new(0, 1, 0, Spin::Up).unwrap(), C64::new(h, 0.0)).unwrap();
        let l = orbital_expectation(&s);
        assert!((l[0] - h).abs() < 1e-15 && l[1].abs() < 1e-15 && (l[2] - 0.5).abs() < 1e-15);
    }
}
