//! Factorized propagator `U(t) = U₀(t) U_ls(κt)`.
//!
//! `H₀` and `l·σ` commute, so the two factors are applied independently.
//! `U_ls(τ) = f(τ) + g(τ)(l·σ)` acts inside each `(n_r, l, m_j)` sector; the
//! production path uses its spectral form on the two `l·σ` eigenvalues
//! `{l, −(l+1)}` rather than the trigonometric `f`, `g` directly.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::basis::{ls_blocks, shell_energy, BasisIndex, BlockEntries, Spin, Truncation};
use crate::error::{Error, Result};
use crate::states::SpinorState;
use crate::C64;

/// Largest basis the dense oracle accepts.
pub const ORACLE_DIM_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionParams {
    /// Spin-orbit strength; `U_ls` runs on scaled time `τ = κ t`.
    pub kappa: f64,
    /// Oscillator angular frequency.
    pub omega_ho: f64,
    pub freeze_orbital: bool,
    pub freeze_ls: bool,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        EvolutionParams { kappa: 1.0, omega_ho: 10.0, freeze_orbital: false, freeze_ls: false }
    }
}

impl EvolutionParams {
    /// Spin-orbit motion only, with `t` measured directly in `τ`.
    pub fn ls_only() -> Self {
        EvolutionParams { kappa: 1.0, omega_ho: 1.0, freeze_orbital: true, freeze_ls: false }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.freeze_ls && !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::invalid("kappa must be positive while U_ls is active"));
        }
        if !self.freeze_orbital && !(self.omega_ho.is_finite() && self.omega_ho > 0.0) {
            return Err(Error::invalid("omega_ho must be positive while U0 is active"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsCoefficients {
    pub f: C64,
    pub g: C64,
    pub l: u32,
}

impl LsCoefficients {
    /// `f + g·l`, the phase on the `l·σ = l` eigenspace.
    pub fn upper_phase(&self) -> C64 {
        self.f + self.g * self.l as f64
    }

    /// `f − g·(l+1)`, the phase on the `l·σ = −(l+1)` eigenspace.
    pub fn lower_phase(&self) -> C64 {
        self.f - self.g * (self.l as f64 + 1.0)
    }
}

/// `f(τ)` and `g(τ)` of `e^{−iτ(l·σ)} = f + g(l·σ)` on the `l` subspace,
/// with `Ω = 2l + 1`.
pub fn ls_coefficients(l: u32, tau: f64) -> LsCoefficients {
    let omega = crate::basis::omega_eigen(l) as f64;
    let (s, c) = (0.5 * omega * tau).sin_cos();
    let pre = C64::from_polar(1.0, 0.5 * tau);
    let f = pre * C64::new(c, -s / omega);
    let g = pre * C64::new(0.0, -2.0 * s / omega);
    LsCoefficients { f, g, l }
}

/// `U_ls(τ)` applied block by block.
pub fn apply_uls(state: &SpinorState, tau: f64) -> SpinorState {
    let mut out = state.clone();
    apply_uls_in_place(&mut out, tau);
    out
}

pub fn apply_uls_in_place(state: &mut SpinorState, tau: f64) {
    let trunc = *state.truncation();
    let slab_len = trunc.slab_len();
    // Per-l 2×2 propagators are shared by every radial slab.
    let props: Vec<Vec<BlockPropagator>> =
        (0..=trunc.l_max).map(|l| block_propagators(l, tau)).collect();
    state.amplitudes_mut().par_chunks_mut(slab_len).for_each(|slab| {
        if slab.iter().all(|a| a.re == 0.0 && a.im == 0.0) {
            return;
        }
        for per_l in &props {
            for bp in per_l {
                bp.apply(&trunc, slab);
            }
        }
    });
}

/// `U₀(t) = exp(−i t ω H₀)`: a phase per `(n_r, l)`.
pub fn apply_u0(state: &SpinorState, t: f64, params: &EvolutionParams) -> SpinorState {
    let mut out = state.clone();
    apply_u0_in_place(&mut out, t, params.omega_ho);
    out
}

pub fn apply_u0_in_place(state: &mut SpinorState, t: f64, omega_ho: f64) {
    let trunc = *state.truncation();
    state.amplitudes_mut().par_chunks_mut(trunc.slab_len()).enumerate().for_each(|(n_r, slab)| {
        for l in 0..=trunc.l_max {
            let e = (2 * n_r as u32 + l) as f64 + 1.5;
            let phase = C64::from_polar(1.0, -e * omega_ho * t);
            let lo = (l * l) as usize * 2;
            let hi = ((l + 1) * (l + 1)) as usize * 2;
            slab[lo..hi].iter_mut().for_each(|a| *a *= phase);
        }
    });
}

/// Full evolution to time `t`, honoring the freeze flags.
pub fn evolve(state: &SpinorState, t: f64, params: &EvolutionParams) -> Result<SpinorState> {
    params.validate()?;
    let mut out = state.clone();
    if !params.freeze_orbital {
        apply_u0_in_place(&mut out, t, params.omega_ho);
    }
    if !params.freeze_ls {
        apply_uls_in_place(&mut out, params.kappa * t);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
struct BlockPropagator {
    l: u32,
    m_up: i32,
    kind: PropKind,
}

#[derive(Clone, Copy, Debug)]
enum PropKind {
    Up(C64),
    Down(C64),
    Pair([[C64; 2]; 2]),
}

fn block_propagators(l: u32, tau: f64) -> Vec<BlockPropagator> {
    let lf = l as f64;
    let upper = C64::from_polar(1.0, -lf * tau);
    let lower = C64::from_polar(1.0, (lf + 1.0) * tau);
    let width = 2.0 * lf + 1.0;
    ls_blocks(l)
        .map(|b| {
            let kind = match b.entries {
                BlockEntries::Single(_) if b.two_mj > 0 => PropKind::Up(upper),
                BlockEntries::Single(_) => PropKind::Down(upper),
                BlockEntries::Pair(m) => {
                    // U = e^{−ilτ} P₊ + e^{i(l+1)τ} P₋ with
                    // P₊ = (B + (l+1)) / (2l+1), P₋ = (l − B) / (2l+1).
                    let mut u = [[C64::new(0.0, 0.0); 2]; 2];
                    for i in 0..2 {
                        for j in 0..2 {
                            let id = if i == j { 1.0 } else { 0.0 };
                            let p_plus = (m[i][j] + (lf + 1.0) * id) / width;
                            let p_minus = (lf * id - m[i][j]) / width;
                            u[i][j] = upper * p_plus + lower * p_minus;
                        }
                    }
                    PropKind::Pair(u)
                }
            };
            BlockPropagator { l, m_up: b.m_up(), kind }
        })
        .collect()
}

impl BlockPropagator {
    fn apply(&self, trunc: &Truncation, slab: &mut [C64]) {
        // positions inside a slab are those of n_r = 0
        let pos = |m: i32, s: Spin| trunc.position(0, self.l, m, s);
        match self.kind {
            PropKind::Up(u) => slab[pos(self.m_up, Spin::Up)] *= u,
            PropKind::Down(u) => slab[pos(self.m_up + 1, Spin::Down)] *= u,
            PropKind::Pair(u) => {
                let i = pos(self.m_up, Spin::Up);
                let j = pos(self.m_up + 1, Spin::Down);
                let (a, b) = (slab[i], slab[j]);
                slab[i] = u[0][0] * a + u[0][1] * b;
                slab[j] = u[1][0] * a + u[1][1] * b;
            }
        }
    }
}

/// Dense `exp(−i t (ω H₀ + κ l·σ))` by eigendecomposition of the real
/// symmetric Hamiltonian. Test oracle; rows and columns follow storage order.
pub fn brute_force_propagator(trunc: &Truncation, t: f64, params: &EvolutionParams) -> Result<DMatrix<C64>> {
    params.validate()?;
    let dim = trunc.dim();
    if dim > ORACLE_DIM_CAP {
        return Err(Error::DimensionCap { dim, cap: ORACLE_DIM_CAP });
    }
    let h = dense_hamiltonian(trunc, params);
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let phases = DVector::from_iterator(dim, eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -e * t)));
    let vt = v.transpose();
    Ok(&v * DMatrix::from_diagonal(&phases) * vt)
}

/// Real symmetric `ω H₀ + κ l·σ` in storage order, honoring freeze flags.
pub fn dense_hamiltonian(trunc: &Truncation, params: &EvolutionParams) -> DMatrix<f64> {
    let dim = trunc.dim();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    if !params.freeze_orbital {
        for (p, idx) in trunc.indices().enumerate() {
            h[(p, p)] += params.omega_ho * shell_energy(&idx);
        }
    }
    if !params.freeze_ls {
        for n_r in 0..=trunc.n_r_max {
            for l in 0..=trunc.l_max {
                for b in ls_blocks(l) {
                    let members: Vec<usize> = b
                        .members()
                        .into_iter()
                        .map(|(m, s)| trunc.index_of(&BasisIndex { n_r, l, m, spin: s }).expect("in box"))
                        .collect();
                    match b.entries {
                        BlockEntries::Single(v) => h[(members[0], members[0])] += params.kappa * v,
                        BlockEntries::Pair(m) => {
                            for i in 0..2 {
                                for j in 0..2 {
                                    h[(members[i], members[j])] += params.kappa * m[i][j];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    h
}

/// Multiplies a dense propagator into a state.
pub fn apply_dense(u: &DMatrix<C64>, state: &SpinorState) -> SpinorState {
    let v = DVector::from_column_slice(state.amplitudes());
    let w = u * v;
    SpinorState::from_amplitudes(*state.truncation(), w.iter().copied().collect()).expect("same dimension")
}
