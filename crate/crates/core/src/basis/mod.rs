//! Truncated spherical-oscillator ⊗ spin-1/2 basis and the `l·σ` block
//! structure.
//!
//! Amplitudes are stored densely. The flat position of `|n_r l m s⟩` is
//! `((n_r·(l_max+1)² + l² + l + m)·2 + s)`, so every `n_r` owns one
//! contiguous slab and the spin index runs fastest.

pub mod special;

use std::fmt;

use crate::error::{Error, Result};

pub use special::{radial_wavefunction, spherical_harmonic};

/// Eigenstates of `s_z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    /// Eigenvalue of `σ_z`.
    pub fn sign(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "up",
            Spin::Down => "down",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub n_r: u32,
    pub l: u32,
    pub m: i32,
    pub spin: Spin,
}

impl BasisIndex {
    pub fn new(n_r: u32, l: u32, m: i32, spin: Spin) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::invalid(format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
        }
        Ok(BasisIndex { n_r, l, m, spin })
    }

    /// Oscillator shell `2 n_r + l`.
    pub fn shell(&self) -> u32 {
        2 * self.n_r + self.l
    }
}

/// Oscillator energy `2 n_r + l + 3/2` in units of `ħω`.
pub fn shell_energy(idx: &BasisIndex) -> f64 {
    idx.shell() as f64 + 1.5
}

/// Eigenvalue `2l + 1` of `Ω = sqrt(1 + 4 l²)` on the `l` subspace, with
/// `l²` read as the squared angular-momentum operator.
pub fn omega_eigen(l: u32) -> u32 {
    2 * l + 1
}

/// Box truncation `n_r ≤ n_r_max`, `l ≤ l_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub l_max: u32,
    pub n_r_max: u32,
    pub tail_tolerance: f64,
}

impl Truncation {
    pub fn new(l_max: u32, n_r_max: u32, tail_tolerance: f64) -> Result<Self> {
        if !(tail_tolerance.is_finite() && tail_tolerance >= 0.0) {
            return Err(Error::invalid("tail tolerance must be finite and non-negative"));
        }
        Ok(Truncation { l_max, n_r_max, tail_tolerance })
    }

    /// Default box for a packet with mean shell `n_mean`: it holds the
    /// Poisson shell distribution to well beyond `1e-8`.
    pub fn for_mean(n_mean: f64) -> Self {
        let s = n_mean.max(0.0).sqrt();
        Truncation {
            l_max: (n_mean + 8.0 * s).ceil() as u32,
            n_r_max: (n_mean / 2.0 + 6.0 * s).ceil() as u32,
            tail_tolerance: 1e-8,
        }
    }

    /// Number of `(l, m)` pairs, `(l_max + 1)²`.
    pub fn lm_count(&self) -> usize {
        let l = self.l_max as usize + 1;
        l * l
    }

    /// Amplitudes per radial slab.
    pub fn slab_len(&self) -> usize {
        2 * self.lm_count()
    }

    pub fn dim(&self) -> usize {
        (self.n_r_max as usize + 1) * self.slab_len()
    }

    pub fn contains(&self, idx: &BasisIndex) -> bool {
        idx.n_r <= self.n_r_max && idx.l <= self.l_max && idx.m.unsigned_abs() <= idx.l
    }

    /// Flat position of an index known to lie in the box.
    #[inline]
    pub fn position(&self, n_r: u32, l: u32, m: i32, spin: Spin) -> usize {
        let lm = (l * l + l) as i64 + m as i64;
        (n_r as usize * self.lm_count() + lm as usize) * 2 + spin.offset()
    }

    pub fn index_of(&self, idx: &BasisIndex) -> Option<usize> {
        self.contains(idx).then(|| self.position(idx.n_r, idx.l, idx.m, idx.spin))
    }

    /// Inverse of [`Truncation::position`].
    pub fn index_at(&self, pos: usize) -> BasisIndex {
        let spin = if pos.is_multiple_of(2) { Spin::Up } else { Spin::Down };
        let rest = pos / 2;
        let n_r = (rest / self.lm_count()) as u32;
        let lm = (rest % self.lm_count()) as u32;
        let l = (lm as f64).sqrt() as u32;
        let l = if (l + 1) * (l + 1) <= lm { l + 1 } else { l };
        let m = lm as i32 - (l * l + l) as i32;
        BasisIndex { n_r, l, m, spin }
    }

    /// All indices in storage order.
    pub fn indices(&self) -> impl Iterator<Item = BasisIndex> + '_ {
        (0..self.dim()).map(move |p| self.index_at(p))
    }
}

/// Matrix of `l·σ` inside one `(l, m_j)` sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockEntries {
    /// Edge sector `|m_j| = l + 1/2`: a single state with eigenvalue `l`.
    Single(f64),
    /// Interior sector on `{|l, m_j−1/2, +⟩, |l, m_j+1/2, −⟩}`.
    Pair([[f64; 2]; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsBlock {
    pub l: u32,
    /// Twice the total projection `m_j`, always odd.
    pub two_mj: i32,
    pub entries: BlockEntries,
}

impl LsBlock {
    pub fn m_j(&self) -> f64 {
        self.two_mj as f64 / 2.0
    }

    /// Orbital projection of the spin-up member, `m_j − 1/2`.
    pub fn m_up(&self) -> i32 {
        (self.two_mj - 1) / 2
    }

    /// Basis members in block order.
    pub fn members(&self) -> Vec<(i32, Spin)> {
        let m = self.m_up();
        match self.entries {
            BlockEntries::Pair(_) => vec![(m, Spin::Up), (m + 1, Spin::Down)],
            BlockEntries::Single(_) if self.two_mj > 0 => vec![(m, Spin::Up)],
            BlockEntries::Single(_) => vec![(m + 1, Spin::Down)],
        }
    }

    /// Eigenvalues from the 2×2 characteristic polynomial, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.entries {
            BlockEntries::Single(v) => vec![v],
            BlockEntries::Pair([[a, b], [_, d]]) => {
                let mean = 0.5 * (a + d);
                let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
                vec![mean - disc, mean + disc]
            }
        }
    }
}

/// `l·σ` in the sector `(l, m_j)`, with `m_j = two_mj / 2`.
pub fn ls_block(l: u32, two_mj: i32) -> Result<LsBlock> {
    if two_mj % 2 == 0 {
        return Err(Error::invalid("m_j must be half-integer"));
    }
    let edge = 2 * l as i32 + 1;
    if two_mj.abs() > edge {
        return Err(Error::invalid(format!("|m_j| = {}/2 exceeds l + 1/2 for l = {l}", two_mj.abs())));
    }
    let entries = if two_mj.abs() == edge {
        BlockEntries::Single(l as f64)
    } else {
        let m = ((two_mj - 1) / 2) as f64;
        let lf = l as f64;
        let off = ((lf - m) * (lf + m + 1.0)).sqrt();
        BlockEntries::Pair([[m, off], [off, -(m + 1.0)]])
    };
    Ok(LsBlock { l, two_mj, entries })
}

/// All sectors of a given `l`, ordered by `m_j`.
pub fn ls_blocks(l: u32) -> impl Iterator<Item = LsBlock> {
    let edge = 2 * l as i32 + 1;
    (-edge..=edge).step_by(2).map(move |tm| ls_block(l, tm).expect("in range"))
}
