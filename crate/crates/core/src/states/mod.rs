//! Initial wave packets on the truncated basis.

mod projection;

use std::collections::BTreeMap;

use crate::basis::special::ln_factorial;
use crate::basis::{BasisIndex, Spin, Truncation};
use crate::error::{Error, Result};
use crate::C64;

pub use projection::project_gaussian;

/// Complex amplitudes over a truncated oscillator ⊗ spin basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorState {
    truncation: Truncation,
    amplitudes: Vec<C64>,
    pub labels: BTreeMap<String, String>,
}

impl SpinorState {
    pub fn zeros(truncation: Truncation) -> Self {
        SpinorState {
            truncation,
            amplitudes: vec![C64::new(0.0, 0.0); truncation.dim()],
            labels: BTreeMap::new(),
        }
    }

    pub fn from_amplitudes(truncation: Truncation, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != truncation.dim() {
            return Err(Error::invalid(format!(
                "expected {} amplitudes, got {}",
                truncation.dim(),
                amplitudes.len()
            )));
        }
        Ok(SpinorState { truncation, amplitudes, labels: BTreeMap::new() })
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn get(&self, idx: &BasisIndex) -> C64 {
        self.truncation.index_of(idx).map_or(C64::new(0.0, 0.0), |p| self.amplitudes[p])
    }

    pub fn set(&mut self, idx: &BasisIndex, value: C64) -> Result<()> {
        let p = self
            .truncation
            .index_of(idx)
            .ok_or_else(|| Error::invalid(format!("{idx:?} lies outside the truncation")))?;
        self.amplitudes[p] = value;
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.amplitudes.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn with_label(mut self, key: &str, value: impl ToString) -> Self {
        self.labels.insert(key.to_string(), value.to_string());
        self
    }

    /// Iterator over `(index, amplitude)` pairs with non-zero amplitude.
    pub fn nonzero(&self) -> impl Iterator<Item = (BasisIndex, C64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(p, a)| (self.truncation.index_at(p), *a))
    }
}

/// Unit vector giving a spin orientation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinDirection([f64; 3]);

impl SpinDirection {
    pub const X: SpinDirection = SpinDirection([1.0, 0.0, 0.0]);
    pub const Y: SpinDirection = SpinDirection([0.0, 1.0, 0.0]);
    pub const Z: SpinDirection = SpinDirection([0.0, 0.0, 1.0]);

    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("direction {v:?} is not a unit vector")));
        }
        Ok(SpinDirection(v))
    }

    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(SpinDirection([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn vector(&self) -> [f64; 3] {
        self.0
    }

    /// The `+1/2` eigenspinor `(χ_up, χ_down)` along this direction.
    pub fn spinor(&self) -> (C64, C64) {
        let [x, y, z] = self.0;
        let one_plus_z = 1.0 + z;
        if one_plus_z < 1e-300 {
            return (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        }
        let up = (0.5 * one_plus_z).sqrt();
        let down = C64::new(x, y) / (2.0 * one_plus_z).sqrt();
        (C64::new(up, 0.0), down)
    }
}

/// Circular coherent state of the spherical oscillator with mean shell `n_mean`.
///
/// Amplitudes `(−1)^l sqrt(e^{−N} N^l / l!)` on `|0, l, l⟩`, stored on the
/// spin-up component and renormalized over the retained `l`. The alternating sign is what the Condon–Shortley
/// phase of `Y_ll` needs for the packet to sit at `(+√N, 0, 0)` moving along `+y`.
pub fn circular_coherent(n_mean: f64, trunc: &Truncation) -> Result<SpinorState> {
    if !(n_mean.is_finite() && n_mean > 0.0) {
        return Err(Error::invalid("N must be positive"));
    }
    let mut state = SpinorState::zeros(*trunc);
    let ln_n = n_mean.ln();
    let mut kept = 0.0;
    for l in 0..=trunc.l_max {
        let ln_w = -n_mean + l as f64 * ln_n - ln_factorial(l);
        let a = (0.5 * ln_w).exp();
        let a = if l % 2 == 1 { -a } else { a };
        kept += a * a;
        let p = trunc.position(0, l, l as i32, Spin::Up);
        state.amplitudes[p] = C64::new(a, 0.0);
    }
    check_tail(1.0 - kept, trunc)?;
    state.normalize();
    Ok(state.with_label("kind", "circular").with_label("N", n_mean))
}

/// Product of a spatial state (held on the spin-up slots) with the spin
/// eigenstate along `dir`.
pub fn attach_spin(spatial: &SpinorState, dir: SpinDirection) -> Result<SpinorState> {
    if spatial.amplitudes.chunks_exact(2).any(|c| c[1] != C64::new(0.0, 0.0)) {
        return Err(Error::invalid("spatial state already carries spin-down amplitude"));
    }
    let (up, down) = dir.spinor();
    let mut out = spatial.clone();
    for c in out.amplitudes.chunks_exact_mut(2) {
        let a = c[0];
        c[0] = a * up;
        c[1] = a * down;
    }
    let [x, y, z] = dir.vector();
    out.labels.insert("spin".into(), format!("{x},{y},{z}"));
    Ok(out)
}

/// Gaussian at rest displaced by `sqrt(2N)` along `axis`.
pub fn linear_gaussian(n_mean: f64, axis: SpinDirection, trunc: &Truncation) -> Result<SpinorState> {
    if !(n_mean.is_finite() && n_mean > 0.0) {
        return Err(Error::invalid("N must be positive"));
    }
    let d = (2.0 * n_mean).sqrt();
    let [ax, ay, az] = axis.vector();
    let state = general_gaussian([d * ax, d * ay, d * az], [0.0; 3], trunc)?;
    Ok(state.with_label("kind", "linear").with_label("N", n_mean))
}

/// Unit-width Gaussian `∝ exp(−(r−x0)²/2 + i p0·r)`, projected numerically
/// onto the basis and renormalized over the retained indices.
pub fn general_gaussian(x0: [f64; 3], p0: [f64; 3], trunc: &Truncation) -> Result<SpinorState> {
    if x0.iter().chain(p0.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("x0 and p0 must be finite"));
    }
    let mut state = SpinorState::zeros(*trunc);
    project_gaussian(x0, p0, trunc, &mut state.amplitudes);
    let kept = state.norm_sqr();
    check_tail(1.0 - kept, trunc)?;
    state.normalize();
    Ok(state
        .with_label("kind", "gaussian")
        .with_label("x0", format!("{},{},{}", x0[0], x0[1], x0[2]))
        .with_label("p0", format!("{},{},{}", p0[0], p0[1], p0[2])))
}

/// Rotates the orbital part about z: `e^{−iα l_z}`, spin untouched.
pub fn rotate_orbital_z(state: &SpinorState, angle: f64) -> SpinorState {
    let trunc = *state.truncation();
    let mut out = state.clone();
    for (p, a) in out.amplitudes.iter_mut().enumerate() {
        let m = trunc.index_at(p).m;
        *a *= C64::from_polar(1.0, -(m as f64) * angle);
    }
    out
}

fn check_tail(discarded: f64, trunc: &Truncation) -> Result<()> {
    if discarded > trunc.tail_tolerance {
        return Err(Error::Truncation { discarded, tolerance: trunc.tail_tolerance });
    }
    Ok(())
}
