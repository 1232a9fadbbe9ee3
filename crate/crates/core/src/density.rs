//! Probability density `|Ψ₊(r)|² + |Ψ₋(r)|²` on axis-aligned 3D grids, and
//! ring (torus) diagnostics for the linear-packet experiments.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::basis::special::{LegendreRecurrence, RadialRecurrence};
use crate::basis::Spin;
use crate::error::{Error, Result};
use crate::states::SpinorState;
use crate::C64;

pub const MAX_AXIS_SAMPLES: usize = 512;
/// Highest `l` the special-function recurrences are validated for.
pub const MAX_STABLE_L: u32 = 120;

/// Node-centred grid: `shape[a]` samples from `min[a]` to `max[a]` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: [f64; 3],
    pub max: [f64; 3],
    pub shape: [usize; 3],
}

impl GridSpec {
    pub fn new(min: [f64; 3], max: [f64; 3], shape: [usize; 3]) -> Result<Self> {
        for a in 0..3 {
            if shape[a] < 2 || shape[a] > MAX_AXIS_SAMPLES {
                return Err(Error::invalid(format!(
                    "grid axis {a} has {} samples (allowed 2..={MAX_AXIS_SAMPLES})",
                    shape[a]
                )));
            }
            if !(min[a].is_finite() && max[a].is_finite() && min[a] < max[a]) {
                return Err(Error::invalid(format!("grid axis {a} has empty extent")));
            }
        }
        Ok(GridSpec { min, max, shape })
    }

    /// Cube `[−h, h]³` with `n` samples per axis.
    pub fn cube(half_width: f64, n: usize) -> Result<Self> {
        GridSpec::new([-half_width; 3], [half_width; 3], [n; 3])
    }

    /// `n³` samples over `±(sqrt(2N) + 4)`: the classical turning radius plus four widths.
    pub fn for_mean(n_mean: f64, n: usize) -> Result<Self> {
        GridSpec::cube((2.0 * n_mean).sqrt() + 4.0, n)
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.max[axis] - self.min[axis]) / (self.shape[axis] - 1) as f64
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.min[axis] + i as f64 * self.spacing(axis)
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index with x fastest.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.shape[0] * (j + self.shape[1] * k)
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [self.coord(0, i), self.coord(1, j), self.coord(2, k)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.spec.index(i, j, k)]
    }

    /// Trapezoidal integral over the box.
    pub fn integral(&self) -> f64 {
        let [nx, ny, nz] = self.spec.shape;
        let w = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for k in 0..nz {
            for j in 0..ny {
                let wjk = w(j, ny) * w(k, nz);
                for i in 0..nx {
                    total += wjk * w(i, nx) * self.get(i, j, k);
                }
            }
        }
        total * self.spec.spacing(0) * self.spec.spacing(1) * self.spec.spacing(2)
    }

    /// Grid indices and value of the global maximum (first in storage order on ties).
    pub fn argmax(&self) -> ([usize; 3], f64) {
        let (mut best, mut val) = (0, f64::NEG_INFINITY);
        for (p, &v) in self.values.iter().enumerate() {
            if v > val {
                best = p;
                val = v;
            }
        }
        let [nx, ny, _] = self.spec.shape;
        ([best % nx, (best / nx) % ny, best / (nx * ny)], val)
    }

    pub fn max_abs_difference(&self, other: &DensityGrid) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Coefficients of one `(l, m)` channel: `[up, down]` amplitude per `n_r`.
struct Channel {
    l: u32,
    m: i32,
    coeffs: Vec<[C64; 2]>,
}

/// `Ψ_s(r) = Σ a_{n_r l m s} R_{n_r l}(r) Y_lm(θ, φ)`, squared and summed over spin.
pub fn evaluate_density(state: &SpinorState, spec: &GridSpec) -> Result<DensityGrid> {
    let spec = GridSpec::new(spec.min, spec.max, spec.shape)?;
    let channels = channels(state);
    if let Some(c) = channels.iter().find(|c| c.l > MAX_STABLE_L) {
        return Err(Error::invalid(format!("occupied l = {} exceeds {MAX_STABLE_L}", c.l)));
    }
    // per-l radial depth and per-|m| Legendre depth
    let mut radial_depth: BTreeMap<u32, usize> = BTreeMap::new();
    let mut legendre_depth: BTreeMap<u32, u32> = BTreeMap::new();
    for c in &channels {
        let d = radial_depth.entry(c.l).or_default();
        *d = (*d).max(c.coeffs.len());
        let e = legendre_depth.entry(c.m.unsigned_abs()).or_default();
        *e = (*e).max(c.l);
    }
    let ls: Vec<(u32, RadialRecurrence)> =
        radial_depth.iter().map(|(&l, &d)| (l, RadialRecurrence::new(l, d))).collect();
    let ms: Vec<(u32, u32, LegendreRecurrence)> =
        legendre_depth.into_iter().map(|(m, l_max)| (m, l_max, LegendreRecurrence::new(m, l_max))).collect();
    let l_slot = |l: u32| ls.iter().position(|e| e.0 == l).expect("registered");
    let m_slot = |m: u32| ms.iter().position(|e| e.0 == m).expect("registered");
    let plan: Vec<(usize, usize, &Channel)> =
        channels.iter().map(|c| (l_slot(c.l), m_slot(c.m.unsigned_abs()), c)).collect();

    let [nx, ny, _] = spec.shape;
    let mut values = vec![0.0; spec.len()];
    values.par_chunks_mut(nx * ny).enumerate().for_each(|(k, plane)| {
        let mut radial: Vec<Vec<f64>> = ls.iter().map(|e| vec![0.0; e.1.depth()]).collect();
        let mut legendre: Vec<Vec<f64>> = ms.iter().map(|e| vec![0.0; (e.1 - e.0) as usize + 1]).collect();
        let z = spec.coord(2, k);
        for j in 0..ny {
            let y = spec.coord(1, j);
            for i in 0..nx {
                let x = spec.coord(0, i);
                let rho2 = x * x + y * y;
                let r = (rho2 + z * z).sqrt();
                let (cos_t, sin_t) = if r > 0.0 { (z / r, rho2.sqrt() / r) } else { (1.0, 0.0) };
                let phi = y.atan2(x);
                for (buf, (_, rec)) in radial.iter_mut().zip(&ls) {
                    rec.fill(r, buf);
                }
                for (buf, (_, _, rec)) in legendre.iter_mut().zip(&ms) {
                    rec.fill(cos_t, sin_t, buf);
                }
                let mut psi = [C64::new(0.0, 0.0); 2];
                for &(ls_i, ms_i, ch) in &plan {
                    let ma = ch.m.unsigned_abs();
                    let mut p = legendre[ms_i][(ch.l - ma) as usize];
                    if ch.m < 0 && ma % 2 == 1 {
                        p = -p;
                    }
                    let ang = C64::from_polar(p, ch.m as f64 * phi);
                    let rad = &radial[ls_i];
                    for s in 0..2 {
                        let radial_sum: C64 = ch.coeffs.iter().zip(rad).map(|(c, &rv)| c[s] * rv).sum();
                        psi[s] += radial_sum * ang;
                    }
                }
                plane[i + nx * j] = psi[0].norm_sqr() + psi[1].norm_sqr();
            }
        }
    });
    Ok(DensityGrid { spec, values })
}

fn channels(state: &SpinorState) -> Vec<Channel> {
    let trunc = state.truncation();
    let mut out = Vec::new();
    for l in 0..=trunc.l_max {
        let li = l as i32;
        for m in -li..=li {
            let mut coeffs: Vec<[C64; 2]> = (0..=trunc.n_r_max)
                .map(|n| {
                    let a = state.amplitudes();
                    [a[trunc.position(n, l, m, Spin::Up)], a[trunc.position(n, l, m, Spin::Down)]]
                })
                .collect();
            while coeffs.last().is_some_and(|c| c[0].norm_sqr() + c[1].norm_sqr() == 0.0) {
                coeffs.pop();
            }
            if !coeffs.is_empty() {
                out.push(Channel { l, m, coeffs });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn unit(self) -> [f64; 3] {
        let mut v = [0.0; 3];
        v[self.index()] = 1.0;
        v
    }

    fn perpendicular(self) -> (usize, usize) {
        match self {
            Axis::X => (1, 2),
            Axis::Y => (0, 2),
            Axis::Z => (0, 1),
        }
    }
}

/// A local maximum of the density in the half-plane through the axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingPeak {
    /// Distance from the axis.
    pub radius: f64,
    /// Coordinate along the axis.
    pub height: f64,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusMetrics {
    pub axis: [f64; 3],
    pub ring_radius: f64,
    pub on_axis_max: f64,
    pub global_max: f64,
    /// Second, weaker ring if the half-plane shows one.
    pub secondary: Option<RingPeak>,
}

pub fn torus_metrics(field: &DensityGrid, axis: Axis) -> Result<TorusMetrics> {
    let spec = &field.spec;
    let (idx, global_max) = field.argmax();
    if !(global_max > 0.0) {
        return Err(Error::Degenerate("field has no positive value".into()));
    }
    let (pa, pb) = axis.perpendicular();
    let p = spec.point(idx[0], idx[1], idx[2]);
    let ring_radius = (p[pa] * p[pa] + p[pb] * p[pb]).sqrt();

    let (da, db) = (spec.spacing(pa), spec.spacing(pb));
    let mut on_axis_max = f64::NEG_INFINITY;
    let [nx, ny, nz] = spec.shape;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let q = spec.point(i, j, k);
                if q[pa].abs() <= da && q[pb].abs() <= db {
                    on_axis_max = on_axis_max.max(field.get(i, j, k));
                }
            }
        }
    }
    if on_axis_max == f64::NEG_INFINITY {
        return Err(Error::Degenerate("axis does not pass through the grid".into()));
    }
    let mut rings = half_plane_maxima(field, axis);
    rings.sort_by(|a, b| b.value.total_cmp(&a.value));
    Ok(TorusMetrics {
        axis: axis.unit(),
        ring_radius,
        on_axis_max,
        global_max,
        secondary: rings.get(1).copied(),
    })
}

/// Strict 8-neighbour maxima of the slice through the axis, on the
/// non-negative side of the first perpendicular direction.
/// Maxima weaker than this fraction of the global maximum are round-off.
const RING_FLOOR: f64 = 1e-6;

fn half_plane_maxima(field: &DensityGrid, axis: Axis) -> Vec<RingPeak> {
    let spec = &field.spec;
    let (pa, pb) = axis.perpendicular();
    let ax = axis.index();
    // slice index along pb nearest zero
    let slice = (0..spec.shape[pb])
        .min_by(|&a, &b| spec.coord(pb, a).abs().total_cmp(&spec.coord(pb, b).abs()))
        .unwrap_or(0);
    let at = |u: usize, v: usize| {
        let mut ijk = [0usize; 3];
        ijk[pa] = u;
        ijk[ax] = v;
        ijk[pb] = slice;
        field.get(ijk[0], ijk[1], ijk[2])
    };
    let (nu, nv) = (spec.shape[pa], spec.shape[ax]);
    let floor = RING_FLOOR * field.argmax().1;
    let mut out = Vec::new();
    for u in 1..nu.saturating_sub(1) {
        if spec.coord(pa, u) < 0.0 {
            continue;
        }
        for v in 1..nv.saturating_sub(1) {
            let c = at(u, v);
            let is_max = (-1i32..=1).all(|du| {
                (-1i32..=1).all(|dv| {
                    (du == 0 && dv == 0) || c > at((u as i32 + du) as usize, (v as i32 + dv) as usize)
                })
            });
            if is_max && c > floor {
                out.push(RingPeak { radius: spec.coord(pa, u).abs(), height: spec.coord(ax, v), value: c });
            }
        }
    }
    out
}
