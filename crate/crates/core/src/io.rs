//! File formats: state dumps, observable and autocorrelation CSVs, and the
//! `WPLAB1` volumetric raster.
//!
//! Every float in a text format is written with 17 significant digits so
//! that identical runs produce byte-identical files.

use std::io::{BufRead, Read, Write};

use crate::basis::{BasisIndex, Spin, Truncation};
use crate::density::{Axis, DensityGrid, GridSpec, TorusMetrics};
use crate::error::{Error, Result};
use crate::observables::SpinObservables;
use crate::rydberg::Peak;
use crate::states::SpinorState;
use crate::C64;

pub const RASTER_MAGIC: &str = "WPLAB1";
pub const STATE_MAGIC: &str = "#wplab-state";
pub const OBSERVABLES_HEADER: &str = "t,sx,sy,sz,lx,ly,lz,purity,norm,P";

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header `#wplab-state l_max=.. n_r_max=.. tail_tolerance=.. key=value..`,
/// then one `n_r l m spin re im` line per basis index.
pub fn write_state<W: Write>(mut w: W, state: &SpinorState) -> Result<()> {
    let t = state.truncation();
    write!(w, "{STATE_MAGIC} l_max={} n_r_max={} tail_tolerance={}", t.l_max, t.n_r_max, fmt17(t.tail_tolerance))?;
    for (k, v) in &state.labels {
        write!(w, " {}={}", sanitize(k), sanitize(v))?;
    }
    writeln!(w)?;
    for (idx, a) in t.indices().zip(state.amplitudes()) {
        writeln!(w, "{} {} {} {} {} {}", idx.n_r, idx.l, idx.m, idx.spin, fmt17(a.re), fmt17(a.im))?;
    }
    Ok(())
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_whitespace() || c == '=' { '_' } else { c }).collect()
}

pub fn read_state<R: BufRead>(r: R) -> Result<SpinorState> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty state file".into()))??;
    let mut fields = header.split_whitespace();
    if fields.next() != Some(STATE_MAGIC) {
        return Err(Error::Parse("missing state header".into()));
    }
    let (mut l_max, mut n_r_max, mut tol) = (None, None, None);
    let mut labels = Vec::new();
    for f in fields {
        let (k, v) = f.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field {f:?}")))?;
        match k {
            "l_max" => l_max = Some(parse::<u32>(v)?),
            "n_r_max" => n_r_max = Some(parse::<u32>(v)?),
            "tail_tolerance" => tol = Some(parse::<f64>(v)?),
            _ => labels.push((k.to_string(), v.to_string())),
        }
    }
    let missing = || Error::Parse("header lacks truncation fields".into());
    let trunc = Truncation::new(l_max.ok_or_else(missing)?, n_r_max.ok_or_else(missing)?, tol.ok_or_else(missing)?)?;
    let mut state = SpinorState::zeros(trunc);
    state.labels.extend(labels);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(Error::Parse(format!("expected 6 fields: {line:?}")));
        }
        let spin = match f[3] {
            "up" => Spin::Up,
            "down" => Spin::Down,
            s => return Err(Error::Parse(format!("bad spin {s:?}"))),
        };
        let idx = BasisIndex::new(parse(f[0])?, parse(f[1])?, parse(f[2])?, spin)?;
        state.set(&idx, C64::new(parse(f[4])?, parse(f[5])?))?;
    }
    Ok(state)
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("cannot parse {s:?}")))
}

/// Observables time series, header [`OBSERVABLES_HEADER`].
pub fn write_observables_csv<W: Write>(mut w: W, rows: &[(SpinObservables, f64)]) -> Result<()> {
    writeln!(w, "{OBSERVABLES_HEADER}")?;
    for (o, p) in rows {
        let cols = [o.time, o.s[0], o.s[1], o.s[2], o.l[0], o.l[1], o.l[2], o.purity, o.norm, *p];
        writeln!(w, "{}", cols.map(fmt17).join(","))?;
    }
    Ok(())
}

/// Two-column `t_in_Tcl,P` series.
pub fn write_autocorr_csv<W: Write>(mut w: W, t_cl: f64, times: &[f64], p: &[f64]) -> Result<()> {
    writeln!(w, "t_in_Tcl,P")?;
    for (t, v) in times.iter().zip(p) {
        writeln!(w, "{},{}", fmt17(t / t_cl), fmt17(*v))?;
    }
    Ok(())
}

pub fn write_peaks_csv<W: Write>(mut w: W, t_cl: f64, peaks: &[Peak]) -> Result<()> {
    writeln!(w, "t_in_Tcl,P")?;
    for pk in peaks {
        writeln!(w, "{},{}", fmt17(pk.time / t_cl), fmt17(pk.p))?;
    }
    Ok(())
}

pub fn write_torus_csv<W: Write>(mut w: W, rows: &[(f64, TorusMetrics)]) -> Result<()> {
    writeln!(w, "t,ring_radius,on_axis_max,global_max,secondary_radius,secondary_height,secondary_value")?;
    for (t, m) in rows {
        let sec = match m.secondary {
            Some(s) => format!("{},{},{}", fmt17(s.radius), fmt17(s.height), fmt17(s.value)),
            None => ",,".into(),
        };
        writeln!(w, "{},{},{},{},{sec}", fmt17(*t), fmt17(m.ring_radius), fmt17(m.on_axis_max), fmt17(m.global_max))?;
    }
    Ok(())
}

/// `WPLAB1 nx ny nz xmin xmax ymin ymax zmin zmax` then little-endian f32
/// values with x fastest.
pub fn write_raster<W: Write>(mut w: W, grid: &DensityGrid) -> Result<()> {
    let s = &grid.spec;
    writeln!(
        w,
        "{RASTER_MAGIC} {} {} {} {} {} {} {} {} {}",
        s.shape[0], s.shape[1], s.shape[2], s.min[0], s.max[0], s.min[1], s.max[1], s.min[2], s.max[2]
    )?;
    let mut buf = Vec::with_capacity(4 * grid.values.len());
    for v in &grid.values {
        buf.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_raster<R: Read>(mut r: R) -> Result<DensityGrid> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let nl = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| Error::Parse("raster header missing".into()))?;
    let header = std::str::from_utf8(&bytes[..nl]).map_err(|_| Error::Parse("raster header not ASCII".into()))?;
    let f: Vec<&str> = header.split_whitespace().collect();
    if f.len() != 10 || f[0] != RASTER_MAGIC {
        return Err(Error::Parse(format!("bad raster header {header:?}")));
    }
    let shape = [parse(f[1])?, parse(f[2])?, parse(f[3])?];
    let min = [parse(f[4])?, parse(f[6])?, parse(f[8])?];
    let max = [parse(f[5])?, parse(f[7])?, parse(f[9])?];
    let spec = GridSpec::new(min, max, shape)?;
    let body = &bytes[nl + 1..];
    if body.len() != 4 * spec.len() {
        return Err(Error::Parse(format!("raster body has {} bytes, expected {}", body.len(), 4 * spec.len())));
    }
    let values = body.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64).collect();
    Ok(DensityGrid { spec, values })
}

/// One grid plane perpendicular to `normal` at sample `index`, as `x,y,z,value` rows.
pub fn write_slice_csv<W: Write>(mut w: W, grid: &DensityGrid, normal: Axis, index: usize) -> Result<()> {
    let s = &grid.spec;
    let a = normal.index();
    if index >= s.shape[a] {
        return Err(Error::invalid(format!("slice {index} outside axis of {} samples", s.shape[a])));
    }
    writeln!(w, "x,y,z,value")?;
    for k in 0..s.shape[2] {
        for j in 0..s.shape[1] {
            for i in 0..s.shape[0] {
                if [i, j, k][a] != index {
                    continue;
                }
                let p = s.point(i, j, k);
                writeln!(w, "{},{},{},{}", fmt17(p[0]), fmt17(p[1]), fmt17(p[2]), fmt17(grid.get(i, j, k)))?;
            }
        }
    }
    Ok(())
}
