//! The three experiments end to end: configuration, run, files on disk.
//!
//! Every runner validates its configuration before computing anything and
//! writes deterministic output (17 significant digits, fixed ordering).

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::density::{evaluate_density, torus_metrics, Axis, GridSpec, MAX_AXIS_SAMPLES};
use crate::error::{Error, Result};
use crate::evolution::{evolve, EvolutionParams};
use crate::io::{fmt17, write_autocorr_csv, write_observables_csv, write_peaks_csv, write_raster, write_torus_csv};
use crate::observables::time_series;
use crate::rydberg::{
    autocorrelation_taylor, count_lobes, find_revival_peaks, gaussian_weights, orbital_angular_density, phi_grid,
    sample_autocorrelation, Peak, RydbergPacket, DEFAULT_PEAK_THRESHOLD,
};
use crate::states::{attach_spin, circular_coherent, linear_gaussian};
use crate::{SpinDirection, TimeScales, TorusMetrics, Truncation};

/// Period of `U_ls` in scaled time `τ = κt`.
pub const T_LS: f64 = 2.0 * PI;

/// Time unit accepted as a suffix on time values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeUnit {
    Absolute,
    Tcl,
    Trev,
    Tsr,
    Tls,
}

/// A time given as `value` multiples of `unit`, e.g. `20.5Tcl`, `1/3Trev`, `0.5Tls`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSpec {
    pub value: f64,
    pub unit: TimeUnit,
}

impl TimeSpec {
    pub fn absolute(value: f64) -> Self {
        TimeSpec { value, unit: TimeUnit::Absolute }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (number, unit) = [("Tcl", TimeUnit::Tcl), ("Trev", TimeUnit::Trev), ("Tsr", TimeUnit::Tsr), ("Tls", TimeUnit::Tls)]
            .into_iter()
            .find_map(|(suffix, unit)| s.strip_suffix(suffix).map(|n| (n, unit)))
            .unwrap_or((s, TimeUnit::Absolute));
        let number = number.trim();
        let value = match number.split_once('/') {
            _ if number.is_empty() => 1.0,
            Some((p, q)) => parse_f64(p)? / parse_f64(q)?,
            None => parse_f64(number)?,
        };
        if !value.is_finite() {
            return Err(Error::Parse(format!("time {s:?} is not finite")));
        }
        Ok(TimeSpec { value, unit })
    }

    /// Absolute time on the Rydberg clock.
    pub fn rydberg(&self, scales: &TimeScales) -> Result<f64> {
        Ok(self.value
            * match self.unit {
                TimeUnit::Absolute => 1.0,
                TimeUnit::Tcl => scales.t_cl,
                TimeUnit::Trev => scales.t_rev,
                TimeUnit::Tsr => scales.t_sr,
                TimeUnit::Tls => return Err(Error::invalid("Tls is not a Rydberg time unit")),
            })
    }

    /// Absolute time for the oscillator, where `T_ls = 2π/κ`.
    pub fn oscillator(&self, kappa: f64) -> Result<f64> {
        match self.unit {
            TimeUnit::Absolute => Ok(self.value),
            TimeUnit::Tls => Ok(self.value * T_LS / kappa),
            _ => Err(Error::invalid("Tcl, Trev and Tsr are Rydberg time units")),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("cannot parse {s:?} as a number")))
}

/// Parses `x`, `y`, `z` (optionally signed) or a comma-separated vector.
pub fn parse_direction(s: &str) -> Result<SpinDirection> {
    let s = s.trim();
    let (sign, name) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let v = match name {
        "x" => [sign, 0.0, 0.0],
        "y" => [0.0, sign, 0.0],
        "z" => [0.0, 0.0, sign],
        _ => {
            let parts: Vec<f64> = s.split(',').map(parse_f64).collect::<Result<_>>()?;
            <[f64; 3]>::try_from(parts).map_err(|_| Error::Parse(format!("direction {s:?} needs three components")))?
        }
    };
    SpinDirection::normalized(v)
}

pub fn parse_axis(s: &str) -> Result<Axis> {
    match s.trim() {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        "z" => Ok(Axis::Z),
        other => Err(Error::invalid(format!("axis must be x, y or z, not {other:?}"))),
    }
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let file = File::create(&path)?;
    Ok((path, BufWriter::new(file)))
}

/// Rydberg packet parameters shared by both Rydberg experiments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketConfig {
    pub n_mean: f64,
    pub sigma: f64,
    pub n_min: u32,
    pub n_max: u32,
}

impl Default for PacketConfig {
    fn default() -> Self {
        PacketConfig { n_mean: 60.0, sigma: 1.5, n_min: 50, n_max: 70 }
    }
}

impl PacketConfig {
    pub fn packet(&self) -> Result<RydbergPacket> {
        gaussian_weights(self.n_mean, self.sigma, self.n_min, self.n_max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutocorrConfig {
    pub packet: PacketConfig,
    pub t_max: TimeSpec,
    pub dt: TimeSpec,
    pub threshold: f64,
    /// Also write the Taylor-phase curve of this order.
    pub taylor_order: Option<u32>,
}

impl Default for AutocorrConfig {
    fn default() -> Self {
        AutocorrConfig {
            packet: PacketConfig::default(),
            t_max: TimeSpec { value: 50.0, unit: TimeUnit::Tcl },
            dt: TimeSpec { value: 0.01, unit: TimeUnit::Tcl },
            threshold: DEFAULT_PEAK_THRESHOLD,
            taylor_order: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AutocorrOutput {
    pub scales: TimeScales,
    pub rows: usize,
    pub peaks: Vec<Peak>,
    pub files: Vec<PathBuf>,
}

/// Writes `autocorr.csv` and `peaks.csv` (and `autocorr_taylor.csv` when asked).
pub fn run_rydberg_autocorr(cfg: &AutocorrConfig, out_dir: &Path) -> Result<AutocorrOutput> {
    let packet = cfg.packet.packet()?;
    let scales = packet.time_scales();
    let t_max = cfg.t_max.rydberg(&scales)?;
    let dt = cfg.dt.rydberg(&scales)?;
    if !(t_max > 0.0) {
        return Err(Error::invalid("t-max must be positive"));
    }
    if let Some(order) = cfg.taylor_order {
        autocorrelation_taylor(&packet, 0.0, order)?;
    }
    let peaks = find_revival_peaks(&packet, 0.0, t_max, dt, cfg.threshold)?;
    let count = ((t_max / dt) + 1e-9).floor() as usize + 1;
    let times: Vec<f64> = (0..count).map(|k| k as f64 * dt).collect();
    let p = sample_autocorrelation(&packet, &times);

    let mut files = Vec::new();
    let (path, mut w) = create(out_dir, "autocorr.csv")?;
    write_autocorr_csv(&mut w, scales.t_cl, &times, &p)?;
    w.flush()?;
    files.push(path);
    if let Some(order) = cfg.taylor_order {
        let taylor: Vec<f64> = times.iter().map(|&t| autocorrelation_taylor(&packet, t, order)).collect::<Result<_>>()?;
        let (path, mut w) = create(out_dir, "autocorr_taylor.csv")?;
        write_autocorr_csv(&mut w, scales.t_cl, &times, &taylor)?;
        w.flush()?;
        files.push(path);
    }
    let (path, mut w) = create(out_dir, "peaks.csv")?;
    write_peaks_csv(&mut w, scales.t_cl, &peaks)?;
    w.flush()?;
    files.push(path);
    Ok(AutocorrOutput { scales, rows: count, peaks, files })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngularConfig {
    pub packet: PacketConfig,
    pub times: Vec<TimeSpec>,
    pub phi_samples: usize,
}

impl Default for AngularConfig {
    fn default() -> Self {
        let frac = |q: f64| TimeSpec { value: 1.0 / q, unit: TimeUnit::Trev };
        AngularConfig { packet: PacketConfig::default(), times: vec![frac(4.0), frac(3.0), frac(2.0)], phi_samples: 4096 }
    }
}

#[derive(Clone, Debug)]
pub struct AngularOutput {
    /// `(t, lobe count)` per requested time.
    pub lobes: Vec<(f64, usize)>,
    pub files: Vec<PathBuf>,
}

/// Writes `angular.csv` (`t_in_Tcl,phi,density`) and `lobes.csv` (`t_in_Tcl,lobes`).
pub fn run_rydberg_angular(cfg: &AngularConfig, out_dir: &Path) -> Result<AngularOutput> {
    let packet = cfg.packet.packet()?;
    let scales = packet.time_scales();
    if cfg.phi_samples < 8 {
        return Err(Error::invalid("need at least 8 angle samples"));
    }
    if cfg.times.is_empty() {
        return Err(Error::invalid("no times requested"));
    }
    let times: Vec<f64> = cfg.times.iter().map(|t| t.rydberg(&scales)).collect::<Result<_>>()?;
    let phi = phi_grid(cfg.phi_samples);

    let (density_path, mut dw) = create(out_dir, "angular.csv")?;
    writeln!(dw, "t_in_Tcl,phi,density")?;
    let mut lobes = Vec::new();
    for &t in &times {
        let d = orbital_angular_density(&packet, t, &phi);
        for (p, v) in phi.iter().zip(&d) {
            writeln!(dw, "{},{},{}", fmt17(t / scales.t_cl), fmt17(*p), fmt17(*v))?;
        }
        lobes.push((t, count_lobes(&d)));
    }
    dw.flush()?;
    let (lobes_path, mut lw) = create(out_dir, "lobes.csv")?;
    writeln!(lw, "t_in_Tcl,lobes")?;
    for (t, n) in &lobes {
        writeln!(lw, "{},{n}", fmt17(t / scales.t_cl))?;
    }
    lw.flush()?;
    Ok(AngularOutput { lobes, files: vec![density_path, lobes_path] })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PendulumConfig {
    pub n_mean: f64,
    pub spin: SpinDirection,
    pub params: EvolutionParams,
    pub t_max: TimeSpec,
    pub dt: TimeSpec,
}

impl Default for PendulumConfig {
    fn default() -> Self {
        PendulumConfig {
            n_mean: 18.0,
            spin: SpinDirection::X,
            params: EvolutionParams { freeze_orbital: true, ..EvolutionParams::default() },
            t_max: TimeSpec { value: 2.0, unit: TimeUnit::Tls },
            dt: TimeSpec { value: 1.0 / 400.0, unit: TimeUnit::Tls },
        }
    }
}

/// Writes `pendulum.csv` with the observables time series of a circular packet.
pub fn run_pendulum(cfg: &PendulumConfig, out_dir: &Path) -> Result<(Vec<(crate::SpinObservables, f64)>, PathBuf)> {
    cfg.params.validate()?;
    let kappa = cfg.params.kappa;
    let t_max = cfg.t_max.oscillator(kappa)?;
    let dt = cfg.dt.oscillator(kappa)?;
    if !(t_max >= 0.0 && dt > 0.0) {
        return Err(Error::invalid("need t-max >= 0 and dt > 0"));
    }
    let trunc = Truncation::for_mean(cfg.n_mean);
    let psi = attach_spin(&circular_coherent(cfg.n_mean, &trunc)?, cfg.spin)?;
    let count = ((t_max / dt) + 1e-9).floor() as usize + 1;
    let times: Vec<f64> = (0..count).map(|k| k as f64 * dt).collect();
    let rows = time_series(&psi, &times, &cfg.params)?;
    let (path, mut w) = create(out_dir, "pendulum.csv")?;
    write_observables_csv(&mut w, &rows)?;
    w.flush()?;
    Ok((rows, path))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VortexConfig {
    pub n_mean: f64,
    pub axis: Axis,
    pub spin: SpinDirection,
    pub params: EvolutionParams,
    pub grid: usize,
    pub times: Vec<TimeSpec>,
}

impl Default for VortexConfig {
    fn default() -> Self {
        VortexConfig {
            n_mean: 8.0,
            axis: Axis::Z,
            spin: SpinDirection::Z,
            params: EvolutionParams { freeze_orbital: true, ..EvolutionParams::default() },
            grid: 96,
            times: [0.0, 0.125, 0.25, 0.375, 0.5].map(|v| TimeSpec { value: v, unit: TimeUnit::Tls }).to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VortexOutput {
    pub metrics: Vec<(f64, TorusMetrics)>,
    pub files: Vec<PathBuf>,
}

/// Writes one `density_NNN.raster` per time plus `torus.csv`.
pub fn run_vortex(cfg: &VortexConfig, out_dir: &Path) -> Result<VortexOutput> {
    cfg.params.validate()?;
    if cfg.grid < 2 || cfg.grid > MAX_AXIS_SAMPLES {
        return Err(Error::invalid(format!("grid must be in 2..={MAX_AXIS_SAMPLES}, got {}", cfg.grid)));
    }
    if cfg.times.is_empty() {
        return Err(Error::invalid("no times requested"));
    }
    let times: Vec<f64> = cfg.times.iter().map(|t| t.oscillator(cfg.params.kappa)).collect::<Result<_>>()?;
    let spec = GridSpec::for_mean(cfg.n_mean, cfg.grid)?;
    let trunc = Truncation::for_mean(cfg.n_mean);
    let axis = SpinDirection::new(cfg.axis.unit())?;
    let psi = attach_spin(&linear_gaussian(cfg.n_mean, axis, &trunc)?, cfg.spin)?;

    let mut files = Vec::new();
    let mut metrics = Vec::new();
    for (k, &t) in times.iter().enumerate() {
        let field = evaluate_density(&evolve(&psi, t, &cfg.params)?, &spec)?;
        let (path, mut w) = create(out_dir, &format!("density_{k:03}.raster"))?;
        write_raster(&mut w, &field)?;
        w.flush()?;
        files.push(path);
        metrics.push((t, torus_metrics(&field, cfg.axis)?));
    }
    let (path, mut w) = create(out_dir, "torus.csv")?;
    write_torus_csv(&mut w, &metrics)?;
    w.flush()?;
    files.push(path);
    Ok(VortexOutput { metrics, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_specs() {
        assert_eq!(TimeSpec::parse("20.5Tcl").unwrap(), TimeSpec { value: 20.5, unit: TimeUnit::Tcl });
        assert_eq!(TimeSpec::parse("Trev").unwrap(), TimeSpec { value: 1.0, unit: TimeUnit::Trev });
        assert_eq!(TimeSpec::parse("1/4 Tls").unwrap(), TimeSpec { value: 0.25, unit: TimeUnit::Tls });
        assert_eq!(TimeSpec::parse("3.5").unwrap(), TimeSpec::absolute(3.5));
        assert!(TimeSpec::parse("fast").is_err());
        assert!(TimeSpec::parse("1/0Tcl").is_err());

        let scales = crate::rydberg::time_scales(60.0);
        assert_eq!(TimeSpec::parse("2Tsr").unwrap().rydberg(&scales).unwrap(), 2.0 * scales.t_sr);
        assert!(TimeSpec::parse("1Tls").unwrap().rydberg(&scales).is_err());
        assert!((TimeSpec::parse("0.5Tls").unwrap().oscillator(2.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(TimeSpec::parse("1Tcl").unwrap().oscillator(1.0).is_err());
    }

    #[test]
    fn directions_and_axes() {
        assert_eq!(parse_direction("x").unwrap().vector(), [1.0, 0.0, 0.0]);
        assert_eq!(parse_direction("-z").unwrap().vector(), [0.0, 0.0, -1.0]);
        let v = parse_direction("1,1,0").unwrap().vector();
        assert!((v[0] - v[1]).abs() < 1e-15 && (v[0] * v[0] * 2.0 - 1.0).abs() < 1e-15);
        assert!(parse_direction("0,0,0").is_err());
        assert!(parse_direction("1,2").is_err());
        assert_eq!(parse_axis("y").unwrap(), Axis::Y);
        assert!(parse_axis("w").is_err());
    }
}
