//! Command-line front end for the three experiments.
//!
//! Every flag may also come from a TOML file given with `--config`, using the
//! flag name as key (`n-mean = 60`, `times = ["0", "0.5Tls"]`); flags given on
//! the command line win. Exit codes: 0 success, 2 invalid input, 3 I/O failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use wplab::experiments::{
    parse_axis, parse_direction, run_pendulum, run_rydberg_angular, run_rydberg_autocorr, run_vortex,
    AngularConfig, AutocorrConfig, PacketConfig, PendulumConfig, TimeSpec, VortexConfig,
};
use wplab::Error;

#[derive(Parser)]
#[command(name = "wplab", version, about = "Wave-packet revival and spin-orbit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recurrence probability P(t) of a Rydberg packet and its peaks.
    RydbergAutocorr(Flags),
    /// Along-orbit density of a Rydberg packet at fractional revivals.
    RydbergAngular(Flags),
    /// Spin-orbit pendulum of a circular oscillator packet.
    Pendulum(Flags),
    /// Vortex-ring densities of a linear oscillator packet.
    Vortex(Flags),
}

#[derive(Args, Default, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Flags {
    /// TOML file with default values for any of the flags below.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Time step, optionally with a unit suffix (Tcl, Trev, Tsr, Tls).
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
    /// Accepted for reproducible manifests; every computation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_mean: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    /// x, y, z, -x, ... or a vector "a,b,c".
    #[arg(long)]
    spin_axis: Option<String>,
    /// Displacement axis of the linear packet (x, y or z).
    #[arg(long)]
    axis: Option<String>,
    #[arg(long)]
    freeze_orbital: Option<bool>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// Samples per axis of the density grid.
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated times, each with an optional unit suffix.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<String>>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    taylor_order: Option<u32>,
    #[arg(long)]
    phi_samples: Option<usize>,
}

impl Flags {
    /// Fills every unset flag from the config file, if one was given.
    fn merged(self) -> Result<Flags, Error> {
        let Some(path) = &self.config else { return Ok(self) };
        let text = std::fs::read_to_string(path)?;
        let file: Flags = toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        macro_rules! pick {
            ($($f:ident),*) => { Flags { config: self.config.clone(), $($f: self.$f.or(file.$f)),* } };
        }
        Ok(pick!(
            out_dir, dt, t_max, seed, n_mean, sigma, n_min, n_max, spin_axis, axis, freeze_orbital, kappa, omega,
            grid, times, threshold, taylor_order, phi_samples
        ))
    }

    fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    fn packet(&self) -> PacketConfig {
        let d = PacketConfig::default();
        PacketConfig {
            n_mean: self.n_mean.unwrap_or(d.n_mean),
            sigma: self.sigma.unwrap_or(d.sigma),
            n_min: self.n_min.unwrap_or(d.n_min),
            n_max: self.n_max.unwrap_or(d.n_max),
        }
    }

    fn time(value: &Option<String>, default: TimeSpec) -> Result<TimeSpec, Error> {
        value.as_deref().map_or(Ok(default), TimeSpec::parse)
    }

    fn times(&self, default: Vec<TimeSpec>) -> Result<Vec<TimeSpec>, Error> {
        match &self.times {
            Some(list) => list.iter().map(|s| TimeSpec::parse(s)).collect(),
            None => Ok(default),
        }
    }

    fn params(&self, mut p: wplab::EvolutionParams) -> wplab::EvolutionParams {
        p.kappa = self.kappa.unwrap_or(p.kappa);
        p.omega_ho = self.omega.unwrap_or(p.omega_ho);
        p.freeze_orbital = self.freeze_orbital.unwrap_or(p.freeze_orbital);
        p
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::RydbergAutocorr(flags) => {
            let f = flags.merged()?;
            let d = AutocorrConfig::default();
            let cfg = AutocorrConfig {
                packet: f.packet(),
                t_max: Flags::time(&f.t_max, d.t_max)?,
                dt: Flags::time(&f.dt, d.dt)?,
                threshold: f.threshold.unwrap_or(d.threshold),
                taylor_order: f.taylor_order,
            };
            let out = run_rydberg_autocorr(&cfg, &f.out_dir())?;
            eprintln!("{} samples, {} peaks", out.rows, out.peaks.len());
            report(&out.files);
        }
        Command::RydbergAngular(flags) => {
            let f = flags.merged()?;
            let d = AngularConfig::default();
            let cfg = AngularConfig {
                packet: f.packet(),
                times: f.times(d.times)?,
                phi_samples: f.phi_samples.unwrap_or(d.phi_samples),
            };
            let out = run_rydberg_angular(&cfg, &f.out_dir())?;
            for (t, n) in &out.lobes {
                eprintln!("t = {t:.6e}: {n} lobes");
            }
            report(&out.files);
        }
        Command::Pendulum(flags) => {
            let f = flags.merged()?;
            let d = PendulumConfig::default();
            let cfg = PendulumConfig {
                n_mean: f.n_mean.unwrap_or(d.n_mean),
                spin: f.spin_axis.as_deref().map_or(Ok(d.spin), parse_direction)?,
                params: f.params(d.params),
                t_max: Flags::time(&f.t_max, d.t_max)?,
                dt: Flags::time(&f.dt, d.dt)?,
            };
            let (_, path) = run_pendulum(&cfg, &f.out_dir())?;
            report(&[path]);
        }
        Command::Vortex(flags) => {
            let f = flags.merged()?;
            let d = VortexConfig::default();
            let cfg = VortexConfig {
                n_mean: f.n_mean.unwrap_or(d.n_mean),
                axis: f.axis.as_deref().map_or(Ok(d.axis), parse_axis)?,
                spin: f.spin_axis.as_deref().map_or(Ok(d.spin), parse_direction)?,
                params: f.params(d.params),
                grid: f.grid.unwrap_or(d.grid),
                times: f.times(d.times)?,
            };
            let out = run_vortex(&cfg, &f.out_dir())?;
            for (t, m) in &out.metrics {
                eprintln!("t = {t:.4}: ring radius {:.4}, on-axis/global {:.4}", m.ring_radius, m.on_axis_max / m.global_max);
            }
            report(&out.files);
        }
    }
    Ok(())
}

fn report(files: &[impl AsRef<Path>]) {
    for f in files {
        eprintln!("wrote {}", f.as_ref().display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Io(_)) { 3 } else { 2 })
        }
    }
}
