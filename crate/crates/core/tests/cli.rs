use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wplab::density::{torus_metrics, Axis};
use wplab::io::read_raster;

fn wplab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wplab"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn table(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| if v.is_empty() { f64::NAN } else { v.parse().unwrap() }).collect()).collect();
    (header, rows)
}

#[test]
fn autocorr_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = wplab(&["rydberg-autocorr"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let (header, rows) = table(&dir.path().join("autocorr.csv"));
    assert_eq!(header, ["t_in_Tcl", "P"]);
    assert_eq!(rows.len(), 5001);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - 1.0).abs() < 1e-12);
    assert!((rows[5000][0] - 50.0).abs() < 1e-9);

    let (header, peaks) = table(&dir.path().join("peaks.csv"));
    assert_eq!(header, ["t_in_Tcl", "P"]);
    assert!(peaks.iter().any(|p| (p[0] - 20.5).abs() <= 0.5));

    // Same configuration, same bytes.
    let again = tempfile::tempdir().unwrap();
    assert!(wplab(&["rydberg-autocorr"], again.path()).status.success());
    for f in ["autocorr.csv", "peaks.csv"] {
        assert_eq!(fs::read(dir.path().join(f)).unwrap(), fs::read(again.path().join(f)).unwrap());
    }
}

#[test]
fn autocorr_long_run_reaches_super_revival() {
    let dir = tempfile::tempdir().unwrap();
    let out = wplab(&["rydberg-autocorr", "--t-max", "350Tcl", "--dt", "0.025Tcl", "--taylor-order", "3"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, peaks) = table(&dir.path().join("peaks.csv"));
    assert!(peaks.iter().filter(|p| (p[0] - 300.0).abs() <= 5.0).count() >= 2);
    let (_, taylor) = table(&dir.path().join("autocorr_taylor.csv"));
    assert_eq!(taylor.len(), 14001);
}

#[test]
fn angular_lobes() {
    let dir = tempfile::tempdir().unwrap();
    assert!(wplab(&["rydberg-angular"], dir.path()).status.success());
    let (header, rows) = table(&dir.path().join("lobes.csv"));
    assert_eq!(header, ["t_in_Tcl", "lobes"]);
    let lobes: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(lobes, [4.0, 3.0, 2.0]);
    let (_, density) = table(&dir.path().join("angular.csv"));
    assert_eq!(density.len(), 3 * 4096);
}

#[test]
fn pendulum_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = wplab(&["pendulum"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = table(&dir.path().join("pendulum.csv"));
    assert_eq!(header.join(","), wplab::io::OBSERVABLES_HEADER);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (t, sx, purity) = (col("t"), col("sx"), col("purity"));

    assert!((rows[0][sx] - 0.5).abs() < 1e-15 && (rows[0][purity] - 1.0).abs() < 1e-12);
    let two_pi = rows.iter().find(|r| (r[t] - 2.0 * std::f64::consts::PI).abs() < 1e-9).unwrap();
    assert!((two_pi[sx] - 0.5).abs() < 1e-9);
    let first_period = rows.iter().filter(|r| r[t] <= 2.0 * std::f64::consts::PI + 1e-9);
    let min = first_period.min_by(|a, b| a[sx].total_cmp(&b[sx])).unwrap();
    assert!(min[sx] <= -0.45 && (min[t] - std::f64::consts::PI).abs() < 0.1);
}

#[test]
fn vortex_rasters_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let out = wplab(&["vortex", "--grid", "48", "--times", "0,0.5Tls,1Tls"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let load = |k: usize| read_raster(fs::File::open(dir.path().join(format!("density_{k:03}.raster"))).unwrap()).unwrap();
    let (start, half, full) = (load(0), load(1), load(2));
    let (idx, _) = start.argmax();
    let p = start.spec.point(idx[0], idx[1], idx[2]);
    let h = start.spec.spacing(0);
    assert!(p[0].abs() <= h && p[1].abs() <= h && (p[2] - 4.0).abs() <= start.spec.spacing(2), "{p:?}");
    let m = torus_metrics(&half, Axis::Z).unwrap();
    assert!(m.on_axis_max < 0.5 * m.global_max);
    assert!(full.max_abs_difference(&start) <= 1e-6);

    let (header, rows) = table(&dir.path().join("torus.csv"));
    assert_eq!(header[..4], ["t", "ring_radius", "on_axis_max", "global_max"]);
    assert_eq!(rows.len(), 3);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "n-mean = 30\nt-max = \"2Tcl\"\ndt = \"0.05Tcl\"\nseed = 7\n").unwrap();
    let out = wplab(&["rydberg-autocorr", "--config", cfg.to_str().unwrap(), "--t-max", "4Tcl"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = table(&dir.path().join("autocorr.csv"));
    assert_eq!(rows.len(), 81);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(wplab(&["pendulum", "--n-mean", "-3"], dir.path()).status.code(), Some(2));
    assert_eq!(wplab(&["rydberg-autocorr", "--n-min", "70", "--n-max", "50"], dir.path()).status.code(), Some(2));
    assert_eq!(wplab(&["rydberg-autocorr", "--dt", "0.1Tcl"], dir.path()).status.code(), Some(2));
    assert_eq!(wplab(&["vortex", "--grid", "600"], dir.path()).status.code(), Some(2));
    assert_eq!(wplab(&["vortex", "--times", "1Tcl"], dir.path()).status.code(), Some(2));
    assert_eq!(wplab(&["frobnicate"], dir.path()).status.code(), Some(2));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    assert_eq!(wplab(&["rydberg-angular"], &blocker.join("sub")).status.code(), Some(3));
}
