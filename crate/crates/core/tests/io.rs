mod common;

use std::io::Cursor;

use common::random_state;
use proptest::prelude::*;
use wplab::basis::Truncation;
use wplab::density::{evaluate_density, Axis, GridSpec};
use wplab::io::{read_raster, read_state, write_raster, write_slice_csv, write_state, RASTER_MAGIC};
use wplab::states::{attach_spin, linear_gaussian};
use wplab::SpinDirection;

#[test]
fn raster_round_trip_and_layout() {
    let trunc = Truncation::for_mean(2.0);
    let psi = attach_spin(&linear_gaussian(2.0, SpinDirection::Z, &trunc).unwrap(), SpinDirection::X).unwrap();
    let spec = GridSpec::new([-4.0, -3.0, -2.0], [4.0, 3.0, 5.0], [5, 6, 7]).unwrap();
    let grid = evaluate_density(&psi, &spec).unwrap();

    let mut bytes = Vec::new();
    write_raster(&mut bytes, &grid).unwrap();
    let header_end = bytes.iter().position(|&b| b == b'\n').unwrap();
    let header = std::str::from_utf8(&bytes[..header_end]).unwrap();
    assert_eq!(header, format!("{RASTER_MAGIC} 5 6 7 -4 4 -3 3 -2 5"));
    assert_eq!(bytes.len(), header_end + 1 + 4 * 5 * 6 * 7);

    // Second stored value is (i=1, j=0, k=0).
    let second = f32::from_le_bytes(bytes[header_end + 5..header_end + 9].try_into().unwrap());
    assert_eq!(second, grid.get(1, 0, 0) as f32);

    let back = read_raster(Cursor::new(&bytes)).unwrap();
    assert_eq!(back.spec, grid.spec);
    for (a, b) in back.values.iter().zip(&grid.values) {
        assert_eq!(*a, *b as f32 as f64);
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(read_raster(Cursor::new(b"WPLAB1 2 2 2 0 1 0 1 0 1\n\0\0")).is_err());
    assert!(read_raster(Cursor::new(b"NOPE 2 2 2 0 1 0 1 0 1\n")).is_err());
    assert!(read_state(Cursor::new("#wplab-state l_max=2\n")).is_err());
    assert!(read_state(Cursor::new("#wplab-state l_max=1 n_r_max=0 tail_tolerance=1e-8\n0 2 0 up 1 0\n")).is_err());
    assert!(read_state(Cursor::new("#wplab-state l_max=1 n_r_max=0 tail_tolerance=1e-8\n0 1 0 sideways 1 0\n")).is_err());
}

#[test]
fn slice_export_covers_one_plane() {
    let spec = GridSpec::cube(2.0, 4).unwrap();
    let psi = random_state(Truncation::new(2, 1, 1e-8).unwrap(), 5);
    let grid = evaluate_density(&psi, &spec).unwrap();
    let mut out = Vec::new();
    write_slice_csv(&mut out, &grid, Axis::Y, 2).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,z,value");
    assert_eq!(lines.len(), 1 + 16);
    assert!(write_slice_csv(Vec::new(), &grid, Axis::Z, 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn state_round_trip_is_exact(seed in any::<u64>(), l_max in 0u32..5, n_r_max in 0u32..4) {
        let trunc = Truncation::new(l_max, n_r_max, 1e-8).unwrap();
        let psi = random_state(trunc, seed).with_label("kind", "random state");
        let mut text = Vec::new();
        write_state(&mut text, &psi).unwrap();
        let back = read_state(Cursor::new(&text)).unwrap();
        prop_assert_eq!(back.truncation(), psi.truncation());
        prop_assert_eq!(back.amplitudes(), psi.amplitudes());
        prop_assert_eq!(back.labels.get("kind").map(String::as_str), Some("random_state"));
    }
}
