use std::f64::consts::PI;

use wplab::basis::{BasisIndex, Spin, Truncation};
use wplab::density::{evaluate_density, torus_metrics, Axis, DensityGrid, GridSpec};
use wplab::evolution::apply_uls;
use wplab::states::{attach_spin, circular_coherent, linear_gaussian};
use wplab::{SpinDirection, SpinorState, C64};

fn vortex_state(n: f64) -> SpinorState {
    let trunc = Truncation::for_mean(n);
    let spatial = linear_gaussian(n, SpinDirection::Z, &trunc).unwrap();
    attach_spin(&spatial, SpinDirection::Z).unwrap()
}

/// Largest mismatch between each cell and its image under a quarter turn
/// about z (the grid is symmetric, so the image is again a grid point).
fn quarter_turn_asymmetry(grid: &DensityGrid) -> f64 {
    let [nx, ny, nz] = grid.spec.shape;
    assert_eq!(nx, ny);
    let mut worst: f64 = 0.0;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let a = grid.get(i, j, k);
                let b = grid.get(nx - 1 - j, i, k);
                worst = worst.max((a - b).abs());
            }
        }
    }
    worst
}

#[test]
fn ground_state_density_closed_form() {
    let trunc = Truncation::new(2, 2, 1e-8).unwrap();
    let mut s = SpinorState::zeros(trunc);
    s.set(&BasisIndex::new(0, 0, 0, Spin::Up).unwrap(), C64::new(1.0, 0.0)).unwrap();
    let spec = GridSpec::cube(4.0, 17).unwrap();
    let grid = evaluate_density(&s, &spec).unwrap();
    for (n, v) in grid.values.iter().enumerate() {
        let (i, j, k) = (n % 17, (n / 17) % 17, n / 289);
        let p = spec.point(i, j, k);
        let r2 = p.iter().map(|c| c * c).sum::<f64>();
        assert!((v - PI.powf(-1.5) * (-r2).exp()).abs() < 1e-10);
    }
    let m = torus_metrics(&grid, Axis::Z).unwrap();
    assert!(m.ring_radius <= spec.spacing(0));
}

#[test]
fn circular_packet_peaks_at_turning_point() {
    let trunc = Truncation::for_mean(18.0);
    let psi = circular_coherent(18.0, &trunc).unwrap();
    let spec = GridSpec::for_mean(18.0, 49).unwrap();
    let grid = evaluate_density(&psi, &spec).unwrap();
    let (idx, _) = grid.argmax();
    let p = spec.point(idx[0], idx[1], idx[2]);
    let target = [18f64.sqrt(), 0.0, 0.0];
    for a in 0..3 {
        assert!((p[a] - target[a]).abs() <= spec.spacing(a), "{p:?}");
    }
    assert!((grid.integral() - 1.0).abs() < 0.01);
}

#[test]
fn vortex_density_is_axially_symmetric_and_normalized() {
    let psi = vortex_state(8.0);
    let spec = GridSpec::for_mean(8.0, 48).unwrap();
    for tau in [0.0, PI / 2.0, PI, 1.3] {
        let grid = evaluate_density(&apply_uls(&psi, tau), &spec).unwrap();
        assert!(quarter_turn_asymmetry(&grid) < 1e-10, "tau={tau}");
        if [0.0, PI / 2.0, PI].contains(&tau) {
            assert!((grid.integral() - 1.0).abs() < 0.01, "tau={tau}: {}", grid.integral());
        }
    }
}

#[test]
fn vortex_ring_forms_and_closes() {
    let psi = vortex_state(8.0);
    let spec = GridSpec::for_mean(8.0, 48).unwrap();
    let start = evaluate_density(&psi, &spec).unwrap();
    let m0 = torus_metrics(&start, Axis::Z).unwrap();
    assert!(m0.ring_radius < spec.spacing(0));
    let (idx, _) = start.argmax();
    assert!((spec.point(idx[0], idx[1], idx[2])[2] - 4.0).abs() <= spec.spacing(2));

    let half = evaluate_density(&apply_uls(&psi, PI), &spec).unwrap();
    let m = torus_metrics(&half, Axis::Z).unwrap();
    assert!(m.ring_radius > 0.5, "{m:?}");
    assert!(m.on_axis_max < 0.5 * m.global_max, "{m:?}");
    assert!(m.on_axis_max <= m.global_max);

    let full = evaluate_density(&apply_uls(&psi, 2.0 * PI), &spec).unwrap();
    assert!(full.max_abs_difference(&start) < 1e-8);
}

#[test]
fn rejects_oversized_grid_and_zero_field() {
    assert!(GridSpec::cube(5.0, 513).is_err());
    let spec = GridSpec::cube(2.0, 8).unwrap();
    let zero = evaluate_density(&SpinorState::zeros(Truncation::new(1, 1, 1e-8).unwrap()), &spec).unwrap();
    assert!(torus_metrics(&zero, Axis::Z).is_err());
}
