mod common;

use isingcorr::density::{dephase, partial_trace, von_neumann_entropy, DensityMatrix, MeasurementAngles};
use isingcorr::global_discord::{gd_objective, global_discord, measured_spectrum};
use isingcorr::hamiltonian::ground_state;
use isingcorr::two_spin::{discord, Direction};
use isingcorr::{states, ExecMode, OptimizerConfig, PureState, RingConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring(n: usize, ratio: f64) -> PureState {
    ground_state(&RingConfig::from_ratio(n, ratio).unwrap()).unwrap().state
}

fn quick() -> OptimizerConfig {
    OptimizerConfig { exec: ExecMode::Sequential, ..Default::default() }
}

#[test]
fn objective_matches_full_matrix_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for n in 2..=4 {
        let inputs = [ring(n, 1.0), ring(n, 0.4), states::random_state(n, n as u64)];
        for psi in &inputs {
            for _ in 0..20 {
                let angles = common::random_angles(n, &mut rng);
                let fast = gd_objective(psi, &angles).unwrap();
                let slow = common::full_matrix_gd_bracket(psi, &angles);
                assert!((fast - slow).abs() <= 1e-9, "N={n}: {fast} vs {slow}");
            }
        }
    }
}

#[test]
fn x_basis_spectrum_matches_dephased_eigenvalues() {
    let gs = ring(4, 1.0);
    let angles = MeasurementAngles::x(4);
    let mut fast = measured_spectrum(&gs, &angles).unwrap().lambdas;
    let d = dephase(&DensityMatrix::from_pure(&gs), &angles).unwrap();
    let mut slow = d.eigenvalues().unwrap();
    fast.sort_by(f64::total_cmp);
    slow.sort_by(f64::total_cmp);
    for (a, b) in fast.iter().zip(&slow) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!((fast.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn optimum_sits_below_the_anchors() {
    for n in 3..=5 {
        for r in [0.3, 1.0, 2.5] {
            let gs = ring(n, r);
            let res = global_discord(&gs, &quick()).unwrap();
            assert!(res.value >= -1e-9);
            assert!(res.value <= gd_objective(&gs, &MeasurementAngles::z(n)).unwrap() + 1e-12);
            assert!(res.value <= gd_objective(&gs, &MeasurementAngles::x(n)).unwrap() + 1e-12);
            assert!((gd_objective(&gs, &res.argmin_angles).unwrap() - res.value).abs() < 1e-9);
        }
    }
}

#[test]
fn doubling_restarts_is_stable() {
    for n in [3, 4, 5] {
        for r in [0.25, 0.8, 1.0, 1.5, 4.0] {
            let gs = ring(n, r);
            let base = global_discord(&gs, &quick()).unwrap().value;
            let starts = quick().starts_for(n) * 2;
            let more = global_discord(&gs, &OptimizerConfig { restarts: Some(starts), ..quick() }).unwrap().value;
            assert!((base - more).abs() <= 1e-4, "N={n} r={r}: {base} vs {more}");
        }
    }
}

#[test]
fn two_sites_reduce_to_symmetrized_discord() {
    for r in [0.05, 0.5, 1.0, 2.0, 5.0] {
        let gs = ring(2, r);
        let gd = global_discord(&gs, &quick()).unwrap().value;
        let rho = DensityMatrix::from_pure(&gs);
        let d = discord(&rho, Direction::Symmetrized).unwrap().value;
        let s = von_neumann_entropy(&partial_trace(&rho, &[0]).unwrap()).unwrap();
        assert!((gd - d).abs() <= 1e-6, "r={r}: GD {gd} vs D {d}");
        assert!((gd - s).abs() <= 1e-6);
    }
}

#[test]
fn uniform_angles_agree_with_full_search() {
    for n in [3, 4] {
        for r in [0.5, 1.0, 2.0] {
            let gs = ring(n, r);
            let full = global_discord(&gs, &quick()).unwrap().value;
            let uni = global_discord(&gs, &OptimizerConfig { uniform_angles: true, ..quick() }).unwrap().value;
            assert!((full - uni).abs() <= 1e-6, "N={n} r={r}: {full} vs {uni}");
        }
    }
}

#[test]
fn ghz_and_products() {
    for n in 3..=6 {
        let g = global_discord(&states::ghz(n), &quick()).unwrap();
        assert!((g.value - 1.0).abs() < 1e-6);
        assert!(global_discord(&states::random_product_state(n, 9), &quick()).unwrap().value < 1e-9);
    }
}

#[test]
fn seeded_runs_repeat_exactly() {
    let gs = ring(4, 0.9);
    let a = global_discord(&gs, &quick()).unwrap();
    let b = global_discord(&gs, &OptimizerConfig { exec: ExecMode::Parallel, ..quick() }).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.argmin_angles, b.argmin_angles);
}
