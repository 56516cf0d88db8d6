mod common;

use isingcorr::density::{dephase, mutual_information, DensityMatrix, MeasurementAngles};
use isingcorr::hamiltonian::ground_state;
use isingcorr::toeplitz::{toeplitz_correlators, QUAD_TOL};
use isingcorr::two_spin::{
    amid, discord, discord_formula, discord_numerical, mid, pair_measures, random_x_state, reduced_two_spin,
    Direction,
};
use isingcorr::{states, PureState, RingConfig};
use proptest::prelude::*;

fn ring(n: usize, ratio: f64) -> PureState {
    ground_state(&RingConfig::from_ratio(n, ratio).unwrap()).unwrap().state
}

fn sym_discord(rho: &DensityMatrix) -> f64 {
    discord(rho, Direction::Symmetrized).unwrap().value
}

#[test]
fn reduced_pair_matches_expectation_oracle() {
    let gs = ring(6, 1.0);
    let x = reduced_two_spin(&gs, 0, 1).unwrap();
    let oracle = common::two_spin_from_expectations(&gs, 0, 1);
    assert!((x.density().matrix() - &oracle).iter().all(|d| d.norm() < 1e-10));
}

#[test]
fn bell_amid_matches_angle_grid() {
    let rho = DensityMatrix::from_pure(&states::bell_phi_plus());
    let total = mutual_information(&rho, &[0]).unwrap();
    let steps = 12;
    let mut best = f64::INFINITY;
    for a in 0..=steps {
        for b in 0..steps {
            for c in 0..=steps {
                for d in 0..steps {
                    let t = |k: usize, m: usize| std::f64::consts::PI * k as f64 / m as f64;
                    let angles = MeasurementAngles::new(vec![(t(a, steps), t(2 * b, steps)), (t(c, steps), t(2 * d, steps))]);
                    let i = mutual_information(&dephase(&rho, &angles).unwrap(), &[0]).unwrap();
                    best = best.min(total - i);
                }
            }
        }
    }
    assert!((best - 1.0).abs() < 1e-9);
    assert!((amid(&rho).unwrap().value - best).abs() < 1e-6);
}

#[test]
fn translation_invariance_along_the_ring() {
    for n in [5, 6, 7] {
        let gs = ring(n, 0.9);
        let d0 = sym_discord(reduced_two_spin(&gs, 0, 1).unwrap().density());
        for s in 1..n {
            let d = sym_discord(reduced_two_spin(&gs, s, (s + 1) % n).unwrap().density());
            assert!((d - d0).abs() < 1e-9, "N={n} bond {s}: {d} vs {d0}");
        }
    }
}

#[test]
fn separation_and_its_complement_agree() {
    let n = 8;
    let gs = ring(n, 1.2);
    for s in 1..n {
        let a = pair_measures(&gs, 0, s).unwrap();
        let b = pair_measures(&gs, 0, n - s).unwrap();
        assert!((a.discord - b.discord).abs() < 1e-9);
        assert!((a.mid - b.mid).abs() < 1e-9);
        assert!((a.amid - b.amid).abs() < 1e-7);
    }
}

#[test]
fn nearest_neighbor_discord_peaks_near_unit_ratio() {
    let grid = isingcorr::sweep::log_grid(0.1, 4.0, 40);
    for n in 3..=8 {
        let (arg, _) = grid
            .iter()
            .map(|&r| (r, sym_discord(reduced_two_spin(&ring(n, r), 0, 1).unwrap().density())))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!((0.5..=1.5).contains(&arg), "N={n}: argmax {arg}");
    }
}

#[test]
fn discord_decays_with_separation_at_unit_ratio() {
    let gs = ring(8, 1.0);
    let d: Vec<f64> = (1..=3).map(|s| sym_discord(reduced_two_spin(&gs, 0, s).unwrap().density())).collect();
    assert!(d[0] >= d[1] && d[1] >= d[2], "{d:?}");
}

#[test]
fn hierarchy_on_ground_state_pairs() {
    for n in [3, 5, 8] {
        for r in [0.2, 0.7, 1.0, 1.6, 3.0] {
            let gs = ring(n, r);
            for s in 1..=n / 2 {
                let m = pair_measures(&gs, 0, s).unwrap();
                assert!(m.discord <= m.amid + 1e-8 && m.amid <= m.mid + 1e-8, "N={n} r={r} s={s}: {m:?}");
            }
        }
    }
}

#[test]
fn toeplitz_matches_large_ring() {
    let (n, j, b) = (14, 1.0, 2.0);
    let (e, psi) = common::lanczos_ground(n, j, b, 160);
    assert!(common::ring_residual(&psi, n, j, b, e) < 1e-8);
    let gs = common::real_state(n, &psi);
    use common::Pauli::*;
    let exact_xx = common::expectation(&gs, &[(0, X), (1, X)]);
    let exact_yy = common::expectation(&gs, &[(0, Y), (1, Y)]);
    let exact_zz = common::expectation(&gs, &[(0, Z), (1, Z)]);
    let exact_z = common::expectation(&gs, &[(0, Z)]);
    let c = toeplitz_correlators(j / b, 1).unwrap();
    assert!(c.quad_error <= QUAD_TOL);
    assert!((c.chi_xx - exact_xx).abs() < 5e-2, "{} vs {exact_xx}", c.chi_xx);
    assert!((c.chi_yy - exact_yy).abs() < 5e-2, "{} vs {exact_yy}", c.chi_yy);
    assert!((c.chi_zz - exact_zz).abs() < 5e-2, "{} vs {exact_zz}", c.chi_zz);
    assert!((c.mz - exact_z).abs() < 5e-2, "{} vs {exact_z}", c.mz);
}

#[test]
fn classical_and_product_states_carry_nothing() {
    let classical = DensityMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4], vec![0, 1]).unwrap();
    let product = DensityMatrix::from_pure(&states::random_product_state(2, 3));
    for rho in [classical, product] {
        assert!(sym_discord(&rho) < 1e-8);
        assert!(mid(&rho).unwrap() < 1e-8);
        assert!(amid(&rho).unwrap().value < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn x_state_hierarchy(seed in any::<u64>()) {
        let x = random_x_state(seed);
        let rho = x.density();
        let d = sym_discord(rho);
        let a = amid(rho).unwrap().value;
        let m = mid(rho).unwrap();
        prop_assert!(d >= -1e-12 && d <= 1.0 + 1e-9);
        prop_assert!(d <= a + 1e-8, "D {} > A {}", d, a);
        prop_assert!(a <= m + 1e-8, "A {} > M {}", a, m);
    }

    #[test]
    fn closed_form_never_undercuts_numerics(seed in any::<u64>()) {
        let x = random_x_state(seed);
        prop_assert!(discord_formula(&x).unwrap() >= discord_numerical(x.density()).unwrap() - 1e-8);
    }
}
