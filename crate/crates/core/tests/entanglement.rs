use isingcorr::density::{reduced_from_pure, DensityMatrix};
use isingcorr::entanglement::{bipartition_entanglement, bipartitions, entanglement_stats};
use isingcorr::hamiltonian::ground_state;
use isingcorr::sweep::{find_peak_for, log_grid, sweep, Column, MeasureSet, SweepConfig};
use isingcorr::{states, ExecMode, PureState, RingConfig};
use proptest::prelude::*;

fn ring(n: usize, ratio: f64) -> PureState {
    ground_state(&RingConfig::from_ratio(n, ratio).unwrap()).unwrap().state
}

fn estats_config(n: usize, ratios: Vec<f64>) -> SweepConfig {
    SweepConfig::new(n, ratios, MeasureSet { global_discord: false, entanglement: true, two_spin: false })
}

#[test]
fn purity_oracle_on_a_pair() {
    let gs = ring(4, 1.0);
    let rho: DensityMatrix = reduced_from_pure(&gs, &[0, 1]).unwrap();
    let m = rho.matrix();
    let purity = (m * m).trace().re;
    assert!((bipartition_entanglement(&gs, &[0, 1]).unwrap() + purity.log2()).abs() < 1e-12);
}

#[test]
fn variance_peaks_near_unit_ratio_for_six_sites() {
    let cfg = estats_config(6, log_grid(0.05, 6.0, 60));
    let table = sweep(&cfg).unwrap();
    let peak = find_peak_for(&table, Column::VarE, &cfg).unwrap();
    assert!(!peak.boundary);
    assert!((0.8..=1.5).contains(&peak.ratio), "{peak:?}");
}

#[test]
fn variance_vanishes_at_both_ends() {
    for n in [4, 5, 6] {
        let lo = entanglement_stats(&ring(n, 1e-3), ExecMode::Sequential).unwrap();
        let hi = entanglement_stats(&ring(n, 1e3), ExecMode::Sequential).unwrap();
        assert!(lo.variance < 1e-5 && hi.variance < 1e-5, "N={n}: {} {}", lo.variance, hi.variance);
    }
}

#[test]
fn mean_decreases_beyond_unit_ratio() {
    for n in [4, 5, 6] {
        let means: Vec<f64> = log_grid(1.0, 6.0, 25)
            .into_iter()
            .map(|r| entanglement_stats(&ring(n, r), ExecMode::Sequential).unwrap().mean)
            .collect();
        assert!(means.windows(2).all(|w| w[1] <= w[0] + 1e-12), "N={n}: {means:?}");
    }
}

#[test]
fn mean_beyond_unit_ratio_is_flagged_monotone() {
    let cfg = estats_config(4, log_grid(1.0, 6.0, 12));
    let table = sweep(&cfg).unwrap();
    let peak = find_peak_for(&table, Column::MeanE, &cfg).unwrap();
    assert!(peak.boundary && !peak.refined);
    assert_eq!(peak.ratio, table.rows[0].ratio);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn complement_symmetry_and_bounds(n in 2usize..=7, seed in any::<u64>(), pick in any::<usize>()) {
        let psi = states::random_state(n, seed);
        let subsets = bipartitions(n);
        let a = &subsets[pick % subsets.len()];
        let b: Vec<usize> = (0..n).filter(|s| !a.contains(s)).collect();
        let ea = bipartition_entanglement(&psi, a).unwrap();
        let eb = bipartition_entanglement(&psi, &b).unwrap();
        prop_assert!((ea - eb).abs() <= 1e-10);
        prop_assert!(ea >= -1e-10 && ea <= a.len().min(b.len()) as f64 + 1e-10);
    }

    #[test]
    fn stats_are_consistent(n in 2usize..=7, seed in any::<u64>()) {
        let st = entanglement_stats(&states::random_state(n, seed), ExecMode::Sequential).unwrap();
        prop_assert_eq!(st.n_bipartitions, (1 << (n - 1)) - 1);
        prop_assert!(st.variance >= 0.0);
        let (lo, hi) = st.per_bipartition.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (_, e)| (l.min(*e), h.max(*e)));
        prop_assert!(st.mean >= lo - 1e-12 && st.mean <= hi + 1e-12);
    }
}
