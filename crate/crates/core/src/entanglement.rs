//! Bipartition entanglement `E = −log₂ Tr ρ_A²` of a pure ring state and its
//! statistics over all bipartitions.

use serde::{Deserialize, Serialize};

use crate::density::reshape_split;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::hamiltonian::PureState;

pub fn bipartition_entanglement(gs: &PureState, subset: &[usize]) -> Result<f64> {
    let n = gs.n_sites();
    let mut a = subset.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || a.len() >= n || a.len() != subset.len() || a.iter().any(|&s| s >= n) {
        return Err(Error::Domain(format!("{subset:?} is not a nonempty proper subset of {n} sites")));
    }
    // purity is complement-symmetric; reduce on the smaller side
    let side = if 2 * a.len() <= n { a } else { (0..n).filter(|s| !a.contains(s)).collect() };
    let m = reshape_split(gs, &side);
    let rho = &m * m.adjoint();
    let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
    Ok((-purity.log2()).max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementStats {
    pub mean: f64,
    /// Population variance over the bipartitions.
    pub variance: f64,
    pub per_bipartition: Vec<(Vec<usize>, f64)>,
    pub n_bipartitions: usize,
}

/// All unordered bipartitions, each represented by the side holding site 0:
/// `2^(N−1) − 1` of them.
pub fn bipartitions(n: usize) -> Vec<Vec<usize>> {
    let full = (1usize << n) - 1;
    let top = 1usize << (n - 1);
    (0..full)
        .filter(|m| m & top != 0)
        .map(|m| (0..n).filter(|s| m >> (n - 1 - s) & 1 == 1).collect())
        .collect()
}

pub fn entanglement_stats(gs: &PureState, exec: ExecMode) -> Result<EntanglementStats> {
    let n = gs.n_sites();
    if !(2..=crate::hamiltonian::MAX_SITES).contains(&n) {
        return Err(Error::Capacity(n));
    }
    let parts = bipartitions(n);
    let values = map_indexed(exec, parts.len(), |i| bipartition_entanglement(gs, &parts[i]));
    let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count;
    Ok(EntanglementStats {
        mean,
        variance,
        n_bipartitions: values.len(),
        per_bipartition: parts.into_iter().zip(values).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{reduced_from_pure, DensityMatrix};
    use crate::hamiltonian::{ground_state, RingConfig};
    use crate::states;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ghz_is_one_everywhere() {
        let psi = states::ghz(6);
        for part in bipartitions(6) {
            assert_abs_diff_eq!(bipartition_entanglement(&psi, &part).unwrap(), 1.0, epsilon = 1e-12);
        }
        let st = entanglement_stats(&psi, ExecMode::Sequential).unwrap();
        assert_eq!(st.n_bipartitions, 31);
        assert_abs_diff_eq!(st.mean, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(st.variance, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn product_state_is_unentangled() {
        let st = entanglement_stats(&states::random_product_state(5, 2), ExecMode::Parallel).unwrap();
        assert_abs_diff_eq!(st.mean, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(st.variance, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn matches_direct_purity() {
        let gs = ground_state(&RingConfig::new(4, 1.0, 1.0).unwrap()).unwrap().state;
        let rho: DensityMatrix = reduced_from_pure(&gs, &[0, 1]).unwrap();
        let sq = rho.matrix() * rho.matrix();
        let direct = -sq.trace().re.log2();
        assert_abs_diff_eq!(bipartition_entanglement(&gs, &[0, 1]).unwrap(), direct, epsilon = 1e-12);
    }

    #[test]
    fn trivial_subsets_are_rejected() {
        let psi = states::ghz(3);
        assert!(bipartition_entanglement(&psi, &[]).is_err());
        assert!(bipartition_entanglement(&psi, &[0, 1, 2]).is_err());
        assert!(bipartition_entanglement(&psi, &[0, 0]).is_err());
    }

    #[test]
    fn bipartition_count() {
        for n in 2..=8 {
            assert_eq!(bipartitions(n).len(), (1 << (n - 1)) - 1);
        }
    }
}
