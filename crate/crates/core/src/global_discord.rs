//! Global quantum discord of a pure ring state.
//!
//! For a pure global state `|ψ⟩` and local bases `R = ⊗_j R_j`, the
//! measured state `Π(|ψ⟩⟨ψ|)` is diagonal in the rotated product basis with
//! spectrum `λ_k = |⟨k|R†|ψ⟩|²`. The relative entropy to it reduces to the
//! Shannon entropy `H(λ)` and each single-site term reduces to
//! `S(Π_j(ρ_j)) − S(ρ_j)`, so
//!
//! ```text
//! GD = min_R  H(λ) − Σ_j [ S(Π_j(ρ_j)) − S(ρ_j) ]
//! ```
//!
//! Each evaluation costs `O(2^N · N)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::{adjoint2, reduced_from_pure, rotation, shannon_entropy, von_neumann_entropy, Mat2, MeasurementAngles};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::hamiltonian::PureState;
use crate::optimize::NelderMead;
use crate::C64;

/// Outcome distribution of a complete local measurement of the whole ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredSpectrum {
    pub lambdas: Vec<f64>,
    pub angles: MeasurementAngles,
}

/// `λ_k = |⟨k|R†(angles)|ψ⟩|²`, via one single-site rotation per site.
pub fn measured_spectrum(gs: &PureState, angles: &MeasurementAngles) -> Result<MeasuredSpectrum> {
    check_angles(gs, angles)?;
    let rotated = rotate_amplitudes(gs.amplitudes(), &angles.rotations());
    Ok(MeasuredSpectrum {
        lambdas: rotated.iter().map(|a| a.norm_sqr()).collect(),
        angles: angles.clone(),
    })
}

fn check_angles(gs: &PureState, angles: &MeasurementAngles) -> Result<()> {
    if angles.len() != gs.n_sites() {
        return Err(Error::Domain(format!(
            "{} angle pairs for {} sites",
            angles.len(),
            gs.n_sites()
        )));
    }
    Ok(())
}

/// `(⊗ R_j)† |ψ⟩`.
fn rotate_amplitudes(amps: &[C64], rots: &[Mat2]) -> Vec<C64> {
    let n = rots.len();
    let mut out = amps.to_vec();
    for (site, r) in rots.iter().enumerate() {
        let u = adjoint2(r);
        let bit = 1usize << (n - 1 - site);
        for i in 0..out.len() {
            if i & bit != 0 {
                continue;
            }
            let (a, b) = (out[i], out[i | bit]);
            out[i] = u[0][0] * a + u[0][1] * b;
            out[i | bit] = u[1][0] * a + u[1][1] * b;
        }
    }
    out
}

/// A pure state with its single-site marginals precomputed, ready for
/// repeated objective evaluations.
#[derive(Debug, Clone)]
pub struct GdProblem {
    state: PureState,
    marginals: Vec<Mat2>,
    marginal_entropies: Vec<f64>,
}

impl GdProblem {
    pub fn new(state: &PureState) -> Result<Self> {
        let n = state.n_sites();
        let mut marginals = Vec::with_capacity(n);
        let mut marginal_entropies = Vec::with_capacity(n);
        for site in 0..n {
            let rho = reduced_from_pure(state, &[site])?;
            marginal_entropies.push(von_neumann_entropy(&rho)?);
            let m = rho.matrix();
            marginals.push([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]);
        }
        Ok(Self { state: state.clone(), marginals, marginal_entropies })
    }

    pub fn n_sites(&self) -> usize {
        self.state.n_sites()
    }

    /// Objective at flat angles `[θ₀, φ₀, θ₁, φ₁, …]`.
    pub fn objective_flat(&self, flat: &[f64]) -> f64 {
        let rots: Vec<Mat2> = flat.chunks_exact(2).map(|c| rotation(c[0], c[1])).collect();
        self.objective_rotations(&rots)
    }

    pub fn objective(&self, angles: &MeasurementAngles) -> Result<f64> {
        check_angles(&self.state, angles)?;
        Ok(self.objective_rotations(&angles.rotations()))
    }

    fn objective_rotations(&self, rots: &[Mat2]) -> f64 {
        let rotated = rotate_amplitudes(self.state.amplitudes(), rots);
        let lambdas: Vec<f64> = rotated.iter().map(|a| a.norm_sqr()).collect();
        let mut value = shannon_entropy(&lambdas);
        for ((r, m), s) in rots.iter().zip(&self.marginals).zip(&self.marginal_entropies) {
            value -= local_dephasing_entropy(m, r) - s;
        }
        value
    }
}

/// Entropy of the outcome distribution of measuring `m` in basis `r`.
fn local_dephasing_entropy(m: &Mat2, r: &Mat2) -> f64 {
    let mut p = [0.0; 2];
    for (k, pk) in p.iter_mut().enumerate() {
        let v = [r[0][k], r[1][k]];
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += v[i].conj() * m[i][j] * v[j];
            }
        }
        *pk = acc.re.max(0.0);
    }
    shannon_entropy(&p)
}

/// `H(λ) − Σ_j [S(Π_j(ρ_j)) − S(ρ_j)]` for one choice of local bases.
pub fn gd_objective(gs: &PureState, angles: &MeasurementAngles) -> Result<f64> {
    GdProblem::new(gs)?.objective(angles)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Number of starts; `None` means `max(16, 4N)`.
    pub restarts: Option<usize>,
    /// Evaluation budget per start.
    pub max_evals: usize,
    pub f_tol: f64,
    pub seed: u64,
    /// Share one `(θ, φ)` across all sites.
    pub uniform_angles: bool,
    pub exec: ExecMode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: None,
            max_evals: 50_000,
            f_tol: 1e-9,
            seed: 2012,
            uniform_angles: false,
            exec: ExecMode::Parallel,
        }
    }
}

impl OptimizerConfig {
    pub fn starts_for(&self, n_sites: usize) -> usize {
        self.restarts.unwrap_or_else(|| 16.max(4 * n_sites)).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GdResult {
    pub value: f64,
    pub argmin_angles: MeasurementAngles,
    pub n_restarts: usize,
    pub converged: bool,
    pub evaluations: usize,
}

/// Minimize the objective over all local projective bases with multi-start
/// Nelder-Mead. Start 0 is the all-σᶻ basis, start 1 the all-σˣ basis, the
/// rest are drawn from a ChaCha stream keyed by `(seed, start index)`. Ties
/// are broken by start index, so the result does not depend on scheduling.
pub fn global_discord(gs: &PureState, opt: &OptimizerConfig) -> Result<GdResult> {
    let problem = GdProblem::new(gs)?;
    let n = gs.n_sites();
    let starts = opt.starts_for(n);
    let nm = NelderMead { f_tol: opt.f_tol, max_evals: opt.max_evals, ..NelderMead::default() };
    let params = if opt.uniform_angles { 2 } else { 2 * n };
    let expand = |x: &[f64]| -> Vec<f64> {
        if opt.uniform_angles { x.iter().copied().cycle().take(2 * n).collect() } else { x.to_vec() }
    };

    let runs = map_indexed(opt.exec, starts, |idx| {
        let x0 = start_point(idx, params, opt.seed);
        nm.minimize(|x| problem.objective_flat(&expand(x)), &x0)
    });

    let evaluations = runs.iter().map(|r| r.evals).sum();
    let (_, best) = runs
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.f.total_cmp(&b.f).then(ia.cmp(ib)))
        .ok_or_else(|| Error::Config("optimizer needs at least one start".into()))?;
    Ok(GdResult {
        value: best.f.max(0.0),
        argmin_angles: MeasurementAngles::from_flat(&expand(&best.x)).canonical(),
        n_restarts: starts,
        converged: best.converged,
        evaluations,
    })
}

fn start_point(idx: usize, params: usize, seed: u64) -> Vec<f64> {
    match idx {
        0 => vec![0.0; params],
        1 => (0..params).map(|i| if i % 2 == 0 { PI / 2.0 } else { 0.0 }).collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            (0..params)
                .map(|i| if i % 2 == 0 { rng.gen_range(0.0..PI) } else { rng.gen_range(0.0..2.0 * PI) })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ghz_spectrum_in_z_basis() {
        let s = measured_spectrum(&states::ghz(4), &MeasurementAngles::z(4)).unwrap();
        assert_abs_diff_eq!(s.lambdas[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.lambdas[15], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.lambdas.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_spectrum_is_a_point_mass() {
        let s = measured_spectrum(&states::basis_state(3, 7), &MeasurementAngles::z(3)).unwrap();
        assert_abs_diff_eq!(s.lambdas[7], 1.0);
        assert_eq!(s.lambdas.iter().filter(|&&l| l > 0.0).count(), 1);
    }

    #[test]
    fn angle_count_mismatch_is_rejected() {
        assert!(measured_spectrum(&states::ghz(3), &MeasurementAngles::z(2)).is_err());
        assert!(gd_objective(&states::ghz(3), &MeasurementAngles::z(4)).is_err());
    }

    #[test]
    fn anchor_objectives() {
        assert_abs_diff_eq!(
            gd_objective(&states::ghz(5), &MeasurementAngles::z(5)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gd_objective(&states::basis_state(4, 15), &MeasurementAngles::z(4)).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ghz_and_product_optimum() {
        let opt = OptimizerConfig { restarts: Some(8), ..Default::default() };
        let r = global_discord(&states::ghz(4), &opt).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-6);
        let r = global_discord(&states::random_product_state(4, 1), &opt).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let psi = states::random_state(3, 4);
        let seq = OptimizerConfig { restarts: Some(6), exec: ExecMode::Sequential, ..Default::default() };
        let par = OptimizerConfig { exec: ExecMode::Parallel, ..seq };
        let a = global_discord(&psi, &seq).unwrap();
        let b = global_discord(&psi, &par).unwrap();
        assert_eq!(a, b);
    }
}
