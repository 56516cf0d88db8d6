//! Two-spin reduced states and their quantum correlations: discord (closed
//! form for X states plus numerical minimization), measurement-induced
//! disturbance (MID) and its optimized version (AMID).
//!
//! Two-site matrices use the ordering `|00⟩, |01⟩, |10⟩, |11⟩` with the first
//! site (A) as the most significant bit.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::{
    binary_entropy, mutual_information, partial_trace, reduced_from_pure, rotation, shannon_entropy,
    von_neumann_entropy, DensityMatrix, MeasurementAngles,
};
use crate::error::{Error, Result};
use crate::hamiltonian::PureState;
use crate::optimize::NelderMead;
use crate::C64;

/// Off-X entries larger than this disqualify a state from the X-state path.
pub const X_PATTERN_TOL: f64 = 1e-10;

/// Grid resolution per angle for the numerical discord seed.
const DISCORD_GRID: usize = 16;
const AMID_RANDOM_STARTS: usize = 6;

/// Two-spin state whose only non-zero entries lie on the diagonal and the
/// anti-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct XState(DensityMatrix);

impl XState {
    pub fn new(rho: DensityMatrix) -> Result<Self> {
        if !is_x_state(&rho) {
            return Err(Error::Domain("state does not have the X sparsity pattern".into()));
        }
        Ok(Self(rho))
    }

    /// Build from the eight X entries; `z14 = ρ₁₄`, `z23 = ρ₂₃`.
    pub fn from_entries(diag: [f64; 4], z14: C64, z23: C64, sites: [usize; 2]) -> Result<Self> {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(*d, 0.0);
        }
        m[(0, 3)] = z14;
        m[(3, 0)] = z14.conj();
        m[(1, 2)] = z23;
        m[(2, 1)] = z23.conj();
        let rho = DensityMatrix::new(m, sites.to_vec())?;
        rho.eigenvalues()?;
        Self::new(rho)
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.0
    }

    pub fn into_density(self) -> DensityMatrix {
        self.0
    }

    fn entry(&self, i: usize, j: usize) -> C64 {
        self.0.matrix()[(i, j)]
    }
}

pub fn is_x_state(rho: &DensityMatrix) -> bool {
    if rho.n_sites() != 2 {
        return false;
    }
    let m = rho.matrix();
    (0..4).all(|i| {
        (0..4).all(|j| i == j || i + j == 3 || m[(i, j)].norm() <= X_PATTERN_TOL)
    })
}

/// Reduced state of sites `i`, `j` (ordered as given) of a ring state.
pub fn reduced_two_spin(gs: &PureState, i: usize, j: usize) -> Result<XState> {
    if i == j {
        return Err(Error::Domain(format!("pair ({i}, {j}) repeats a site")));
    }
    let n = gs.n_sites();
    if i >= n || j >= n {
        return Err(Error::Domain(format!("pair ({i}, {j}) outside a ring of {n} sites")));
    }
    let rho = reduced_from_pure(gs, &[i, j])?;
    let rho = if i < j { rho } else { rho.swapped()? };
    XState::new(rho)
}

/// Which party is measured: `BToA` measures the second site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    BToA,
    AToB,
    Symmetrized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    pub value: f64,
    /// Closed-form X-state value, when the input was an X state.
    pub formula: Option<f64>,
    pub numerical: f64,
    /// Input was not an X state; only the numerical path was used.
    pub non_x_fallback: bool,
}

/// Quantum discord of a two-spin state. For X states this is the minimum of
/// the closed form and the numerical minimization; otherwise the numerical
/// value with `non_x_fallback` set. The symmetrized variant is the larger of
/// the two one-way values.
pub fn discord(rho: &DensityMatrix, direction: Direction) -> Result<DiscordResult> {
    if rho.n_sites() != 2 {
        return Err(Error::Domain("discord needs a two-site state".into()));
    }
    match direction {
        Direction::BToA => one_way(rho),
        Direction::AToB => one_way(&rho.swapped()?),
        Direction::Symmetrized => {
            let ba = one_way(rho)?;
            let ab = one_way(&rho.swapped()?)?;
            Ok(if ab.value > ba.value { ab } else { ba })
        }
    }
}

fn one_way(rho: &DensityMatrix) -> Result<DiscordResult> {
    let base = discord_offset(rho)?;
    let numerical = (base + min_conditional_entropy(rho)).max(0.0);
    let formula = if is_x_state(rho) {
        Some(discord_formula(&XState(rho.clone()))?)
    } else {
        log::warn!("discord requested for a non-X state; using numerical minimization only");
        None
    };
    let value = formula.map_or(numerical, |f| f.min(numerical));
    Ok(DiscordResult { value, formula, numerical, non_x_fallback: formula.is_none() })
}

/// `S(ρ_B) − S(ρ_AB)`; discord is this plus the minimal conditional entropy.
fn discord_offset(rho: &DensityMatrix) -> Result<f64> {
    let sb = von_neumann_entropy(&partial_trace(rho, &[rho.sites()[1]])?)?;
    Ok(sb - von_neumann_entropy(rho)?)
}

/// Closed-form one-way discord (measurement on B) of an X state: the
/// conditional entropy is evaluated for the σᶻ measurement and for the best
/// transverse measurement, and the smaller one is kept.
pub fn discord_formula(x: &XState) -> Result<f64> {
    let d: Vec<f64> = (0..4).map(|i| x.entry(i, i).re).collect();
    let coherence = x.entry(0, 3).norm() + x.entry(1, 2).norm();

    let weighted = |p: f64, top: f64| if p > 0.0 { p * binary_entropy(top / p) } else { 0.0 };
    let s_z = weighted(d[0] + d[2], d[0]) + weighted(d[1] + d[3], d[1]);

    let bloch = ((d[0] + d[1] - d[2] - d[3]).powi(2) + 4.0 * coherence * coherence).sqrt();
    let s_x = binary_entropy((0.5 * (1.0 + bloch)).min(1.0));

    Ok((discord_offset(x.density())? + s_z.min(s_x)).max(0.0))
}

/// Numerical one-way discord (measurement on B), valid for any two-spin
/// state.
pub fn discord_numerical(rho: &DensityMatrix) -> Result<f64> {
    Ok((discord_offset(rho)? + min_conditional_entropy(rho)).max(0.0))
}

/// `Σ_b p_b S(ρ_{A|b})` for a projective measurement on B along `(θ, φ)`.
pub fn conditional_entropy(rho: &DensityMatrix, theta: f64, phi: f64) -> f64 {
    let m = rho.matrix();
    let u = rotation(theta, phi);
    let mut total = 0.0;
    for b in 0..2 {
        let v = [u[0][b], u[1][b]];
        let mut block = [[C64::new(0.0, 0.0); 2]; 2];
        for (a, row) in block.iter_mut().enumerate() {
            for (ap, entry) in row.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for beta in 0..2 {
                    for betap in 0..2 {
                        acc += v[beta].conj() * m[(2 * a + beta, 2 * ap + betap)] * v[betap];
                    }
                }
                *entry = acc;
            }
        }
        let p = block[0][0].re + block[1][1].re;
        if p <= 1e-15 {
            continue;
        }
        total += p * qubit_entropy(block[0][0].re / p, block[1][1].re / p, block[0][1].norm() / p);
    }
    total
}

/// Entropy of the qubit state `[[a, c], [c*, d]]` with `|c| = coherence`.
fn qubit_entropy(a: f64, d: f64, coherence: f64) -> f64 {
    let r = ((a - d).powi(2) + 4.0 * coherence * coherence).sqrt();
    let lo = (0.5 * (a + d - r)).max(0.0);
    let hi = (0.5 * (a + d + r)).max(0.0);
    shannon_entropy(&[lo, hi])
}

fn min_conditional_entropy(rho: &DensityMatrix) -> f64 {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..DISCORD_GRID {
        for j in 0..DISCORD_GRID {
            let t = PI * i as f64 / (DISCORD_GRID - 1) as f64;
            let p = 2.0 * PI * j as f64 / DISCORD_GRID as f64;
            let v = conditional_entropy(rho, t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    let nm = NelderMead { f_tol: 1e-12, max_evals: 4000, initial_step: 0.1, max_restarts: 4 };
    let m = nm.minimize(|x| conditional_entropy(rho, x[0], x[1]), &[best.1, best.2]);
    m.f.min(best.0)
}

/// Measurement-induced disturbance `I(ρ) − I(Π_E(ρ))`, with `Π_E` built
/// from the marginal eigenbases. A maximally mixed marginal is measured in
/// the σᶻ basis.
pub fn mid(rho: &DensityMatrix) -> Result<f64> {
    let angles = mid_angles(rho)?;
    Ok((mutual_information(rho, &rho.sites()[..1])? - classical_mutual_information(rho, &angles)?).max(0.0))
}

/// Local eigenbasis of each marginal as measurement angles.
pub fn mid_angles(rho: &DensityMatrix) -> Result<MeasurementAngles> {
    if rho.n_sites() != 2 {
        return Err(Error::Domain("MID needs a two-site state".into()));
    }
    let mut pairs = Vec::with_capacity(2);
    for &site in rho.sites() {
        let m = partial_trace(rho, &[site])?;
        let m = m.matrix();
        let (rx, ry, rz) = (2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re);
        let r = (rx * rx + ry * ry + rz * rz).sqrt();
        // eigenvalue splitting equals |r|
        if r <= crate::hamiltonian::DEGENERACY_TOL {
            pairs.push((0.0, 0.0));
        } else {
            pairs.push(((rz / r).clamp(-1.0, 1.0).acos(), ry.atan2(rx)));
        }
    }
    Ok(MeasurementAngles::new(pairs))
}

/// Mutual information of `Π(ρ)` for the local bases in `angles`: the
/// Shannon mutual information of the joint outcome distribution.
pub fn classical_mutual_information(rho: &DensityMatrix, angles: &MeasurementAngles) -> Result<f64> {
    let p = crate::density::measurement_probabilities(rho, angles)?;
    Ok(shannon_mutual_information(&p))
}

fn shannon_mutual_information(p: &[f64]) -> f64 {
    let pa = [p[0] + p[1], p[2] + p[3]];
    let pb = [p[0] + p[2], p[1] + p[3]];
    (shannon_entropy(&pa) + shannon_entropy(&pb) - shannon_entropy(p)).max(0.0)
}

/// Joint outcome probabilities for local bases given as four angles.
fn joint_probabilities(m: &DMatrix<C64>, x: &[f64]) -> [f64; 4] {
    let ua = rotation(x[0], x[1]);
    let ub = rotation(x[2], x[3]);
    let mut out = [0.0; 4];
    for a in 0..2 {
        for b in 0..2 {
            let v: [C64; 4] = [
                ua[0][a] * ub[0][b],
                ua[0][a] * ub[1][b],
                ua[1][a] * ub[0][b],
                ua[1][a] * ub[1][b],
            ];
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += v[i].conj() * m[(i, j)] * v[j];
                }
            }
            out[2 * a + b] = acc.re.max(0.0);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmidResult {
    pub value: f64,
    pub angles: MeasurementAngles,
    pub converged: bool,
}

/// Ameliorated MID: `inf_Π [I(ρ) − I(Π(ρ))]` over bilocal projective bases,
/// by multi-start Nelder-Mead over four angles. The MID basis is one of the
/// starts, so the result never exceeds [`mid`].
pub fn amid(rho: &DensityMatrix) -> Result<AmidResult> {
    let total = mutual_information(rho, &rho.sites()[..1])?;
    let m = rho.matrix().clone();
    let objective = |x: &[f64]| total - shannon_mutual_information(&joint_probabilities(&m, x));

    let mid_start = mid_angles(rho)?;
    let h = PI / 2.0;
    let mut starts: Vec<Vec<f64>> = vec![
        vec![mid_start.0[0].0, mid_start.0[0].1, mid_start.0[1].0, mid_start.0[1].1],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![h, 0.0, h, 0.0],
        vec![h, h, h, h],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a41d);
    for _ in 0..AMID_RANDOM_STARTS {
        starts.push(vec![
            rng.gen_range(0.0..PI),
            rng.gen_range(0.0..2.0 * PI),
            rng.gen_range(0.0..PI),
            rng.gen_range(0.0..2.0 * PI),
        ]);
    }
    let nm = NelderMead { f_tol: 1e-12, max_evals: 20_000, initial_step: 0.4, max_restarts: 6 };
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for x0 in &starts {
        let r = nm.minimize(objective, x0);
        if best.as_ref().is_none_or(|b| r.f < b.0) {
            best = Some((r.f, r.x, r.converged));
        }
    }
    let (value, x, converged) = best.expect("at least one start");
    Ok(AmidResult {
        value: value.max(0.0),
        angles: MeasurementAngles::from_flat(&x).canonical(),
        converged,
    })
}

/// Random X state: Dirichlet-like diagonal, coherences with random
/// magnitude up to the positivity bound and random phases.
pub fn random_x_state(seed: u64) -> XState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..4).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
    let sum: f64 = raw.iter().sum();
    let d = [raw[0] / sum, raw[1] / sum, raw[2] / sum, raw[3] / sum];
    let z14 = C64::from_polar(
        (d[0] * d[3]).sqrt() * rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..2.0 * PI),
    );
    let z23 = C64::from_polar(
        (d[1] * d[2]).sqrt() * rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..2.0 * PI),
    );
    XState::from_entries(d, z14, z23, [0, 1]).expect("positive by construction")
}

/// The three two-spin measures of one pair, as reported by sweeps and the
/// CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMeasures {
    pub discord: f64,
    pub mid: f64,
    pub amid: f64,
    pub amid_converged: bool,
}

pub fn pair_measures(gs: &PureState, i: usize, j: usize) -> Result<PairMeasures> {
    let x = reduced_two_spin(gs, i, j)?;
    let rho = x.density();
    let d = discord(rho, Direction::Symmetrized)?;
    let a = amid(rho)?;
    Ok(PairMeasures { discord: d.value, mid: mid(rho)?, amid: a.value, amid_converged: a.converged })
}
