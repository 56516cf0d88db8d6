//! Ring Hamiltonian, exact ground state, and the free-fermion energy used to
//! cross-check it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Largest ring handled by dense diagonalization.
pub const MAX_SITES: usize = 12;

/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Physical definition of a periodic transverse-field Ising ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingConfig {
    pub n_sites: usize,
    pub coupling_j: f64,
    pub field_b: f64,
}

impl RingConfig {
    pub fn new(n_sites: usize, coupling_j: f64, field_b: f64) -> Result<Self> {
        if !(2..=MAX_SITES).contains(&n_sites) {
            return Err(Error::Capacity(n_sites));
        }
        // the diagonal reaches N·B and the ground energy N·(|J| + B)
        if !(n_sites as f64 * (coupling_j.abs() + field_b.abs())).is_finite() {
            return Err(Error::Config("couplings must be finite and the energy scale representable".into()));
        }
        if field_b < 0.0 {
            return Err(Error::Config(format!("field B = {field_b} must be non-negative")));
        }
        Ok(Self { n_sites, coupling_j, field_b })
    }

    /// `J = 1`, `B = ratio`.
    pub fn from_ratio(n_sites: usize, ratio: f64) -> Result<Self> {
        Self::new(n_sites, 1.0, ratio)
    }

    pub fn ratio(&self) -> Result<f64> {
        if self.coupling_j == 0.0 {
            return Err(Error::Config("B/J undefined for J = 0".into()));
        }
        Ok(self.field_b / self.coupling_j)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

/// Normalized state vector over the σᶻ product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_sites: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(n_sites: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if n_sites == 0 || n_sites > 24 || amplitudes.len() != 1 << n_sites {
            return Err(Error::Domain(format!(
                "{} amplitudes do not describe {n_sites} spins",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { n_sites, amplitudes })
    }

    /// Normalizes before validating.
    pub fn normalized(n_sites: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(n_sites, amplitudes)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// ⟨ψ|⊗σᶻ|ψ⟩.
    pub fn sz_parity(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if i.count_ones() % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }
}

/// Fermion-number parity after Jordan-Wigner: `(-1)^(number of up spins)`,
/// the eigenvalue of ⊗(−σᶻ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(index: usize, n_sites: usize) -> Self {
        let ups = n_sites as u32 - index.count_ones();
        if ups % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub state: PureState,
    pub energy: f64,
    pub parity: Parity,
    /// The lowest level was degenerate across parity sectors and the even
    /// sector was selected.
    pub degeneracy_resolved: bool,
}

/// Dense `2^N × 2^N` matrix of `-J Σ σˣσˣ + B Σ σᶻ` with periodic boundary.
/// For `N = 2` the bond between the two sites is counted twice.
pub fn build_hamiltonian(config: &RingConfig) -> Result<DMatrix<f64>> {
    let config = RingConfig::new(config.n_sites, config.coupling_j, config.field_b)?;
    let n = config.n_sites;
    let dim = config.dim();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = config.field_b * sz_sum(i, n);
        for site in 0..n {
            let j = i ^ bond_mask(site, n);
            h[(j, i)] -= config.coupling_j;
        }
    }
    Ok(h)
}

/// Ground state from dense diagonalization of both fermion-parity blocks.
///
/// A level shared by both blocks (within [`DEGENERACY_TOL`]) is resolved in
/// favor of the even block, which at `B = 0` yields the GHZ-like
/// `(|+…+⟩ ± |−…−⟩)/√2`. The largest-magnitude amplitude is made real
/// positive.
pub fn ground_state(config: &RingConfig) -> Result<GroundState> {
    let config = RingConfig::new(config.n_sites, config.coupling_j, config.field_b)?;
    let n = config.n_sites;
    let dim = config.dim();

    let even = lowest_in_sector(&config, Parity::Even)?;
    let odd = lowest_in_sector(&config, Parity::Odd)?;
    let shared = (even.energy - odd.energy).abs() <= DEGENERACY_TOL;
    let (chosen, parity) = if shared || even.energy < odd.energy {
        (even, Parity::Even)
    } else {
        (odd, Parity::Odd)
    };
    if chosen.gap <= DEGENERACY_TOL {
        return Err(Error::DegenerateGround { gap: chosen.gap });
    }

    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (&idx, &v) in chosen.indices.iter().zip(chosen.vector.iter()) {
        amps[idx] = C64::new(v, 0.0);
    }
    fix_phase(&mut amps);

    let residual = residual_norm(&config, &amps, chosen.energy);
    if residual > 1e-8 {
        return Err(Error::Eigensolver { residual });
    }
    let state = PureState::normalized(n, amps)?;
    Ok(GroundState { state, energy: chosen.energy, parity, degeneracy_resolved: shared })
}

/// Momenta and single-mode energies of one fermion-parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionSector {
    pub parity: Parity,
    pub momenta: Vec<f64>,
    pub dispersions: Vec<f64>,
}

impl FermionSector {
    /// Even sector: `φ_k = π(2k+1)/N`, `ε_k = √(J² + B² − 2JB cos φ_k)`.
    pub fn even(config: &RingConfig) -> Self {
        let n = config.n_sites as i64;
        let (j, b) = (config.coupling_j, config.field_b);
        let momenta: Vec<f64> = (-(n / 2)..n - n / 2)
            .map(|k| std::f64::consts::PI * (2 * k + 1) as f64 / n as f64)
            .collect();
        let dispersions = momenta
            .iter()
            .map(|phi| (j * j + b * b - 2.0 * j * b * phi.cos()).max(0.0).sqrt())
            .collect();
        Self { parity: Parity::Even, momenta, dispersions }
    }
}

/// Free-fermion vacuum energy `−Σ_k ε_k` of the even sector.
pub fn free_fermion_energy(config: &RingConfig, parity: Parity) -> Result<f64> {
    if parity == Parity::Odd {
        return Err(Error::UnsupportedSector);
    }
    if config.coupling_j <= 0.0 || config.field_b < 0.0 {
        return Err(Error::Config("free-fermion energy needs J > 0 and B ≥ 0".into()));
    }
    Ok(-FermionSector::even(config).dispersions.iter().sum::<f64>())
}

fn sz_sum(index: usize, n: usize) -> f64 {
    let downs = index.count_ones() as f64;
    n as f64 - 2.0 * downs
}

/// Bit mask flipping sites `site` and `site + 1 (mod N)`.
fn bond_mask(site: usize, n: usize) -> usize {
    let bit = |s: usize| 1usize << (n - 1 - s);
    bit(site) ^ bit((site + 1) % n)
}

struct SectorGround {
    indices: Vec<usize>,
    vector: DVector<f64>,
    energy: f64,
    gap: f64,
}

fn lowest_in_sector(config: &RingConfig, parity: Parity) -> Result<SectorGround> {
    let n = config.n_sites;
    let indices: Vec<usize> =
        (0..config.dim()).filter(|&i| Parity::of_index(i, n) == parity).collect();
    let mut position = vec![usize::MAX; config.dim()];
    for (p, &i) in indices.iter().enumerate() {
        position[i] = p;
    }
    let m = indices.len();
    let mut block = DMatrix::<f64>::zeros(m, m);
    for (col, &i) in indices.iter().enumerate() {
        block[(col, col)] = config.field_b * sz_sum(i, n);
        for site in 0..n {
            let row = position[i ^ bond_mask(site, n)];
            block[(row, col)] -= config.coupling_j;
        }
    }
    let eig = SymmetricEigen::try_new(block, f64::EPSILON, 0)
        .ok_or(Error::Eigensolver { residual: f64::NAN })?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energy = eig.eigenvalues[order[0]];
    let gap = if m > 1 { eig.eigenvalues[order[1]] - energy } else { f64::INFINITY };
    Ok(SectorGround { indices, vector: eig.eigenvectors.column(order[0]).into_owned(), energy, gap })
}

fn fix_phase(amps: &mut [C64]) {
    let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = amps.iter().position(|a| a.norm() >= max - 1e-9).unwrap_or(0);
    let phase = amps[pivot] / amps[pivot].norm();
    let rot = phase.conj();
    amps.iter_mut().for_each(|a| *a *= rot);
}

fn residual_norm(config: &RingConfig, amps: &[C64], energy: f64) -> f64 {
    let n = config.n_sites;
    let mut acc = 0.0;
    for (i, a) in amps.iter().enumerate() {
        let mut hv = *a * (config.field_b * sz_sum(i, n) - energy);
        for site in 0..n {
            hv -= amps[i ^ bond_mask(site, n)] * config.coupling_j;
        }
        acc += hv.norm_sqr();
    }
    acc.sqrt()
}
