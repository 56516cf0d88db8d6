//! Density-operator algebra: partial traces, entropies, relative entropy,
//! mutual information, local measurement bases and dephasing.
//!
//! All logarithms are base 2.
//!
//! Measurement bases are parameterized per site by `(θ, φ)`. The rotation
//! `R(θ, φ)` maps `|0⟩ ↦ cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` (Bloch direction
//! `(sinθ cosφ, sinθ sinφ, cosθ)`) and `|1⟩ ↦ −e^{−iφ} sin(θ/2)|0⟩ + cos(θ/2)|1⟩`.
//! The projectors of the measurement are `R|k⟩⟨k|R†`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::PureState;
use crate::C64;

/// Eigenvalues in `[-CLIP_TOL, 0]` are noise and are clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;

pub type Mat2 = [[C64; 2]; 2];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Hermitian, unit-trace, positive-semidefinite matrix over a list of sites.
/// `sites[0]` is the most significant bit of the matrix index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
    sites: Vec<usize>,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity and trace. Positivity is checked when the
    /// spectrum is first needed (see [`DensityMatrix::eigenvalues`]).
    pub fn new(matrix: DMatrix<C64>, sites: Vec<usize>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || sites.is_empty() || dim != 1 << sites.len() {
            return Err(Error::InvalidState(format!(
                "{}x{} matrix for {} sites",
                matrix.nrows(),
                matrix.ncols(),
                sites.len()
            )));
        }
        let mut seen = sites.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != sites.len() {
            return Err(Error::InvalidState("repeated site label".into()));
        }
        let herm = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (matrix[(i, j)] - matrix[(j, i)].conj()).norm())
            .fold(0.0, f64::max);
        if herm > 1e-12 {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.2e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(Self { matrix, sites })
    }

    /// `|ψ⟩⟨ψ|` over sites `0..N`.
    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        let dim = a.len();
        let matrix = DMatrix::from_fn(dim, dim, |i, j| a[i] * a[j].conj());
        Self { matrix, sites: (0..psi.n_sites()).collect() }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64], sites: Vec<usize>) -> Result<Self> {
        let dim = probs.len();
        let matrix = DMatrix::from_fn(dim, dim, |i, j| if i == j { C64::new(probs[i], 0.0) } else { ZERO });
        Self::new(matrix, sites)
    }

    /// `1/2^n` on the diagonal.
    pub fn maximally_mixed(sites: Vec<usize>) -> Self {
        let dim = 1usize << sites.len();
        let p = 1.0 / dim as f64;
        let matrix = DMatrix::from_fn(dim, dim, |i, j| if i == j { C64::new(p, 0.0) } else { ZERO });
        Self { matrix, sites }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Relabel sites without touching the matrix.
    pub fn with_sites(mut self, sites: Vec<usize>) -> Result<Self> {
        if sites.len() != self.sites.len() {
            return Err(Error::Domain("relabeling changes the site count".into()));
        }
        self.sites = sites;
        Ok(self)
    }

    /// Spectrum with noise-level negatives clipped to zero. Values below
    /// `-CLIP_TOL` are reported as an invalid state.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let vals = hermitian_eigen(&self.matrix).0;
        clip_spectrum(vals)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `‖ρ − σ‖_max`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Exchange the order of the two sites of a two-site state.
    pub fn swapped(&self) -> Result<Self> {
        if self.n_sites() != 2 {
            return Err(Error::Domain("swap needs a two-site state".into()));
        }
        let perm = [0usize, 2, 1, 3];
        let m = DMatrix::from_fn(4, 4, |i, j| self.matrix[(perm[i], perm[j])]);
        Ok(Self { matrix: m, sites: vec![self.sites[1], self.sites[0]] })
    }

    fn position_of(&self, label: usize) -> Result<usize> {
        self.sites
            .iter()
            .position(|&s| s == label)
            .ok_or_else(|| Error::Domain(format!("site {label} not in state")))
    }
}

/// Hermitian eigendecomposition; eigenvalues ascending with matching columns.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

fn clip_spectrum(vals: Vec<f64>) -> Result<Vec<f64>> {
    vals.into_iter()
        .map(|v| {
            if v < -CLIP_TOL {
                Err(Error::InvalidState(format!("negative eigenvalue {v:.3e}")))
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

/// `−Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}

/// Reduce to the sites in `keep`. The result lists them in the order they
/// appear in `rho`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::Domain("partial trace must keep at least one site".into()));
    }
    let n = rho.n_sites();
    let mut keep_pos = Vec::with_capacity(keep.len());
    for &label in keep {
        keep_pos.push(rho.position_of(label)?);
    }
    keep_pos.sort_unstable();
    keep_pos.dedup();
    if keep_pos.len() != keep.len() {
        return Err(Error::Domain("repeated site in keep set".into()));
    }
    let traced: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();
    let k = keep_pos.len();
    let t = traced.len();
    let embed = |kept: usize, env: usize| -> usize {
        let mut idx = 0usize;
        for (b, &p) in keep_pos.iter().enumerate() {
            if kept >> (k - 1 - b) & 1 == 1 {
                idx |= 1 << (n - 1 - p);
            }
        }
        for (b, &p) in traced.iter().enumerate() {
            if env >> (t - 1 - b) & 1 == 1 {
                idx |= 1 << (n - 1 - p);
            }
        }
        idx
    };
    let dk = 1usize << k;
    let mut out = DMatrix::<C64>::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = ZERO;
            for e in 0..1usize << t {
                acc += rho.matrix[(embed(i, e), embed(j, e))];
            }
            out[(i, j)] = acc;
        }
    }
    let sites = keep_pos.iter().map(|&p| rho.sites[p]).collect();
    Ok(DensityMatrix { matrix: out, sites })
}

/// Reduced state of a pure state on `keep` (labels are site indices
/// `0..N`), computed as `M M†` from the reshaped amplitude vector.
pub fn reduced_from_pure(psi: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let n = psi.n_sites();
    if keep.is_empty() {
        return Err(Error::Domain("reduced state needs at least one site".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&s| s >= n) {
        return Err(Error::Domain(format!("invalid site subset {keep:?} for {n} sites")));
    }
    let m = reshape_split(psi, &keep_sorted);
    let rho = &m * m.adjoint();
    Ok(DensityMatrix { matrix: rho, sites: keep_sorted })
}

/// Amplitudes as a `2^|keep| × 2^(N−|keep|)` matrix.
pub(crate) fn reshape_split(psi: &PureState, keep_sorted: &[usize]) -> DMatrix<C64> {
    let n = psi.n_sites();
    let env: Vec<usize> = (0..n).filter(|s| !keep_sorted.contains(s)).collect();
    let k = keep_sorted.len();
    let e = env.len();
    let mut m = DMatrix::<C64>::zeros(1 << k, 1 << e);
    for (idx, amp) in psi.amplitudes().iter().enumerate() {
        let bit = |s: usize| (idx >> (n - 1 - s)) & 1;
        let row = keep_sorted.iter().fold(0, |acc, &s| (acc << 1) | bit(s));
        let col = env.iter().fold(0, |acc, &s| (acc << 1) | bit(s));
        m[(row, col)] = *amp;
    }
    m
}

/// `S(ρ) = −Tr ρ log₂ ρ`, bounded to `[0, log₂ dim]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = rho.eigenvalues()?;
    let max = (rho.dim() as f64).log2();
    Ok(shannon_entropy(&vals).clamp(0.0, max))
}

/// `S(ρ‖σ) = Tr ρ log₂ ρ − Tr ρ log₂ σ`. Returns `f64::INFINITY` when the
/// support of `ρ` is not contained in that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Domain("relative entropy of states with different dimensions".into()));
    }
    let (svals, svecs) = hermitian_eigen(&sigma.matrix);
    let svals = clip_spectrum(svals)?;
    let neg_entropy = -von_neumann_entropy(rho)?;
    let mut cross = 0.0;
    for (k, &s) in svals.iter().enumerate() {
        let v = svecs.column(k);
        let weight = (v.adjoint() * &rho.matrix * v)[(0, 0)].re;
        if weight <= 1e-12 {
            continue;
        }
        if s <= 1e-14 {
            return Ok(f64::INFINITY);
        }
        cross += weight * s.log2();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)` for the cut `part_a | rest`.
pub fn mutual_information(rho: &DensityMatrix, part_a: &[usize]) -> Result<f64> {
    let part_b: Vec<usize> = rho.sites.iter().copied().filter(|s| !part_a.contains(s)).collect();
    if part_a.is_empty() || part_b.is_empty() || part_a.len() + part_b.len() != rho.n_sites() {
        return Err(Error::Domain(format!("invalid cut {part_a:?} of sites {:?}", rho.sites)));
    }
    let sa = von_neumann_entropy(&partial_trace(rho, part_a)?)?;
    let sb = von_neumann_entropy(&partial_trace(rho, &part_b)?)?;
    let sab = von_neumann_entropy(rho)?;
    Ok((sa + sb - sab).max(0.0))
}

/// One `(θ, φ)` pair per measured site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAngles(pub Vec<(f64, f64)>);

impl MeasurementAngles {
    pub fn new(pairs: Vec<(f64, f64)>) -> Self {
        Self(pairs)
    }

    pub fn uniform(n: usize, theta: f64, phi: f64) -> Self {
        Self(vec![(theta, phi); n])
    }

    /// σᶻ eigenbasis on every site.
    pub fn z(n: usize) -> Self {
        Self::uniform(n, 0.0, 0.0)
    }

    /// σˣ eigenbasis on every site.
    pub fn x(n: usize) -> Self {
        Self::uniform(n, PI / 2.0, 0.0)
    }

    /// `[θ₀, φ₀, θ₁, φ₁, …]`.
    pub fn from_flat(flat: &[f64]) -> Self {
        Self(flat.chunks_exact(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Same projectors with `θ ∈ [0, π]` and `φ ∈ [0, 2π)`.
    pub fn canonical(&self) -> Self {
        Self(self.0.iter().map(|&(t, p)| canonical_pair(t, p)).collect())
    }

    pub fn rotations(&self) -> Vec<Mat2> {
        self.0.iter().map(|&(t, p)| rotation(t, p)).collect()
    }
}

fn canonical_pair(theta: f64, phi: f64) -> (f64, f64) {
    let two_pi = 2.0 * PI;
    let mut t = theta.rem_euclid(two_pi);
    let mut p = phi;
    if t > PI {
        t = two_pi - t;
        p += PI;
    }
    (t, p.rem_euclid(two_pi))
}

/// Columns are the rotated basis vectors `R|0⟩`, `R|1⟩`.
pub fn rotation(theta: f64, phi: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = C64::from_polar(1.0, phi);
    [[C64::new(c, 0.0), -e.conj() * s], [e * s, C64::new(c, 0.0)]]
}

pub fn adjoint2(u: &Mat2) -> Mat2 {
    [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]]
}

/// Left-multiply the rows of `m` by `u` acting on bit position `pos` of `n`.
fn apply_left(m: &mut DMatrix<C64>, u: &Mat2, pos: usize, n: usize) {
    let bit = 1usize << (n - 1 - pos);
    for col in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i & bit != 0 {
                continue;
            }
            let (a, b) = (m[(i, col)], m[(i | bit, col)]);
            m[(i, col)] = u[0][0] * a + u[0][1] * b;
            m[(i | bit, col)] = u[1][0] * a + u[1][1] * b;
        }
    }
}

/// `U ρ U†` with `U = ⊗ u_s`.
fn conjugate_local(m: &DMatrix<C64>, us: &[Mat2]) -> DMatrix<C64> {
    let n = us.len();
    let mut out = m.clone();
    for (pos, u) in us.iter().enumerate() {
        apply_left(&mut out, u, pos, n);
    }
    let mut out = out.adjoint();
    for (pos, u) in us.iter().enumerate() {
        apply_left(&mut out, u, pos, n);
    }
    out.adjoint()
}

/// Complete local projective measurement without readout:
/// `Π(ρ) = Σ_k P_k ρ P_k` with `P_k = R|k⟩⟨k|R†`.
pub fn dephase(rho: &DensityMatrix, angles: &MeasurementAngles) -> Result<DensityMatrix> {
    if angles.len() != rho.n_sites() {
        return Err(Error::Domain(format!(
            "{} angle pairs for {} sites",
            angles.len(),
            rho.n_sites()
        )));
    }
    let rots = angles.rotations();
    let adj: Vec<Mat2> = rots.iter().map(adjoint2).collect();
    let rotated = conjugate_local(&rho.matrix, &adj);
    let dim = rho.dim();
    let diag = DMatrix::from_fn(dim, dim, |i, j| if i == j { C64::new(rotated[(i, i)].re, 0.0) } else { ZERO });
    let back = conjugate_local(&diag, &rots);
    // restore exact Hermiticity lost to rounding
    let herm = (&back + back.adjoint()) * C64::new(0.5, 0.0);
    Ok(DensityMatrix { matrix: herm, sites: rho.sites.clone() })
}

/// Diagonal of `R† ρ R`: outcome probabilities of the local measurement.
pub fn measurement_probabilities(rho: &DensityMatrix, angles: &MeasurementAngles) -> Result<Vec<f64>> {
    if angles.len() != rho.n_sites() {
        return Err(Error::Domain("angle count mismatch".into()));
    }
    let adj: Vec<Mat2> = angles.rotations().iter().map(adjoint2).collect();
    let rotated = conjugate_local(&rho.matrix, &adj);
    Ok((0..rho.dim()).map(|i| rotated[(i, i)].re.max(0.0)).collect())
}
