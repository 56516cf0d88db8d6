//! Independent reference computations used by the integration tests.
//!
//! Nothing here goes through the optimized library paths: expectation values
//! are taken by applying Pauli strings to amplitude vectors, the global
//! objective is built from explicit `2^N × 2^N` dephased matrices, and the
//! large-ring ground state comes from a Lanczos iteration on the sparse
//! Hamiltonian.

#![allow(dead_code)]

use isingcorr::density::{dephase, partial_trace, relative_entropy, DensityMatrix, MeasurementAngles};
use isingcorr::{PureState, C64};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

pub const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// Apply `P` on `site` (site 0 is the most significant bit, bit 0 = spin up).
pub fn apply_pauli(amps: &[C64], n: usize, site: usize, p: Pauli) -> Vec<C64> {
    let bit = 1usize << (n - 1 - site);
    let i = C64::new(0.0, 1.0);
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for (k, &a) in amps.iter().enumerate() {
        let down = k & bit != 0;
        match p {
            Pauli::I => out[k] += a,
            Pauli::X => out[k ^ bit] += a,
            Pauli::Y => out[k ^ bit] += if down { -i * a } else { i * a },
            Pauli::Z => out[k] += if down { -a } else { a },
        }
    }
    out
}

/// `⟨ψ| ⊗ P |ψ⟩` for a Pauli string given as `(site, P)` pairs.
pub fn expectation(psi: &PureState, ops: &[(usize, Pauli)]) -> f64 {
    let n = psi.n_sites();
    let mut phi = psi.amplitudes().to_vec();
    for &(s, p) in ops {
        phi = apply_pauli(&phi, n, s, p);
    }
    psi.amplitudes().iter().zip(&phi).map(|(a, b)| a.conj() * b).sum::<C64>().re
}

fn pauli_matrix(p: Pauli) -> [[C64; 2]; 2] {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    match p {
        Pauli::I => [[o, z], [z, o]],
        Pauli::X => [[z, o], [o, z]],
        Pauli::Y => [[z, -i], [i, z]],
        Pauli::Z => [[o, z], [z, -o]],
    }
}

/// `ρ_ij = ¼ Σ_ab ⟨σᵃ_i σᵇ_j⟩ σᵃ ⊗ σᵇ` from directly computed expectations.
pub fn two_spin_from_expectations(psi: &PureState, i: usize, j: usize) -> DMatrix<C64> {
    let mut rho = DMatrix::<C64>::zeros(4, 4);
    for a in PAULIS {
        for b in PAULIS {
            let chi = expectation(psi, &[(i, a), (j, b)]);
            let (ma, mb) = (pauli_matrix(a), pauli_matrix(b));
            for r in 0..4 {
                for c in 0..4 {
                    rho[(r, c)] += ma[r >> 1][c >> 1] * mb[r & 1][c & 1] * (0.25 * chi);
                }
            }
        }
    }
    rho
}

/// `S(ρ ‖ Π(ρ)) − Σ_j S(ρ_j ‖ Π_j(ρ_j))` from explicit matrices.
pub fn full_matrix_gd_bracket(psi: &PureState, angles: &MeasurementAngles) -> f64 {
    let rho = DensityMatrix::from_pure(psi);
    let global = relative_entropy(&rho, &dephase(&rho, angles).unwrap()).unwrap();
    let local: f64 = (0..psi.n_sites())
        .map(|j| {
            let rj = partial_trace(&rho, &[j]).unwrap();
            let aj = MeasurementAngles::new(vec![angles.0[j]]);
            relative_entropy(&rj, &dephase(&rj, &aj).unwrap()).unwrap()
        })
        .sum();
    global - local
}

pub fn random_angles(n: usize, rng: &mut impl Rng) -> MeasurementAngles {
    MeasurementAngles::new(
        (0..n)
            .map(|_| (rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(0.0..2.0 * std::f64::consts::PI)))
            .collect(),
    )
}

/// `−J Σ σˣσˣ + B Σ σᶻ` applied to a real vector, ring of `n` sites.
pub fn apply_ring(v: &[f64], n: usize, j: f64, b: f64) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (k, &a) in v.iter().enumerate() {
        let ups = n as i64 - k.count_ones() as i64;
        out[k] += b * (2 * ups - n as i64) as f64 * a;
        for s in 0..n {
            let m = (1usize << (n - 1 - s)) | (1usize << (n - 1 - (s + 1) % n));
            out[k ^ m] -= j * a;
        }
    }
    out
}

/// Lowest eigenpair by Lanczos with full reorthogonalization.
pub fn lanczos_ground(n: usize, j: f64, b: f64, steps: usize) -> (f64, Vec<f64>) {
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut q: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= norm);

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut basis: Vec<Vec<f64>> = vec![q];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    for it in 0..steps {
        let mut w = apply_ring(&basis[it], n, j, b);
        alpha.push(dot(&w, &basis[it]));
        for v in &basis {
            let c = dot(&w, v);
            w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
        }
        let nb = dot(&w, &w).sqrt();
        if nb < 1e-12 || it + 1 == steps {
            break;
        }
        beta.push(nb);
        basis.push(w.into_iter().map(|x| x / nb).collect());
    }
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let k = (0..m).min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap();
    let y: DVector<f64> = eig.eigenvectors.column(k).into();
    let mut psi = vec![0.0; dim];
    for (i, v) in basis.iter().take(m).enumerate() {
        psi.iter_mut().zip(v).for_each(|(p, x)| *p += y[i] * x);
    }
    let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|x| *x /= norm);
    (eig.eigenvalues[k], psi)
}

/// `‖Hψ − Eψ‖`.
pub fn ring_residual(psi: &[f64], n: usize, j: f64, b: f64, e: f64) -> f64 {
    apply_ring(psi, n, j, b).iter().zip(psi).map(|(h, p)| (h - e * p).powi(2)).sum::<f64>().sqrt()
}

pub fn real_state(n: usize, psi: &[f64]) -> PureState {
    PureState::normalized(n, psi.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap()
}
