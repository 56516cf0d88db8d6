//! Reference states for tests, anchors and the CLI's synthetic input modes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hamiltonian::PureState;
use crate::C64;

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> PureState {
    let mut a = vec![C64::new(0.0, 0.0); 1 << n];
    a[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    a[(1 << n) - 1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::normalized(n, a).expect("valid GHZ state")
}

pub fn basis_state(n: usize, index: usize) -> PureState {
    let mut a = vec![C64::new(0.0, 0.0); 1 << n];
    a[index] = C64::new(1.0, 0.0);
    PureState::new(n, a).expect("valid basis state")
}

/// `|+⟩^⊗n`.
pub fn plus_state(n: usize) -> PureState {
    let dim = 1usize << n;
    let a = vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    PureState::normalized(n, a).expect("valid product state")
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus() -> PureState {
    ghz(2)
}

/// `(|01⟩ + |10⟩)/√2`.
pub fn bell_psi_plus() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    PureState::new(2, vec![z, C64::new(h, 0.0), C64::new(h, 0.0), z]).expect("valid Bell state")
}

/// Gaussian-random (Haar-distributed) pure state.
pub fn random_state(n: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = (0..1usize << n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::normalized(n, a).expect("nonzero random vector")
}

/// Random product state `⊗_s (cos(θ_s/2)|0⟩ + e^{iφ_s} sin(θ_s/2)|1⟩)`.
pub fn random_product_state(n: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps = vec![C64::new(1.0, 0.0)];
    for _ in 0..n {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let p: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let local = [C64::new((t / 2.0).cos(), 0.0), C64::from_polar((t / 2.0).sin(), p)];
        amps = amps.iter().flat_map(|a| local.iter().map(move |l| a * l)).collect();
    }
    PureState::normalized(n, amps).expect("valid product state")
}
