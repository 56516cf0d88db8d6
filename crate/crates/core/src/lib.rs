//! Exact ground states of periodic transverse-field Ising rings and the
//! quantum correlations they carry.
//!
//! The ring Hamiltonian is
//!
//! ```text
//! H = -J Σ_n σˣ_n σˣ_{n+1} + B Σ_n σᶻ_n,      σ_{N+1} ≡ σ_1
//! ```
//!
//! Ground states come from dense diagonalization of the two parity blocks.
//! On top of them the crate computes two-spin measures (discord, MID, AMID),
//! thermodynamic-limit correlators from Toeplitz determinants, global quantum
//! discord optimized over multi-local projective bases, and bipartition
//! entanglement statistics. [`sweep`] ties it together over grids of `B/J`.
//!
//! Basis convention used everywhere: site 1 is the most significant bit of a
//! basis index, bit value 0 is `|↑⟩` (σᶻ = +1) and bit value 1 is `|↓⟩`.

pub mod density;
pub mod entanglement;
pub mod error;
pub mod exec;
pub mod global_discord;
pub mod hamiltonian;
pub mod optimize;
pub mod quadrature;
pub mod states;
pub mod sweep;
pub mod toeplitz;
pub mod two_spin;

pub use density::{DensityMatrix, MeasurementAngles};
pub use error::{Error, Result};
pub use exec::ExecMode;
pub use global_discord::{GdResult, MeasuredSpectrum, OptimizerConfig};
pub use hamiltonian::{GroundState, PureState, RingConfig};
pub use sweep::{SweepConfig, SweepRow, SweepTable};

pub use num_complex::Complex64 as C64;
