use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring size {0} outside supported range 2..={max}", max = crate::hamiltonian::MAX_SITES)]
    Capacity(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("eigensolver failed to converge (residual norm {residual:.3e})")]
    Eigensolver { residual: f64 },

    #[error("ground space is degenerate inside the even fermion-parity sector (gap {gap:.3e})")]
    DegenerateGround { gap: f64 },

    #[error("odd fermion-parity sector has no closed-form dispersion here")]
    UnsupportedSector,

    #[error("quadrature did not reach tolerance {target:.1e} (achieved {achieved:.3e})")]
    Quadrature { target: f64, achieved: f64 },

    #[error("degenerate scaling fit: {0}")]
    DegenerateFit(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
