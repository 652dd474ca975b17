use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (‖A − A†‖_F = {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge (off-diagonal norm {off_norm:.3e} after {rotations} rotations)")]
    NoConvergence { off_norm: f64, rotations: usize },

    #[error("spectral function undefined at eigenvalue {0:.6e}")]
    DomainError(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("matrix is not square or has the wrong number of entries")]
    NotSquare,

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("dimension {0} outside the supported range 1..=64")]
    UnsupportedDimension(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(&'static str),

    #[error("invalid channel: {0}")]
    InvalidChannel(&'static str),

    #[error("invalid POVM: {0}")]
    InvalidPovm(&'static str),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(&'static str),

    #[error("Hamiltonian energies must be strictly ascending")]
    DegenerateHamiltonian,

    #[error("invalid resource theory: {0}")]
    InvalidTheory(&'static str),

    #[error("channel pool is empty")]
    EmptyPool,

    #[error("decoder list is empty")]
    EmptyDecoderList,

    #[error("no default channel pool for this theory at dimension {0}")]
    UnsupportedDim(usize),

    #[error("instrument is not stochastically free for this theory")]
    NotStochasticallyFree,

    #[error("channel {0} in the pool is not a free operation")]
    NotFree(usize),

    #[error("support violation: an output with positive weight leaves the support of the average")]
    SupportViolation,
}

pub type Result<T> = std::result::Result<T, Error>;
