use thiserror::Error;

/// Errors for state construction and entanglement-measure computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid party structure: {0}")]
    InvalidStructure(String),

    #[error("structure mismatch: {0} vs {1}")]
    StructureMismatch(String, String),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("not a density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("party index set invalid: {0}")]
    InvalidPartySet(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("malformed state descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
