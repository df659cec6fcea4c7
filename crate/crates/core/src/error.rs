use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dims(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("operator is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid Pauli data: {0}")]
    Pauli(String),
    #[error("generators do not commute: {0} and {1}")]
    NonCommuting(String, String),
    #[error("graph error: {0}")]
    Graph(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("not block-positive: minimum {value:.3e} over product states")]
    NotBlockPositive { value: f64, state: Vec<Vec<(f64, f64)>> },
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemRange { index: usize, count: usize },
    #[error("optimizer did not converge: {0}")]
    NoConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
