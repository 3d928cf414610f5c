use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid motif: {0}")]
    InvalidMotif(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration cap exceeded: {required:.3e} items requested, cap is {cap:.3e}")]
    CapExceeded { required: f64, cap: f64 },
    #[error("no homomorphism exists: t(F,G) = 0")]
    NoHomomorphism,
    #[error("initialization failed after {0} tries; t(F,G) may be 0")]
    InitializationFailed(usize),
    #[error("motif is not a rooted tree")]
    NotRootedTree,
    #[error("node {0} has zero out-mass")]
    ZeroOutMass(usize),
    #[error("network is not symmetric")]
    Asymmetric,
    #[error("network is reducible")]
    Reducible,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input or configuration, as opposed to
    /// numerical or sampling failures.
    pub fn is_config_error(&self) -> bool {
        !matches!(
            self,
            Error::NoHomomorphism
                | Error::InitializationFailed(_)
                | Error::Numerical(_)
                | Error::Reducible
                | Error::ZeroOutMass(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
