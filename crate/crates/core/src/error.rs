use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A linear-algebra step or iterative routine failed numerically.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The truncated Fock expansion does not capture enough of the state.
    #[error(
        "Fock cutoff {cutoff} captures norm {captured_norm:.3e}, below the required {required:.3e}"
    )]
    InsufficientCutoff {
        cutoff: usize,
        captured_norm: f64,
        required: f64,
    },

    #[error("optimizer did not converge (best tau0 = {tau0}, u = {u}, fidelity = {fidelity})")]
    NoConvergence { tau0: f64, u: f64, fidelity: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
