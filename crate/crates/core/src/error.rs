use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Something went wrong numerically (overflow, exhausted scan, failed
    /// factorisation). `op` names the failing operation.
    #[error("numerical failure in {op}: {detail}")]
    Numerical { op: &'static str, detail: String },

    /// The fixed-point map Ψ has a pole at `lambda`.
    #[error("pole of Psi at lambda = {lambda} (n = {n}, ell = {ell})")]
    Pole { n: u32, ell: u32, lambda: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate null space: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn numerical(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            op,
            detail: detail.into(),
        }
    }
}
