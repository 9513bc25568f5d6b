use thiserror::Error;

/// Error categories map onto the CLI exit codes: configuration (1),
/// numerical instability (2), I/O (3). Blow-up detection is a run
/// outcome, not an error.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("numerical instability at t = {t:.6e}, node {node} (r = {r:.6e})")]
    Instability { t: f64, node: usize, r: f64 },

    #[error(
        "quadrature did not converge at r = {r:.6e} (node {node}): error estimate {estimate:.3e}"
    )]
    Quadrature { node: usize, r: f64, estimate: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
