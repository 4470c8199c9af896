use thiserror::Error;

/// Failures raised by the kernels, the oracle and the command front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("temperature too high / unphysical: βħω = {beta_hw} (must be >= {floor:e})")]
    Temperature { beta_hw: f64, floor: f64 },

    #[error("quadrature order {0} outside 1..=512")]
    QuadratureOrder(usize),

    #[error("number-state index {n} exceeds the configured cap {cap}")]
    NumberCap { n: usize, cap: usize },

    #[error("matrix exponential did not converge after {terms} terms (residual estimate {residual:e})")]
    NonConvergence { terms: usize, residual: f64 },

    #[error("Fock cutoff {cutoff} too small: truncation deficit {deficit:e} exceeds {ceiling:e}")]
    CutoffTooSmall { cutoff: usize, deficit: f64, ceiling: f64 },

    #[error("density {value:e} at x = {x} is below the negativity floor")]
    NegativeDensity { x: f64, value: f64 },

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, ThermoError>;

impl From<std::io::Error> for ThermoError {
    fn from(e: std::io::Error) -> Self {
        ThermoError::Io(e.to_string())
    }
}
