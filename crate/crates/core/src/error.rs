use thiserror::Error;

use crate::fock::TruncationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("{0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("intermediate magnitude overflow in {0}")]
    Overflow(&'static str),

    #[error(
        "truncation not converged at dimension {}: tail mass {:.3e}",
        .0.dimension, .0.tail_mass
    )]
    Truncation(TruncationReport),

    #[error("insufficient headroom: {0}")]
    Headroom(String),

    #[error("the state vector vanishes identically (e.g. â^N acting on the vacuum)")]
    DegenerateState,

    #[error("trace summand does not decay ({context}): tail fraction {tail_fraction:.3e}")]
    TraceDivergence { context: String, tail_fraction: f64 },

    #[error("matrix exponential did not converge: {0}")]
    ExpConvergence(String),

    #[error("A3 ratio undefined: det m = {det_m:e}, det mu = {det_mu:e}")]
    UndefinedRatio { det_m: f64, det_mu: f64 },

    #[error("closed-form quasi-probability is undefined at s = {s}")]
    UnsupportedOrdering { s: f64 },

    #[error("alternating sum is ill-conditioned: largest term / |sum| = {condition:.3e}")]
    IllConditioned { condition: f64 },

    #[error("quadrature under-resolved: refinement changed the result by {change:e}")]
    Quadrature { change: f64 },
}

impl Error {
    /// True for failures that come from numerical convergence (truncation,
    /// divergent traces, exponentials, quadrature) rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::Truncation(_)
                | Error::Headroom(_)
                | Error::TraceDivergence { .. }
                | Error::ExpConvergence(_)
                | Error::Quadrature { .. }
                | Error::IllConditioned { .. }
                | Error::Overflow(_)
        )
    }
}
