//! Photon-modulated coherent states `(μâ + νâ†)^N |ζ⟩` of the generalized
//! isotonic oscillator.
//!
//! Every closed-form expression (normal-ordered expansion, Laguerre-form
//! normalization, moments, `A3`, squeezing identities, the s-parameterized
//! quasi-probability and fidelity) is implemented next to an independent
//! truncated Fock-space computation, so each formula can be checked against
//! brute-force linear algebra.
//!
//! Module map:
//!
//! * [`special`]: Laguerre, Hermite, 𝒫-Hermite and two-parameter Hermite
//!   polynomials, log-space factorials and binomials.
//! * [`fock`]: truncated ladder operators, coherent states, displacement,
//!   expectations and traces. This is the oracle substrate.
//! * [`weyl`]: normal-ordered series for `(μâ + νâ†)^N`, `(â†â)^j` and
//!   `e^{-λâ†â}`, and their reconstruction as dense matrices.
//! * [`states`]: construction of `|N, ζ⟩` and its normalization, both ways.
//! * [`nonclassicality`]: moments and `A3`, squeezing, quasi-probability,
//!   fidelity.
//! * [`wavefunctions`]: the position-space eigenfunctions of the potential.

pub mod error;
pub mod fock;
pub mod nonclassicality;
pub mod special;
pub mod states;
pub mod wavefunctions;
pub mod weyl;

pub use error::{Error, Result};
pub use fock::{FockOperator, FockVector, TruncationReport};
pub use nonclassicality::{A3Result, MomentSet, MomentSource, QuasiProbParams, SqueezingReport};
pub use num_complex::Complex64;
pub use states::{NormComparison, PMCState};
pub use weyl::{ModulationParams, NormalOrderedSeries};

/// Relative difference `|a - b| / |b|`, falling back to the absolute
/// difference when `b` is zero.
pub fn rel_gap(a: f64, b: f64) -> f64 {
    let diff = (a - b).abs();
    if b == 0.0 {
        diff
    } else {
        diff / b.abs()
    }
}
