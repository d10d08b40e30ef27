//! Nonclassicality diagnostics of `|N, ζ⟩`.
//!
//! Each quantity has an oracle evaluation on the truncated Fock basis and,
//! where a closed form exists, a `*_paper` evaluation of that closed form.
//! The closed forms inherit the diagonal-only normalization and are exact
//! only for `μ = 0`, `ν = 0` or `N = 0`.

mod fidelity;
mod moments;
mod quasiprob;
mod squeezing;

pub use fidelity::{fidelity_oracle, fidelity_paper};
pub use moments::{a3, moments_oracle, moments_paper, vector_moments, A3Result, MomentSet, MomentSource};
pub use quasiprob::{
    oracle_route, quasiprob_grid, quasiprob_oracle, quasiprob_oracle_via, quasiprob_paper, QuasiProbParams,
    QuasiProbRoute,
};
pub use squeezing::{squeezing_identities, uncertainty_product, vector_squeezing, SqueezingReport};
