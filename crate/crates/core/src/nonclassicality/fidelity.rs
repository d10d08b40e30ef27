use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::coherent_state;
use crate::states::{abs_pow2, for_each_diagonal_term, paper_norm_sq, PMCState};
use crate::weyl::ModulationParams;

/// Closed-form fidelity
/// `𝒩² Σ_k Σ_l |μ|^{2k}|ν|^{2(N-k)} (N!)² (1/4)^l |ζ|^{2(N-2l)} / (l!(k-l)!(N-k-l)!)²`.
pub fn fidelity_paper(p: &ModulationParams, zeta: Complex64) -> Result<f64> {
    let mut total = 0.0;
    for_each_diagonal_term(p, |_, l, log_term| {
        total += log_term.exp() * abs_pow2(zeta.norm(), p.power() - 2 * l);
    })?;
    let value = total / paper_norm_sq(p, zeta)?;
    if !value.is_finite() {
        return Err(Error::Overflow("closed-form fidelity"));
    }
    Ok(value)
}

/// `|⟨ζ|N, ζ⟩|²` on the state's own basis.
pub fn fidelity_oracle(state: &PMCState) -> Result<f64> {
    let (coherent, _) = coherent_state(state.zeta, state.dim())?;
    Ok(coherent.inner(&state.vector).norm_sqr())
}
