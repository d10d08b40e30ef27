//! s-parameterized quasi-probability
//! `F(γ, s) = (2/(1-s)) Σ_n wⁿ |⟨n|D(-γ)|ψ⟩|²` with `w = (s+1)/(s-1)`.
//!
//! At `s = -1` this is the Husimi function `|⟨γ|ψ⟩|²` (peak value 1 for a
//! coherent state), and at `s = 0` it is twice the displaced parity.
//!
//! For `|w| ≤ 1` the sum is a convergent trace on the truncated basis. For
//! `|w| > 1` the weights grow without bound and the truncated trace is
//! unusable, so the amplitudes are generated analytically instead: the state
//! is a polynomial in `â†` acting on `|ζ⟩`, and displacing it gives a
//! polynomial acting on `|ζ - γ⟩` whose number-basis amplitudes are summed in
//! log space until they decay.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{density_and_trace, displace, recommended_dim, FockOperator, TAIL_TOLERANCE};
use crate::special::laguerre;
use crate::states::{abs_pow2, creation_polynomial, for_each_diagonal_term, PMCState};
use crate::weyl::ModulationParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiProbParams {
    pub gamma: Complex64,
    pub s: f64,
}

impl QuasiProbParams {
    pub fn new(gamma: Complex64, s: f64) -> Result<Self> {
        if !s.is_finite() || !gamma.re.is_finite() || !gamma.im.is_finite() {
            return Err(Error::InvalidParams("γ and s must be finite".into()));
        }
        if s == 1.0 {
            return Err(Error::UnsupportedOrdering { s });
        }
        Ok(QuasiProbParams { gamma, s })
    }

    /// Diagonal weight base `w = (s+1)/(s-1)`.
    pub fn weight_base(&self) -> f64 {
        (self.s + 1.0) / (self.s - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiProbRoute {
    /// Truncated trace with the displacement applied to the state vector.
    DenseTrace,
    /// Analytic number-basis amplitudes of the displaced state.
    CoherentExpansion,
}

pub fn oracle_route(s: f64) -> QuasiProbRoute {
    if ((s + 1.0) / (s - 1.0)).abs() <= 1.0 {
        QuasiProbRoute::DenseTrace
    } else {
        QuasiProbRoute::CoherentExpansion
    }
}

pub fn quasiprob_oracle(state: &PMCState, q: &QuasiProbParams) -> Result<f64> {
    quasiprob_oracle_via(state, q, oracle_route(q.s))
}

/// Oracle evaluation through an explicitly chosen route. The dense route
/// fails with a trace-divergence error when `|w| > 1`.
pub fn quasiprob_oracle_via(state: &PMCState, q: &QuasiProbParams, route: QuasiProbRoute) -> Result<f64> {
    if q.s == 1.0 {
        return Err(Error::UnsupportedOrdering { s: q.s });
    }
    match route {
        QuasiProbRoute::DenseTrace => dense_trace(state, q),
        QuasiProbRoute::CoherentExpansion => coherent_expansion(&state.params, state.zeta, q),
    }
}

/// Evaluates the oracle at every point, in parallel; results keep the input
/// order.
pub fn quasiprob_grid(state: &PMCState, points: &[QuasiProbParams]) -> Vec<Result<f64>> {
    points.par_iter().map(|q| quasiprob_oracle(state, q)).collect()
}

fn dense_trace(state: &PMCState, q: &QuasiProbParams) -> Result<f64> {
    let reach = state.zeta.norm() + q.gamma.norm();
    let dim = recommended_dim(reach, state.params.power()).max(state.dim());
    let v = state.vector.embed(dim)?;
    let shifted = displace(-q.gamma, &v)?;
    shifted.truncation_report(TAIL_TOLERANCE).into_result()?;
    let w = q.weight_base();
    let weights = FockOperator::diagonal(
        format!("w^n, w = {w}"),
        (0..dim).map(|n| Complex64::new(w.powi(n as i32), 0.0)),
    );
    let trace = density_and_trace(&shifted, &weights)?;
    Ok(2.0 / (1.0 - q.s) * trace.re / shifted.norm_sq())
}

const MAX_LEVELS: usize = 8192;
/// Terms below `e^{-DECAY_MARGIN}` of the running maximum are negligible.
const DECAY_MARGIN: f64 = 46.0;
const MAX_CONDITION: f64 = 1e10;

fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + logs.iter().map(|l| (l - max).exp()).sum::<f64>().ln()
}

fn coherent_expansion(p: &ModulationParams, zeta: Complex64, q: &QuasiProbParams) -> Result<f64> {
    let b = creation_polynomial(p, zeta);
    let deg = b.len() - 1;
    let gc = q.gamma.conj();
    // (â† + γ*)^k expanded binomially
    let d: Vec<Complex64> = (0..=deg)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut binom = 1.0;
            for k in j..=deg {
                if k > j {
                    binom = binom * k as f64 / (k - j) as f64;
                }
                acc += b[k] * binom * gc.powu((k - j) as u32);
            }
            acc
        })
        .collect();
    let log_d: Vec<(f64, f64)> = d.iter().map(|z| (z.norm().ln(), z.arg())).collect();
    let beta = zeta - q.gamma;
    let (log_beta, arg_beta) = (beta.norm().ln(), beta.arg());
    let beta_zero = beta.norm() < 1e-300;

    let w = q.weight_base();
    let log_w = w.abs().ln();
    let negative_w = w < 0.0;

    // log |a_n|² up to the constant -|β|², and log of the weighted term.
    // Stopping uses the envelope Σ|terms|, which cannot vanish accidentally.
    let mut log_amp = Vec::new();
    let mut ln_fact = vec![0.0f64];
    let (mut max_env, mut prev_env) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut converged = false;
    for n in 0..MAX_LEVELS {
        if n > 0 {
            let prev = ln_fact[n - 1];
            ln_fact.push(prev + (n as f64).ln());
        }
        let (la, env) = if beta_zero {
            let la = if n <= deg { 2.0 * log_d[n].0 + ln_fact[n] } else { f64::NEG_INFINITY };
            (la, la)
        } else {
            let lo = n.saturating_sub(deg);
            let logs: Vec<(f64, f64)> = (lo..=n)
                .map(|m| {
                    let (ld, ad) = log_d[n - m];
                    (ld + m as f64 * log_beta - ln_fact[m], ad + m as f64 * arg_beta)
                })
                .collect();
            let top = logs.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
            if top == f64::NEG_INFINITY {
                (f64::NEG_INFINITY, f64::NEG_INFINITY)
            } else {
                let sum: Complex64 = logs.iter().map(|&(l, ph)| Complex64::from_polar((l - top).exp(), ph)).sum();
                let abs_sum: f64 = logs.iter().map(|&(l, _)| (l - top).exp()).sum();
                (2.0 * (top + sum.norm().ln()) + ln_fact[n], 2.0 * (top + abs_sum.ln()) + ln_fact[n])
            }
        };
        let weight = |l: f64| if w == 0.0 { if n == 0 { l } else { f64::NEG_INFINITY } } else { l + n as f64 * log_w };
        let lw = weight(la);
        let env_w = weight(env).max(env);
        max_env = max_env.max(env_w);
        log_amp.push((la, lw));
        if n > deg && env_w <= prev_env && env_w < max_env - DECAY_MARGIN {
            converged = true;
            break;
        }
        prev_env = env_w;
    }
    if !converged {
        return Err(Error::TraceDivergence {
            context: format!("weighted amplitudes at s = {} did not decay within {MAX_LEVELS} levels", q.s),
            tail_fraction: 1.0,
        });
    }

    let log_norm = log_sum_exp(&log_amp.iter().map(|t| t.0).collect::<Vec<_>>());
    let max_weighted = log_amp.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let mut signed = 0.0;
    let mut absolute = 0.0;
    for (n, &(_, lw)) in log_amp.iter().enumerate() {
        let t = (lw - max_weighted).exp();
        absolute += t;
        signed += if negative_w && n % 2 == 1 { -t } else { t };
    }
    if signed.abs() * MAX_CONDITION < absolute {
        return Err(Error::IllConditioned { condition: absolute / signed.abs() });
    }
    let log_ratio = max_weighted - log_norm;
    let value = 2.0 / (1.0 - q.s) * signed * log_ratio.exp();
    if !value.is_finite() {
        return Err(Error::Overflow("weighted displaced amplitudes"));
    }
    Ok(value)
}

/// Closed form of the quasi-probability, evaluated as printed:
///
/// `2𝒩²|ν|^{2N}(N!)²/(π²(1-s)) · exp[-((2+s)/s)(|γ|²+|ζ|²) + ((s+1)/s)(γ*ζ+γζ*)]
///  · Σ_k Σ_l (|μ|/|ν|)^{2k} (1/4)^l |ζ|^{2(k-l)} (N-k-l)! / (l!(k-l)!(N-k-l)!)²
///  · ((s-2)/s)^{N-k-l} ℒ_{N-k-l}[2|γ|²/(s+2) - ((2+s)/s)|γ|² + ((s+1)/s)(γ*ζ+γζ*)]`.
///
/// Undefined at `s ∈ {-2, 0, 1}`.
pub fn quasiprob_paper(p: &ModulationParams, zeta: Complex64, q: &QuasiProbParams) -> Result<f64> {
    let s = q.s;
    if s == 0.0 || s == 1.0 || s == -2.0 {
        return Err(Error::UnsupportedOrdering { s });
    }
    let g2 = q.gamma.norm_sqr();
    let cross = 2.0 * (q.gamma.conj() * zeta).re;
    let exponent = -(2.0 + s) / s * (g2 + zeta.norm_sqr()) + (s + 1.0) / s * cross;
    let arg = 2.0 * g2 / (s + 2.0) - (2.0 + s) / s * g2 + (s + 1.0) / s * cross;
    let ratio = (s - 2.0) / s;

    let mut total = 0.0;
    let mut failure = None;
    for_each_diagonal_term(p, |k, l, log_term| {
        let order = p.power() - k - l;
        match laguerre(order, arg) {
            Ok(lag) => {
                let fact: f64 = (1..=order).map(|i| i as f64).product();
                total += log_term.exp() * abs_pow2(zeta.norm(), k - l) * fact * ratio.powi(order as i32) * lag;
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let norm_sq = crate::states::paper_norm_sq(p, zeta)?;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let value = 2.0 / (pi2 * (1.0 - s)) * exponent.exp() * total / norm_sq;
    if !value.is_finite() {
        return Err(Error::Overflow("closed-form quasi-probability"));
    }
    Ok(value)
}
