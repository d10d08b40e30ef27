use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{density_and_trace, FockOperator, FockVector};
use crate::special::{falling_factorial, laguerre, ln_factorial};
use crate::states::{abs_pow2, for_each_diagonal_term, PMCState};
use crate::weyl::ModulationParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    PaperFormula,
    Oracle,
}

/// `m[j-1] = ⟨â†^j âʲ⟩` and `mu[j-1] = ⟨(â†â)^j⟩` for `j = 1..=4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub m: [f64; 4],
    pub mu: [f64; 4],
    pub source: MomentSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A3Result {
    pub det_m: f64,
    pub det_mu: f64,
    pub a3: f64,
}

fn diagonal_moment(v: &FockVector, label: &str, weight: impl Fn(usize) -> f64) -> Result<f64> {
    let op = FockOperator::diagonal(label, (0..v.dim()).map(|n| Complex64::new(weight(n), 0.0)));
    Ok(density_and_trace(v, &op)?.re)
}

/// Oracle moments of a normalized vector. Both operators are diagonal in
/// the number basis, `â†^j âʲ → n!/(n-j)!` and `(â†â)^j → n^j`.
pub fn vector_moments(v: &FockVector) -> Result<MomentSet> {
    let mut m = [0.0; 4];
    let mut mu = [0.0; 4];
    for j in 1..=4 {
        m[j - 1] = diagonal_moment(v, &format!("a†^{j}a^{j}"), |n| falling_factorial(n, j))?;
        mu[j - 1] = diagonal_moment(v, &format!("(a†a)^{j}"), |n| (n as f64).powi(j as i32))?;
    }
    Ok(MomentSet { m, mu, source: MomentSource::Oracle })
}

pub fn moments_oracle(state: &PMCState) -> Result<MomentSet> {
    vector_moments(&state.vector)
}

/// Closed-form moments. `T_i` is the normalization double sum with the
/// Laguerre order and factorial raised by `i`; then `m_j = T_j / T_0` and
/// `μ_j = Σ_i Σ_r (-1)^r (i-r)^j / (r!(i-r)!) · T_i / T_0`.
pub fn moments_paper(p: &ModulationParams, zeta: Complex64) -> Result<MomentSet> {
    let r = zeta.norm();
    let mut t = [0.0f64; 5];
    let mut failure = None;
    for_each_diagonal_term(p, |k, l, log_term| {
        let base = p.power() - k - l;
        for (i, ti) in t.iter_mut().enumerate() {
            match laguerre(base + i, -r * r) {
                Ok(lag) => *ti += (log_term + ln_factorial(base + i)).exp() * abs_pow2(r, k - l) * lag,
                Err(e) => failure = Some(e),
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if t.iter().any(|x| !x.is_finite()) {
        return Err(Error::Overflow("closed-form moments"));
    }
    let norm = t[0];
    let mut m = [0.0; 4];
    let mut mu = [0.0; 4];
    for j in 1..=4 {
        m[j - 1] = t[j] / norm;
        let mut acc = 0.0;
        for (i, ti) in t.iter().enumerate().take(j + 1) {
            let mut coeff = 0.0;
            for r in 0..=i {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                coeff += sign * ((i - r) as f64).powi(j as i32) / (ln_factorial(r) + ln_factorial(i - r)).exp();
            }
            acc += coeff * ti;
        }
        mu[j - 1] = acc / norm;
    }
    Ok(MomentSet { m, mu, source: MomentSource::PaperFormula })
}

fn hankel_det(x: &[f64; 4]) -> f64 {
    let [a, b, c, d] = *x;
    // | 1 a b |
    // | a b c |
    // | b c d |
    (b * d - c * c) - a * (a * d - c * b) + b * (a * c - b * b)
}

/// `A3 = det m / (det μ - det m)` from the two 3×3 moment matrices.
pub fn a3(ms: &MomentSet) -> Result<A3Result> {
    if ms.m.iter().chain(ms.mu.iter()).any(|x| !x.is_finite()) {
        return Err(Error::InvalidParams("non-finite moments".into()));
    }
    let det_m = hankel_det(&ms.m);
    let det_mu = hankel_det(&ms.mu);
    let denom = det_mu - det_m;
    if denom.abs() < 1e-12 {
        return Err(Error::UndefinedRatio { det_m, det_mu });
    }
    Ok(A3Result { det_m, det_mu, a3: det_m / denom })
}
