use num_complex::Complex64;

use crate::fock::FockVector;
use crate::states::PMCState;

/// Squeezing identities and quadrature variances for
/// `X = (â† + â)/√2`, `Y = i(â† - â)/√2`.
///
/// `I1 = 2(ΔX)² - 1` and `I2 = 2(ΔY)² - 1`, so a negative value means the
/// corresponding variance is below the coherent-state value 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingReport {
    pub i1: f64,
    pub i2: f64,
    pub var_x: f64,
    pub var_y: f64,
}

fn lower(x: &[Complex64]) -> Vec<Complex64> {
    let dim = x.len();
    (0..dim).map(|n| if n + 1 < dim { x[n + 1] * ((n + 1) as f64).sqrt() } else { Complex64::new(0.0, 0.0) }).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Squeezing report for a normalized vector.
pub fn vector_squeezing(v: &FockVector) -> SqueezingReport {
    let psi: Vec<Complex64> = v.amplitudes().to_vec();
    let a_psi = lower(&psi);
    let a2_psi = lower(&a_psi);
    let a = dot(&psi, &a_psi);
    let a2 = dot(&psi, &a2_psi);
    let ad = a.conj();
    let ad2 = a2.conj();
    let n = dot(&a_psi, &a_psi);

    let i1 = a2 + ad2 - a * a - ad * ad - 2.0 * a * ad + 2.0 * n;
    let i2 = -a2 - ad2 + a * a + ad * ad - 2.0 * a * ad + 2.0 * n;

    let mean_x = std::f64::consts::SQRT_2 * a.re;
    let mean_y = std::f64::consts::SQRT_2 * a.im;
    let var_x = a2.re + n.re + 0.5 - mean_x * mean_x;
    let var_y = -a2.re + n.re + 0.5 - mean_y * mean_y;
    SqueezingReport { i1: i1.re, i2: i2.re, var_x, var_y }
}

pub fn squeezing_identities(state: &PMCState) -> SqueezingReport {
    vector_squeezing(&state.vector)
}

/// `(ΔX)² (ΔY)²`.
pub fn uncertainty_product(state: &PMCState) -> f64 {
    let r = squeezing_identities(state);
    r.var_x * r.var_y
}
