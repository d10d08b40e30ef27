//! Position-space eigenfunctions of the generalized isotonic oscillator
//! `V(x) = x² + 8(2x² - 1)/(2x² + 1)²`.
//!
//! `ψ_n(x) = N_n 𝒫_n(x) e^{-x²/2} / (1 + 2x²)` for `n = 0, 3, 4, ...`, with
//! `N_n = [(n-1)(n-2) / (2ⁿ n! √π)]^{1/2}` and `E_n = n - 3/2`.
//!
//! The eigenvalue equation is `½(-ψ'' + Vψ) = E_n ψ`; with the kinetic term
//! `-ψ''` and no factor ½ the residual does not vanish.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::special::{p_hermite, MAX_POLY_DEGREE};

/// Largest physical index supported (bounded by the 𝒫-Hermite degree cap).
pub const MAX_INDEX: usize = MAX_POLY_DEGREE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    n: usize,
    energy: f64,
    norm_const: f64,
}

impl EigenState {
    pub fn new(n: usize) -> Result<Self> {
        if n == 1 || n == 2 {
            return Err(Error::Domain(format!("n = {n} is not an eigenstate index (allowed: 0, 3, 4, ...)")));
        }
        if n > MAX_INDEX {
            return Err(Error::DegreeOverflow { degree: n, max: MAX_INDEX });
        }
        let nf = n as f64;
        let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        let ln_denom = nf * std::f64::consts::LN_2 + ln_fact + 0.5 * std::f64::consts::PI.ln();
        let norm_const = (0.5 * (((nf - 1.0) * (nf - 2.0)).ln() - ln_denom)).exp();
        Ok(EigenState { n, energy: nf - 1.5, norm_const })
    }

    pub fn n_physical(&self) -> usize {
        self.n
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    pub fn value(&self, x: f64) -> f64 {
        let p = p_hermite(self.n, x).expect("index validated on construction");
        self.norm_const * p * (-x * x / 2.0).exp() / (1.0 + 2.0 * x * x)
    }
}

pub fn potential(x: f64) -> f64 {
    let y = 2.0 * x * x;
    x * x + 8.0 * (y - 1.0) / ((y + 1.0) * (y + 1.0))
}

pub fn eigenfunction(n: usize, x: f64) -> Result<f64> {
    Ok(EigenState::new(n)?.value(x))
}

/// Composite Gauss-Legendre rule on `[-half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub half_width: f64,
    pub panels: usize,
    pub order: usize,
}

impl QuadratureSpec {
    /// A range and panel count adequate for indices up to `max_n`.
    pub fn for_index(max_n: usize) -> Self {
        QuadratureSpec { half_width: min_half_width(max_n) + 2.0, panels: 64, order: 16 }
    }

    pub fn refined(&self) -> Self {
        QuadratureSpec { panels: 2 * self.panels, ..*self }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let order = NonZeroUsize::new(self.order).ok_or_else(|| Error::InvalidParams("quadrature order 0".into()))?;
        if self.panels == 0 || !(self.half_width > 0.0) {
            return Err(Error::InvalidParams("quadrature needs panels > 0 and a positive range".into()));
        }
        let rule = GaussLegendre::new(order);
        let h = 2.0 * self.half_width / self.panels as f64;
        Ok((0..self.panels)
            .map(|i| {
                let a = -self.half_width + i as f64 * h;
                rule.integrate(a, a + h, &f)
            })
            .sum())
    }
}

fn min_half_width(max_n: usize) -> f64 {
    8f64.max((2.0 * max_n as f64).sqrt() + 4.0)
}

/// Tolerance on the change of an overlap integral under panel doubling.
pub const REFINEMENT_TOLERANCE: f64 = 1e-8;

/// `∫ ψ_{n1} ψ_{n2} dx`, checked against a refined rule.
pub fn orthonormality_check(n1: usize, n2: usize, spec: &QuadratureSpec) -> Result<f64> {
    let a = EigenState::new(n1)?;
    let b = EigenState::new(n2)?;
    let needed = min_half_width(n1.max(n2));
    if spec.half_width < needed {
        return Err(Error::InvalidParams(format!(
            "quadrature range ±{} is narrower than ±{needed}",
            spec.half_width
        )));
    }
    let f = |x: f64| a.value(x) * b.value(x);
    let coarse = spec.integrate(f)?;
    let fine = spec.refined().integrate(f)?;
    let change = (fine - coarse).abs();
    if change > REFINEMENT_TOLERANCE {
        return Err(Error::Quadrature { change });
    }
    Ok(fine)
}

/// Overlap matrix over `indices`.
pub fn overlap_matrix(indices: &[usize], spec: &QuadratureSpec) -> Result<Vec<Vec<f64>>> {
    indices
        .iter()
        .map(|&i| indices.iter().map(|&j| orthonormality_check(i, j, spec)).collect())
        .collect()
}

/// Normalization of the Hamiltonian used by [`schrodinger_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticConvention {
    /// `½(-ψ'' + Vψ) = Eψ`.
    Half,
    /// `-ψ'' + Vψ = Eψ`.
    Full,
}

/// `‖Hψ_n - E_n ψ_n‖ / ‖ψ_n‖` on a uniform grid over `[-half_width, half_width]`
/// with second-order central differences of step `h`.
pub fn schrodinger_residual(n: usize, h: f64, half_width: f64, convention: KineticConvention) -> Result<f64> {
    let state = EigenState::new(n)?;
    if !(h > 0.0) || !(half_width > h) {
        return Err(Error::InvalidParams("residual grid needs 0 < h < half_width".into()));
    }
    let scale = match convention {
        KineticConvention::Half => 0.5,
        KineticConvention::Full => 1.0,
    };
    let steps = (2.0 * half_width / h).round() as usize;
    let (mut res, mut norm) = (0.0, 0.0);
    for i in 1..steps {
        let x = -half_width + i as f64 * h;
        let (left, mid, right) = (state.value(x - h), state.value(x), state.value(x + h));
        let second = (left - 2.0 * mid + right) / (h * h);
        let r = scale * (-second + potential(x) * mid) - state.energy() * mid;
        res += r * r;
        norm += mid * mid;
    }
    Ok((res / norm).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_values() {
        assert_eq!(potential(0.0), -8.0);
        let v = potential(10.0) / 100.0;
        assert!(v > 1.0 && v < 1.01);
        assert!((potential(std::f64::consts::FRAC_1_SQRT_2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn index_validation() {
        assert!(EigenState::new(1).is_err());
        assert!(EigenState::new(2).is_err());
        let s = EigenState::new(0).unwrap();
        assert_eq!(s.energy(), -1.5);
        assert_eq!(EigenState::new(5).unwrap().energy(), 3.5);
    }

    #[test]
    fn eigenfunction_values() {
        let expect = (2.0 / std::f64::consts::PI.sqrt()).sqrt();
        assert!((eigenfunction(0, 0.0).unwrap() - expect).abs() < 1e-15);
        assert_eq!(eigenfunction(3, 0.0).unwrap(), 0.0);
        // the polynomial factor delays the decay: ψ_10(8) is still ~1e-8
        for n in [0, 3, 4, 5, 6] {
            assert!(eigenfunction(n, 8.0).unwrap().abs() < 1e-10);
        }
        for n in [0, 3, 4, 5, 6, 7, 8, 9, 10] {
            assert!(eigenfunction(n, 10.0).unwrap().abs() < 1e-10);
            assert!(eigenfunction(n, -10.0).unwrap().abs() < 1e-10);
            assert!(eigenfunction(n, 10.0).unwrap().abs() < eigenfunction(n, 8.0).unwrap().abs());
        }
    }

    #[test]
    fn parity() {
        for n in [0, 3, 4, 5, 6, 7] {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..80 {
                let x = 0.1 * i as f64;
                let (a, b) = (eigenfunction(n, x).unwrap(), eigenfunction(n, -x).unwrap());
                assert!((a - sign * b).abs() <= 1e-12 * a.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let spec = QuadratureSpec::for_index(7);
        assert!((orthonormality_check(0, 0, &spec).unwrap() - 1.0).abs() < 1e-8);
        assert!(orthonormality_check(3, 4, &spec).unwrap().abs() < 1e-8);
        assert!((orthonormality_check(3, 3, &spec).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn narrow_or_coarse_rules_are_rejected() {
        let narrow = QuadratureSpec { half_width: 5.0, panels: 64, order: 16 };
        assert!(matches!(orthonormality_check(0, 0, &narrow), Err(Error::InvalidParams(_))));
        let coarse = QuadratureSpec { half_width: 10.0, panels: 1, order: 4 };
        assert!(matches!(orthonormality_check(5, 5, &coarse), Err(Error::Quadrature { .. })));
    }

    #[test]
    fn half_convention_zeroes_the_residual() {
        for n in [0, 3, 4, 5] {
            let half = schrodinger_residual(n, 1e-3, 10.0, KineticConvention::Half).unwrap();
            let full = schrodinger_residual(n, 1e-3, 10.0, KineticConvention::Full).unwrap();
            assert!(half < 1e-4, "n={n}: {half}");
            assert!(full > 1e-1, "n={n}: {full}");
        }
    }
}
