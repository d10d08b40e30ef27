//! Special functions and combinatorial coefficients.
//!
//! Polynomials are evaluated by their three-term recurrences. Factorial-type
//! coefficients in the multi-index sums are carried as logarithms so that
//! `(N!)^2`-sized prefactors never overflow before they are combined.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest polynomial degree accepted by [`laguerre`], [`hermite`] and
/// [`p_hermite`].
pub const MAX_POLY_DEGREE: usize = 64;
/// Largest index accepted by [`two_param_hermite`].
pub const MAX_TWO_PARAM_DEGREE: usize = 32;
/// Largest argument accepted by [`log_factorial`] and [`log_binomial`].
pub const MAX_FACTORIAL_ARG: usize = 128;

/// A polynomial value together with the largest intermediate magnitude seen
/// while computing it. `value / condition_hint` far below one means the
/// result was formed by cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialEval<T> {
    pub value: T,
    pub condition_hint: f64,
}

/// Signed logarithmic representation of a coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCoeff {
    pub log_magnitude: f64,
    /// `+1`, `-1` or `0` (in which case `log_magnitude` is `-inf`).
    pub sign: i8,
    /// The exact value, when it is an integer representable in an `f64`.
    pub exact: Option<f64>,
}

impl LogCoeff {
    pub fn zero() -> Self {
        LogCoeff { log_magnitude: f64::NEG_INFINITY, sign: 0, exact: Some(0.0) }
    }

    fn from_integer(v: u128) -> Self {
        if v == 0 {
            return Self::zero();
        }
        let f = v as f64;
        let exact = (v < (1u128 << f64::MANTISSA_DIGITS) || f as u128 == v).then_some(f);
        LogCoeff { log_magnitude: f.ln(), sign: 1, exact }
    }

    pub fn value(&self) -> f64 {
        match self.exact {
            Some(v) => v,
            None => f64::from(self.sign) * self.log_magnitude.exp(),
        }
    }
}

fn check_degree(degree: usize, max: usize) -> Result<()> {
    if degree > max {
        Err(Error::DegreeOverflow { degree, max })
    } else {
        Ok(())
    }
}

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<f64> = Vec::with_capacity(MAX_FACTORIAL_ARG + 1);
        for n in 0..=MAX_FACTORIAL_ARG {
            let v = match exact_factorial(n) {
                Some(v) => (v as f64).ln(),
                None => table[n - 1] + (n as f64).ln(),
            };
            table.push(v);
        }
        table
    })
}

/// `ln n!` for `n ≤ MAX_FACTORIAL_ARG`. Panics beyond the table; callers
/// validate degrees first.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    ln_factorial_table()[n]
}

fn exact_factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

pub fn log_factorial(n: usize) -> Result<LogCoeff> {
    check_degree(n, MAX_FACTORIAL_ARG)?;
    Ok(match exact_factorial(n) {
        Some(v) => LogCoeff::from_integer(v),
        None => LogCoeff { log_magnitude: ln_factorial(n), sign: 1, exact: None },
    })
}

pub fn log_binomial(n: usize, k: usize) -> Result<LogCoeff> {
    check_degree(n, MAX_FACTORIAL_ARG)?;
    if k > n {
        return Ok(LogCoeff::zero());
    }
    let k = k.min(n - k);
    let mut exact: Option<u128> = Some(1);
    for i in 0..k {
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1) stays integral at every step
        exact = exact
            .and_then(|c| c.checked_mul((n - i) as u128))
            .map(|c| c / (i as u128 + 1));
    }
    Ok(match exact {
        Some(v) => LogCoeff::from_integer(v),
        None => LogCoeff {
            log_magnitude: ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k),
            sign: 1,
            exact: None,
        },
    })
}

/// Falling factorial `n (n-1) ... (n-j+1)`, zero when `j > n`.
pub fn falling_factorial(n: usize, j: usize) -> f64 {
    if j > n {
        return 0.0;
    }
    ((n - j + 1)..=n).map(|k| k as f64).product()
}

/// Stirling number of the second kind from the alternating sum
/// `S(j, i) = Σ_r (-1)^r (i - r)^j / (r! (i - r)!)`, evaluated in exact
/// integer arithmetic as `(1/i!) Σ_r (-1)^r C(i, r) (i - r)^j`.
pub fn stirling_second(j: usize, i: usize) -> Result<u64> {
    check_degree(j, 20)?;
    if i > j {
        return Ok(0);
    }
    let mut sum: i128 = 0;
    let mut binom: i128 = 1;
    for r in 0..=i {
        let term = binom * (i as i128 - r as i128).pow(j as u32);
        sum += if r % 2 == 0 { term } else { -term };
        binom = binom * (i - r) as i128 / (r as i128 + 1);
    }
    let i_fact = exact_factorial(i).expect("i <= 20") as i128;
    debug_assert_eq!(sum % i_fact, 0);
    Ok((sum / i_fact) as u64)
}

/// Laguerre polynomial `ℒ_n(x)` (α = 0) by
/// `(k+1) ℒ_{k+1} = (2k+1-x) ℒ_k - k ℒ_{k-1}`.
pub fn laguerre_eval(n: usize, x: f64) -> Result<PolynomialEval<f64>> {
    check_degree(n, MAX_POLY_DEGREE)?;
    let mut prev = 1.0;
    if n == 0 {
        return Ok(PolynomialEval { value: prev, condition_hint: 1.0 });
    }
    let mut cur = 1.0 - x;
    let mut hint = prev.max(cur.abs());
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        hint = hint.max(cur.abs());
    }
    Ok(PolynomialEval { value: cur, condition_hint: hint })
}

pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    laguerre_eval(n, x).map(|e| e.value)
}

/// Physicists' Hermite polynomial by `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite_eval(n: usize, x: f64) -> Result<PolynomialEval<f64>> {
    check_degree(n, MAX_POLY_DEGREE)?;
    let mut prev = 1.0;
    if n == 0 {
        return Ok(PolynomialEval { value: prev, condition_hint: 1.0 });
    }
    let mut cur = 2.0 * x;
    let mut hint = prev.max(cur.abs());
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        hint = hint.max(cur.abs());
    }
    Ok(PolynomialEval { value: cur, condition_hint: hint })
}

pub fn hermite(n: usize, x: f64) -> Result<f64> {
    hermite_eval(n, x).map(|e| e.value)
}

/// 𝒫-Hermite polynomial of the isotonic oscillator:
/// `𝒫_0 = 1` and `𝒫_n = H_n + 4n H_{n-2} + 4n(n-3) H_{n-4}` for `n ≥ 3`.
/// Indices 1 and 2 are not eigenstates and are rejected.
pub fn p_hermite_eval(n: usize, x: f64) -> Result<PolynomialEval<f64>> {
    check_degree(n, MAX_POLY_DEGREE)?;
    match n {
        0 => Ok(PolynomialEval { value: 1.0, condition_hint: 1.0 }),
        1 | 2 => Err(Error::Domain(format!(
            "𝒫-Hermite polynomial is defined only for n = 0 or n >= 3, got n = {n}"
        ))),
        _ => {
            let nf = n as f64;
            let h_n = hermite_eval(n, x)?;
            let h_n2 = hermite_eval(n - 2, x)?;
            // at n = 3 the coefficient 4n(n-3) vanishes and H_{-1} is never needed
            let h_n4 = if n >= 4 {
                hermite_eval(n - 4, x)?
            } else {
                PolynomialEval { value: 0.0, condition_hint: 0.0 }
            };
            let terms = [h_n.value, 4.0 * nf * h_n2.value, 4.0 * nf * (nf - 3.0) * h_n4.value];
            let value = terms.iter().sum();
            let hint = terms
                .iter()
                .map(|t| t.abs())
                .fold(h_n.condition_hint.max(h_n2.condition_hint), f64::max);
            Ok(PolynomialEval { value, condition_hint: hint })
        }
    }
}

pub fn p_hermite(n: usize, x: f64) -> Result<f64> {
    p_hermite_eval(n, x).map(|e| e.value)
}

/// Two-parameter Hermite polynomial in the argument pattern `(z, -z*)`:
///
/// `ℋ_{m,n}(z, -z*) = m! n! Σ_k (-1/2)^k (-z*)^{m-k} z^{n-k} / (k! (m-k)! (n-k)!)`.
pub fn two_param_hermite_eval(m: usize, n: usize, z: Complex64) -> Result<PolynomialEval<Complex64>> {
    check_degree(m, MAX_TWO_PARAM_DEGREE)?;
    check_degree(n, MAX_TWO_PARAM_DEGREE)?;
    let minus_zc = -z.conj();
    let mut value = Complex64::new(0.0, 0.0);
    let mut hint = 0.0f64;
    for k in 0..=m.min(n) {
        let log_coeff = ln_factorial(m) + ln_factorial(n)
            - k as f64 * std::f64::consts::LN_2
            - ln_factorial(k)
            - ln_factorial(m - k)
            - ln_factorial(n - k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = minus_zc.powu((m - k) as u32) * z.powu((n - k) as u32) * (sign * log_coeff.exp());
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::Overflow("two-parameter Hermite polynomial"));
        }
        hint = hint.max(term.norm());
        value += term;
    }
    Ok(PolynomialEval { value, condition_hint: hint })
}

pub fn two_param_hermite(m: usize, n: usize, z: Complex64) -> Result<Complex64> {
    two_param_hermite_eval(m, n, z).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 7.3).unwrap(), 1.0);
        assert_eq!(laguerre(1, 2.0).unwrap(), -1.0);
        // closed degree-2 form (x² - 4x + 2)/2 at x = -1
        let closed = (1.0 + 4.0 + 2.0) / 2.0;
        assert!((laguerre(2, -1.0).unwrap() - closed).abs() < 1e-15);
        assert_eq!(closed, 3.5);
    }

    #[test]
    fn degree_caps() {
        assert!(matches!(laguerre(65, 0.0), Err(Error::DegreeOverflow { degree: 65, max: 64 })));
        assert!(matches!(hermite(65, 0.0), Err(Error::DegreeOverflow { .. })));
        assert!(matches!(two_param_hermite(33, 0, c(1.0, 0.0)), Err(Error::DegreeOverflow { .. })));
        assert!(log_factorial(129).is_err());
        assert!(laguerre(64, 1.0).is_ok());
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 3.3).unwrap(), 1.0);
        assert_eq!(hermite(1, 0.5).unwrap(), 1.0);
        // 16x⁴ - 48x² + 12 at x = 1
        assert_eq!(hermite(4, 1.0).unwrap(), -20.0);
    }

    #[test]
    fn p_hermite_values() {
        assert_eq!(p_hermite(0, 2.0).unwrap(), 1.0);
        assert_eq!(p_hermite(3, 0.0).unwrap(), 0.0);
        assert_eq!(p_hermite(4, 0.0).unwrap(), -4.0);
        assert!(matches!(p_hermite(1, 0.3), Err(Error::Domain(_))));
        assert!(matches!(p_hermite(2, 0.3), Err(Error::Domain(_))));
    }

    #[test]
    fn two_param_hermite_small_cases() {
        let z = c(0.7, -0.4);
        assert_eq!(two_param_hermite(0, 0, z).unwrap(), c(1.0, 0.0));
        assert!((two_param_hermite(1, 1, c(1.0, 0.0)).unwrap() - c(-1.5, 0.0)).norm() < 1e-15);
        assert!((two_param_hermite(2, 0, c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        // general z at (1, 1): -|z|² - 1/2
        let v = two_param_hermite(1, 1, z).unwrap();
        assert!((v - c(-z.norm_sqr() - 0.5, 0.0)).norm() < 1e-15);
    }

    /// Term-by-term evaluation with exact integer coefficients
    /// `C(m,k) C(n,k) k! / 2^k`.
    fn two_param_hermite_brute(m: usize, n: usize, z: Complex64) -> Complex64 {
        let binom = |a: u64, b: u64| -> i128 {
            let mut r: i128 = 1;
            for i in 0..b {
                r = r * (a - i) as i128 / (i + 1) as i128;
            }
            r
        };
        let fact = |a: u64| -> i128 { (1..=a as i128).product() };
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..=m.min(n) as u64 {
            let int_coeff = binom(m as u64, k) * binom(n as u64, k) * fact(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let mut term = Complex64::new(sign * int_coeff as f64 / 2f64.powi(k as i32), 0.0);
            for _ in 0..(m as u64 - k) {
                term *= -z.conj();
            }
            for _ in 0..(n as u64 - k) {
                term *= z;
            }
            sum += term;
        }
        sum
    }

    #[test]
    fn two_param_hermite_matches_brute_force_grid() {
        let axis = [-1.5, -0.6, 0.0, 0.8, 2.0];
        for &re in &axis {
            for &im in &axis {
                let z = c(re, im);
                for m in 0..=8 {
                    for n in 0..=8 {
                        let fast = two_param_hermite(m, n, z).unwrap();
                        let slow = two_param_hermite_brute(m, n, z);
                        let scale = slow.norm().max(1e-300);
                        let err = (fast - slow).norm();
                        assert!(
                            err / scale < 1e-12 || err < 1e-12,
                            "m={m} n={n} z={z}: {fast} vs {slow}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn two_param_hermite_conjugate_symmetry_carries_sign() {
        let axis = [-1.5, -0.6, 0.0, 0.8, 2.0];
        for &re in &axis {
            for &im in &axis {
                let z = c(re, im);
                for m in 0..=8 {
                    for n in 0..=8 {
                        let a = two_param_hermite(m, n, z).unwrap();
                        let b = two_param_hermite(n, m, z).unwrap().conj();
                        let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                        assert!((a - b * sign).norm() <= 1e-12 * a.norm().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn log_factorials() {
        assert_eq!(log_factorial(0).unwrap(), LogCoeff { log_magnitude: 0.0, sign: 1, exact: Some(1.0) });
        let f20 = log_factorial(20).unwrap();
        assert_eq!(f20.log_magnitude, 2432902008176640000f64.ln());
        let mut product: u64 = 1;
        for n in 0..=20u64 {
            if n > 0 {
                product *= n;
            }
            let lc = log_factorial(n as usize).unwrap();
            assert_eq!(lc.value(), product as f64, "n = {n}");
            assert_eq!(lc.sign, 1);
        }
        let mut last = -1.0;
        for n in 0..=MAX_FACTORIAL_ARG {
            let l = log_factorial(n).unwrap().log_magnitude;
            assert!(l >= last);
            last = l;
        }
        // beyond u128 range the summed logarithm takes over
        let l128 = log_factorial(128).unwrap();
        let direct: f64 = (1..=128).map(|k| (k as f64).ln()).sum();
        assert!((l128.log_magnitude - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn log_binomials() {
        assert_eq!(log_binomial(4, 2).unwrap().log_magnitude, 6f64.ln());
        assert_eq!(log_binomial(4, 2).unwrap().value(), 6.0);
        assert_eq!(log_binomial(3, 5).unwrap().sign, 0);
        assert_eq!(log_binomial(3, 5).unwrap().value(), 0.0);
        let big = log_binomial(128, 64).unwrap();
        let expect = ln_factorial(128) - 2.0 * ln_factorial(64);
        assert!((big.log_magnitude - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn stirling_numbers() {
        let rows: [&[u64]; 4] = [&[0, 1], &[0, 1, 1], &[0, 1, 3, 1], &[0, 1, 7, 6, 1]];
        for (j, row) in rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                assert_eq!(stirling_second(j + 1, i).unwrap(), v);
            }
        }
        // recurrence S(j, i) = i S(j-1, i) + S(j-1, i-1)
        for j in 2..=12 {
            for i in 1..=j {
                let lhs = stirling_second(j, i).unwrap();
                let rhs = i as u64 * stirling_second(j - 1, i).unwrap() + stirling_second(j - 1, i - 1).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 0), 1.0);
        assert_eq!(falling_factorial(5, 2), 20.0);
        assert_eq!(falling_factorial(2, 3), 0.0);
    }

    /// Σ_k C(n,k) (-x)^k / k! in exact rational arithmetic.
    fn laguerre_explicit_sum(n: usize, x: f64) -> f64 {
        let x = BigRational::from_float(x).unwrap();
        let mut sum = BigRational::zero();
        let mut term = BigRational::one();
        for k in 0..=n {
            if k > 0 {
                term = term * BigRational::from_integer(BigInt::from(n - k + 1)) * (-x.clone())
                    / BigRational::from_integer(BigInt::from(k * k));
            }
            sum += term.clone();
        }
        sum.to_f64().unwrap()
    }

    proptest! {
        #[test]
        fn laguerre_recurrence_matches_explicit_sum(n in 0usize..=30, x in -10.0f64..10.0) {
            let rec = laguerre_eval(n, x).unwrap();
            let sum = laguerre_explicit_sum(n, x);
            let err = (rec.value - sum).abs();
            prop_assert!(err <= 1e-10 * sum.abs() || err < 1e-12, "n={} x={} rec={} sum={}", n, x, rec.value, sum);
        }

        #[test]
        fn hermite_parity(n in 0usize..=40, x in -5.0f64..5.0) {
            let a = hermite(n, x).unwrap();
            let b = hermite(n, -x).unwrap();
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((a - s * b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
