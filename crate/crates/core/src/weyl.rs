//! Operator-ordering engine.
//!
//! [`NormalOrderedSeries`] is the canonical representation: a finite map
//! `(m, n) ↦ c_{m,n}` standing for `Σ c_{m,n} :â†^m â^n:`. Series can be
//! evaluated as normal symbols at a coherent amplitude or rebuilt as dense
//! matrices for comparison against the Fock-space oracle.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::special::{falling_factorial, ln_factorial, stirling_second};

/// Largest power `N` of the superposed operator.
pub const MAX_POWER: usize = 32;
/// Largest power `j` accepted by [`expand_number_power`].
pub const MAX_NUMBER_POWER: usize = 8;

/// The superposed operator `(μâ + νâ†)^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationParams {
    mu: Complex64,
    nu: Complex64,
    power: usize,
}

impl ModulationParams {
    pub fn new(mu: Complex64, nu: Complex64, power: usize) -> Result<Self> {
        if power > MAX_POWER {
            return Err(Error::DegreeOverflow { degree: power, max: MAX_POWER });
        }
        let finite = |c: Complex64| c.re.is_finite() && c.im.is_finite();
        if !finite(mu) || !finite(nu) {
            return Err(Error::InvalidParams("μ and ν must be finite".into()));
        }
        if power > 0 && mu == Complex64::new(0.0, 0.0) && nu == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParams("μ = ν = 0 with N > 0 is the zero operator".into()));
        }
        Ok(ModulationParams { mu, nu, power })
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// Photon-added (`μ = 0`), photon-subtracted (`ν = 0`) or trivial
    /// (`N = 0`) cases, where the diagonal-only closed forms are exact.
    pub fn is_exact_regime(&self) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        self.mu == zero || self.nu == zero || self.power == 0
    }

    pub fn conj(&self) -> Self {
        ModulationParams { mu: self.mu.conj(), nu: self.nu.conj(), power: self.power }
    }
}

/// Log-magnitude and phase of `μ^k ν^{N-k}`; `None` when a zero base is
/// raised to a positive power.
pub(crate) fn log_mu_nu_power(mu: Complex64, nu: Complex64, k: usize, rest: usize) -> Option<(f64, f64)> {
    let part = |z: Complex64, e: usize| -> Option<(f64, f64)> {
        if e == 0 {
            Some((0.0, 0.0))
        } else if z.norm() == 0.0 {
            None
        } else {
            Some((e as f64 * z.norm().ln(), e as f64 * z.arg()))
        }
    };
    let (lm, pm) = part(mu, k)?;
    let (ln, pn) = part(nu, rest)?;
    Some((lm + ln, pm + pn))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormalOrderedSeries {
    terms: BTreeMap<(usize, usize), Complex64>,
}

impl NormalOrderedSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), Complex64)>) -> Self {
        let mut s = Self::new();
        for (key, c) in terms {
            s.add(key.0, key.1, c);
        }
        s
    }

    /// Adds `c :â†^m â^n:` to the series.
    pub fn add(&mut self, m: usize, n: usize, c: Complex64) {
        *self.terms.entry((m, n)).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.terms.get(&(m, n)).copied().unwrap_or_default()
    }

    /// Terms in `(creation power, annihilation power)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree `m + n` over the terms.
    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|(m, n)| m + n).max().unwrap_or(0)
    }

    /// Normal symbol `Σ c_{m,n} (α*)^m αⁿ`, i.e. `⟨α|·|α⟩` of the operator.
    pub fn normal_symbol(&self, alpha: Complex64) -> Complex64 {
        self.terms().map(|((m, n), c)| c * alpha.conj().powu(m as u32) * alpha.powu(n as u32)).sum()
    }
}

/// Normal-ordered expansion
/// `(μâ + νâ†)^N = N! Σ_k μ^k ν^{N-k} Σ_l (1/2)^l :â†^{N-k-l} â^{k-l}: / (l! (k-l)! (N-k-l)!)`.
///
/// The prefactor `ν^N (μ/ν)^k` is carried as `μ^k ν^{N-k}`, so `ν = 0`
/// leaves exactly the `k = N` terms.
pub fn expand_superposed_power(p: &ModulationParams) -> Result<NormalOrderedSeries> {
    let big_n = p.power();
    if big_n > MAX_POWER {
        return Err(Error::DegreeOverflow { degree: big_n, max: MAX_POWER });
    }
    let mut series = NormalOrderedSeries::new();
    for k in 0..=big_n {
        let Some((log_mn, phase)) = log_mu_nu_power(p.mu(), p.nu(), k, big_n - k) else {
            continue;
        };
        for l in 0..=(big_n - k).min(k) {
            let log_c = ln_factorial(big_n) - l as f64 * LN_2
                + log_mn
                - ln_factorial(l)
                - ln_factorial(k - l)
                - ln_factorial(big_n - k - l);
            series.add(big_n - k - l, k - l, Complex64::from_polar(log_c.exp(), phase));
        }
    }
    Ok(series)
}

/// `(â†â)^j = Σ_i S(j, i) :â†^i â^i:` with Stirling numbers of the second
/// kind.
pub fn expand_number_power(j: usize) -> Result<NormalOrderedSeries> {
    if j == 0 || j > MAX_NUMBER_POWER {
        return Err(Error::InvalidParams(format!("j = {j} outside 1..={MAX_NUMBER_POWER}")));
    }
    let mut series = NormalOrderedSeries::new();
    for i in 1..=j {
        let s = stirling_second(j, i)?;
        series.add(i, i, Complex64::new(s as f64, 0.0));
    }
    Ok(series)
}

/// Gaussian operator symbol `prefactor · exp(exponent_coeff · |α|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSymbol {
    pub prefactor: Complex64,
    pub exponent_coeff: Complex64,
}

impl GaussianSymbol {
    /// Treats `self` as a Weyl (symmetric) symbol and returns the normal
    /// symbol of the same operator, by convolution with the Gaussian
    /// `(2/π) e^{-2|α-β|²}`.
    pub fn weyl_to_normal(&self) -> Result<GaussianSymbol> {
        let denom = Complex64::new(2.0, 0.0) - self.exponent_coeff;
        if denom.norm() < 1e-14 {
            return Err(Error::Domain("Weyl-to-normal conversion is singular at coefficient 2".into()));
        }
        Ok(GaussianSymbol {
            prefactor: self.prefactor * 2.0 / denom,
            exponent_coeff: self.exponent_coeff * 2.0 / denom,
        })
    }

    /// `⟨α| :prefactor · exp(c â†â): |β⟩ = prefactor · ⟨α|β⟩ · e^{c α* β}` for
    /// a normal symbol.
    pub fn normal_matrix_element(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        let overlap = (-(alpha.norm_sqr() + beta.norm_sqr()) / 2.0 + alpha.conj() * beta).exp();
        self.prefactor * overlap * (self.exponent_coeff * alpha.conj() * beta).exp()
    }
}

/// Scalars of the ordered form of `e^{-λ â†â}`:
/// `[2/(1+e^{-λ})] exp(-2(1-e^{-λ})/(1+e^{-λ}) |α|²)`.
///
/// The exponential is a Weyl-ordered (symmetric) symbol; use
/// [`GaussianSymbol::weyl_to_normal`] before evaluating coherent-state
/// matrix elements.
pub fn expand_exp_number(lambda: Complex64) -> Result<GaussianSymbol> {
    let e = (-lambda).exp();
    let one = Complex64::new(1.0, 0.0);
    let denom = one + e;
    if denom.norm() < 1e-14 {
        return Err(Error::Domain(format!("e^(-λ) = -1 is a pole of the ordered form (λ = {lambda})")));
    }
    Ok(GaussianSymbol { prefactor: 2.0 / denom, exponent_coeff: -2.0 * (one - e) / denom })
}

fn ln_falling(n: usize, k: usize) -> f64 {
    ((n - k + 1)..=n).map(|i| (i as f64).ln()).sum()
}

/// Dense matrix of `Σ c_{m,n} (â†)^m (â)^n` on a `dim`-level basis, with the
/// same boundary behavior as products of truncated ladder matrices.
pub fn series_to_matrix(s: &NormalOrderedSeries, dim: usize) -> Result<FockOperator> {
    if 2 * s.max_degree() > dim {
        return Err(Error::Headroom(format!(
            "series degree {} needs dimension >= {}, have {dim}",
            s.max_degree(),
            2 * s.max_degree()
        )));
    }
    let mut matrix = Array2::<Complex64>::zeros((dim, dim));
    for ((m, n), c) in s.terms() {
        for col in n..dim {
            let mid = col - n;
            let row = mid + m;
            if row >= dim {
                break;
            }
            // ⟨row| â†^m â^n |col⟩ = √(col!/mid!) √(row!/mid!)
            let value = if m == n {
                falling_factorial(col, n)
            } else {
                (0.5 * (ln_falling(col, n) + ln_falling(row, m))).exp()
            };
            matrix[[row, col]] += c * value;
        }
    }
    Ok(FockOperator::new("normal-ordered series", matrix))
}
