//! Truncated Fock-space linear algebra.
//!
//! All algebra runs on the logical ladder index `n = 0, 1, 2, ...` on which
//! the transformed isotonic-oscillator operators obey the Heisenberg-Weyl
//! algebra. Logical level `n` is the physical eigenstate `|n + 3⟩`; the shift
//! is bookkeeping and never enters the matrices.
//!
//! Every operation that pushes amplitude up the ladder checks that the top
//! tenth of the basis stays empty, since amplitude that reaches the boundary
//! is silently lost by the truncated `â†`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weyl::ModulationParams;

pub const MIN_DIM: usize = 4;
pub const MAX_DIM: usize = 256;
/// Relative mass allowed in the top tenth of the basis.
pub const TAIL_TOLERANCE: f64 = 1e-12;
/// Fraction of a trace allowed to come from the top tenth of the basis.
pub const TRACE_TAIL_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Number of levels making up the "top 10%" of a basis of size `dim`.
pub fn tail_len(dim: usize) -> usize {
    dim.div_ceil(10).max(1)
}

/// Default truncation for a coherent amplitude of modulus `zeta_abs` raised
/// by `raise` creation quanta: a Poisson tail bound plus headroom, capped at
/// [`MAX_DIM`].
pub fn recommended_dim(zeta_abs: f64, raise: usize) -> usize {
    let mean = zeta_abs * zeta_abs;
    let base = (mean + 10.0 * (mean + 1.0).sqrt()).ceil() as usize;
    (base + 4 * raise + 16).clamp(MIN_DIM, MAX_DIM)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport {
    pub dimension: usize,
    /// Fraction of the squared norm carried by the top tenth of the levels.
    pub tail_mass: f64,
    pub converged: bool,
}

impl TruncationReport {
    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Truncation(self))
        }
    }
}

/// Truncated state vector over the logical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Array1<Complex64>,
}

impl FockVector {
    /// Logical level `n` is the physical eigenstate `|n + BASIS_OFFSET⟩`.
    pub const BASIS_OFFSET: usize = 3;

    pub fn new(amplitudes: Array1<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len(), MIN_DIM)?;
        if amplitudes.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidParams("non-finite amplitude".into()));
        }
        Ok(FockVector { amplitudes })
    }

    pub fn from_vec(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(Array1::from(amplitudes))
    }

    /// Number state `|n⟩` of the logical ladder.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        check_dim(dim, MIN_DIM)?;
        if n >= dim {
            return Err(Error::InvalidParams(format!("level {n} outside dimension {dim}")));
        }
        let mut amplitudes = Array1::zeros(dim);
        amplitudes[n] = ONE;
        Ok(FockVector { amplitudes })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::basis(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm_sq = self.norm_sq();
        if norm_sq == 0.0 || !norm_sq.is_finite() {
            return Err(Error::DegenerateState);
        }
        let inv = 1.0 / norm_sq.sqrt();
        Ok(FockVector { amplitudes: self.amplitudes.mapv(|c| c * inv) })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn truncation_report(&self, tolerance: f64) -> TruncationReport {
        let dim = self.dim();
        let total = self.norm_sq();
        let tail: f64 = self.amplitudes.iter().skip(dim - tail_len(dim)).map(|c| c.norm_sqr()).sum();
        let tail_mass = if total > 0.0 { (tail / total).min(1.0) } else { 0.0 };
        TruncationReport { dimension: dim, tail_mass, converged: tail_mass < tolerance }
    }

    /// Zero-pads the vector to a larger basis.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::InvalidParams(format!(
                "cannot embed dimension {} into {dim}",
                self.dim()
            )));
        }
        check_dim(dim, MIN_DIM)?;
        let mut amplitudes = Array1::zeros(dim);
        amplitudes.slice_mut(ndarray::s![..self.dim()]).assign(&self.amplitudes);
        Ok(FockVector { amplitudes })
    }
}

/// Dense operator on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub matrix: Array2<Complex64>,
    pub label: String,
}

impl FockOperator {
    pub fn new(label: impl Into<String>, matrix: Array2<Complex64>) -> Self {
        FockOperator { matrix, label: label.into() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn identity(dim: usize) -> Self {
        Self::new("I", Array2::eye(dim))
    }

    pub fn diagonal(label: impl Into<String>, entries: impl IntoIterator<Item = Complex64>) -> Self {
        let diag: Array1<Complex64> = entries.into_iter().collect();
        Self::new(label, Array2::from_diag(&diag))
    }

    /// `â†â`, constructed directly so the diagonal is exact.
    pub fn number(dim: usize) -> Self {
        Self::diagonal("a†a", (0..dim).map(|n| Complex64::new(n as f64, 0.0)))
    }

    pub fn parity(dim: usize) -> Self {
        Self::diagonal("(-1)^n", (0..dim).map(|n| if n % 2 == 0 { ONE } else { -ONE }))
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        assert_eq!(self.dim(), v.dim(), "operator/vector dimension mismatch");
        FockVector { amplitudes: self.matrix.dot(&v.amplitudes) }
    }

    pub fn compose(&self, other: &FockOperator) -> FockOperator {
        FockOperator::new(format!("{}·{}", self.label, other.label), self.matrix.dot(&other.matrix))
    }

    pub fn dagger(&self) -> FockOperator {
        FockOperator::new(format!("({})†", self.label), self.matrix.t().mapv(|c| c.conj()))
    }

    pub fn pow(&self, k: usize) -> FockOperator {
        let mut acc = Array2::eye(self.dim());
        for _ in 0..k {
            acc = acc.dot(&self.matrix);
        }
        FockOperator::new(format!("({})^{k}", self.label), acc)
    }

    /// Largest entrywise deviation from `other` on the leading `block × block`
    /// sub-matrix.
    pub fn max_diff_on_block(&self, other: &FockOperator, block: usize) -> f64 {
        let b = block.min(self.dim()).min(other.dim());
        let mut worst = 0.0f64;
        for i in 0..b {
            for j in 0..b {
                worst = worst.max((self.matrix[[i, j]] - other.matrix[[i, j]]).norm());
            }
        }
        worst
    }

    /// Largest entry modulus on the leading `block × block` sub-matrix.
    pub fn max_abs_on_block(&self, block: usize) -> f64 {
        let b = block.min(self.dim());
        let mut worst = 0.0f64;
        for i in 0..b {
            for j in 0..b {
                worst = worst.max(self.matrix[[i, j]].norm());
            }
        }
        worst
    }
}

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min || dim > MAX_DIM {
        Err(Error::InvalidParams(format!("dimension {dim} outside [{min}, {MAX_DIM}]")))
    } else {
        Ok(())
    }
}

/// Annihilation and creation matrices, `⟨m|â|n⟩ = √n δ_{m,n-1}`.
pub fn ladder_ops(dim: usize) -> Result<(FockOperator, FockOperator)> {
    check_dim(dim, 2)?;
    let mut a = Array2::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let annihilation = FockOperator::new("a", a);
    let creation = FockOperator::new("a†", annihilation.matrix.t().to_owned());
    Ok((annihilation, creation))
}

/// `μâ + νâ†` as a dense matrix.
pub fn superposed_operator(mu: Complex64, nu: Complex64, dim: usize) -> Result<FockOperator> {
    let (a, ad) = ladder_ops(dim)?;
    Ok(FockOperator::new("μa+νa†", a.matrix * mu + ad.matrix * nu))
}

/// Coherent state `e^{-|ζ|²/2} Σ ζⁿ/√n! |n⟩`, renormalized on the truncated
/// basis. Fails if the top tenth of the basis carries mass above
/// [`TAIL_TOLERANCE`].
pub fn coherent_state(zeta: Complex64, dim: usize) -> Result<(FockVector, TruncationReport)> {
    check_dim(dim, MIN_DIM)?;
    let mut amplitudes = Array1::zeros(dim);
    amplitudes[0] = Complex64::new((-zeta.norm_sqr() / 2.0).exp(), 0.0);
    for n in 1..dim {
        amplitudes[n] = amplitudes[n - 1] * zeta / (n as f64).sqrt();
    }
    let raw = FockVector::new(amplitudes)?;
    let report = raw.truncation_report(TAIL_TOLERANCE).into_result()?;
    Ok((raw.normalized()?, report))
}

/// `(μâ + νâ†)^N v` by `N` successive applications, unnormalized.
pub fn apply_superposed_power(p: &ModulationParams, v: &FockVector) -> Result<FockVector> {
    let dim = v.dim();
    if 4 * p.power() > dim {
        return Err(Error::Headroom(format!(
            "N = {} needs dimension >= {}, have {dim}",
            p.power(),
            4 * p.power()
        )));
    }
    let op = superposed_operator(p.mu(), p.nu(), dim)?;
    let mut out = v.clone();
    for step in 0..p.power() {
        out = op.apply(&out);
        let report = out.truncation_report(TAIL_TOLERANCE);
        if !report.converged {
            return Err(Error::Headroom(format!(
                "after {} applications the top levels carry {:.3e} of the mass at dimension {dim}",
                step + 1,
                report.tail_mass
            )));
        }
    }
    Ok(out)
}

fn displacement_generator(gamma: Complex64, dim: usize) -> Result<FockOperator> {
    let (a, ad) = ladder_ops(dim)?;
    Ok(FockOperator::new("γa†-γ*a", ad.matrix * gamma - a.matrix * gamma.conj()))
}

fn one_norm(m: &Array2<Complex64>) -> f64 {
    m.columns().into_iter().map(|c| c.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

const MAX_TAYLOR_TERMS: usize = 60;

/// Displacement operator `exp(γâ† - γ*â)` by scaling and squaring with a
/// Taylor kernel on the scaled generator.
pub fn displacement(gamma: Complex64, dim: usize) -> Result<FockOperator> {
    let generator = displacement_generator(gamma, dim)?;
    let norm = one_norm(&generator.matrix);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = generator.matrix.mapv(|c| c / f64::from(2u32.pow(squarings)));

    let mut sum: Array2<Complex64> = Array2::eye(dim);
    let mut term: Array2<Complex64> = Array2::eye(dim);
    let mut converged = false;
    for k in 1..=MAX_TAYLOR_TERMS {
        term = term.dot(&scaled).mapv(|c| c / k as f64);
        sum += &term;
        if one_norm(&term) <= 1e-18 * one_norm(&sum) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ExpConvergence(format!("Taylor series for |γ| = {}", gamma.norm())));
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    if sum.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::ExpConvergence("non-finite entries after squaring".into()));
    }
    Ok(FockOperator::new(format!("D({gamma})"), sum))
}

/// Action of the displacement operator on a vector, `D(γ) v`, without
/// forming the matrix. The tridiagonal generator is exponentiated in short
/// Taylor substeps.
pub fn displace(gamma: Complex64, v: &FockVector) -> Result<FockVector> {
    let dim = v.dim();
    if gamma == ZERO {
        return Ok(v.clone());
    }
    let sqrt_n: Vec<f64> = (0..dim).map(|n| (n as f64).sqrt()).collect();
    let apply = |x: &Array1<Complex64>, h: Complex64, hc: Complex64| -> Array1<Complex64> {
        // (h â† - hc â) x
        let mut y = Array1::zeros(dim);
        for n in 0..dim {
            let mut acc = ZERO;
            if n > 0 {
                acc += h * sqrt_n[n] * x[n - 1];
            }
            if n + 1 < dim {
                acc -= hc * sqrt_n[n + 1] * x[n + 1];
            }
            y[n] = acc;
        }
        y
    };
    let bound = 2.0 * gamma.norm() * (dim as f64).sqrt();
    let steps = bound.ceil().max(1.0) as usize;
    let h = gamma / steps as f64;
    let hc = h.conj();

    let mut x = v.amplitudes.clone();
    for _ in 0..steps {
        let mut term = x.clone();
        let mut acc = x.clone();
        let mut converged = false;
        for k in 1..=MAX_TAYLOR_TERMS {
            term = apply(&term, h, hc).mapv(|c| c / k as f64);
            acc += &term;
            let tn: f64 = term.iter().map(|c| c.norm_sqr()).sum();
            let an: f64 = acc.iter().map(|c| c.norm_sqr()).sum();
            if tn <= 1e-36 * an {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ExpConvergence("displacement action substep".into()));
        }
        x = acc;
    }
    FockVector::new(x)
}

/// `v† M v`. The vector is assumed normalized.
pub fn expectation(op: &FockOperator, v: &FockVector) -> Complex64 {
    v.inner(&op.apply(v))
}

/// `e^{-λ â†â} = diag(e^{-λn})`.
pub fn operator_exp_number(lambda: Complex64, dim: usize) -> Result<FockOperator> {
    check_dim(dim, 1)?;
    let entries: Vec<Complex64> = (0..dim).map(|n| (-lambda * n as f64).exp()).collect();
    if entries.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::Overflow("e^{-λn} diagonal"));
    }
    Ok(FockOperator::diagonal(format!("exp(-({lambda})a†a)"), entries))
}

/// `Tr[|v⟩⟨v| M] = ⟨v|M|v⟩` as a sum over basis levels, rejecting sums whose
/// top tenth contributes more than [`TRACE_TAIL_TOLERANCE`] of the absolute
/// total.
pub fn density_and_trace(v: &FockVector, m: &FockOperator) -> Result<Complex64> {
    let mv = m.apply(v);
    let summands: Vec<Complex64> =
        v.amplitudes.iter().zip(mv.amplitudes.iter()).map(|(a, b)| a.conj() * b).collect();
    let total_abs: f64 = summands.iter().map(|c| c.norm()).sum();
    let dim = summands.len();
    let tail_abs: f64 = summands[dim - tail_len(dim)..].iter().map(|c| c.norm()).sum();
    let tail_fraction = if total_abs > 0.0 { tail_abs / total_abs } else { 0.0 };
    if !(tail_fraction <= TRACE_TAIL_TOLERANCE) {
        return Err(Error::TraceDivergence { context: m.label.clone(), tail_fraction });
    }
    Ok(summands.into_iter().sum())
}
