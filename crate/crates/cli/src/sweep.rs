//! Grid evaluation. Points are evaluated in parallel and collected in input
//! order, so the output never depends on scheduling.

use pmcs_core::nonclassicality::{
    a3, fidelity_oracle, fidelity_paper, moments_oracle, moments_paper, quasiprob_grid, quasiprob_paper,
    squeezing_identities, uncertainty_product, QuasiProbParams,
};
use pmcs_core::states::{build_state, compare_norms, default_dim, paper_norm_sq};
use pmcs_core::{rel_gap, Complex64, Error, ModulationParams, PMCState};
use rayon::prelude::*;

use crate::config::{Engine, SweepConfig, SweepKind};

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Upper bound on the truncation dimension (`PMCS_MAX_DIM`).
    pub max_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub message: String,
    pub convergence: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mu: Complex64,
    pub nu: Complex64,
    pub n: usize,
    pub r: f64,
    pub theta: f64,
    /// `(s, γ)` for quasi-probability rows.
    pub quasi: Option<(f64, Complex64)>,
    pub quantity: &'static str,
    pub paper_value: Option<f64>,
    pub oracle_value: Option<f64>,
    pub rel_gap: Option<f64>,
    pub truncation_dim: Option<usize>,
    pub tail_mass: Option<f64>,
    pub error: Option<RowError>,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    mu: Complex64,
    nu: Complex64,
    n: usize,
    r: f64,
    theta: f64,
}

impl Point {
    fn zeta(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

pub fn grid_points(cfg: &SweepConfig) -> usize {
    let per_point = cfg.quasi.as_ref().map_or(1, |q| q.gamma.points().len());
    cfg.mu.len() * cfg.nu.len() * cfg.n.len() * cfg.zeta_grid.radii().len() * cfg.zeta_grid.theta.len() * per_point
}

fn points(cfg: &SweepConfig) -> Vec<Point> {
    let radii = cfg.zeta_grid.radii();
    let mut out = Vec::new();
    for mu in &cfg.mu {
        for nu in &cfg.nu {
            for &n in &cfg.n {
                for &r in &radii {
                    for &theta in &cfg.zeta_grid.theta {
                        out.push(Point { mu: Complex64::new(mu[0], mu[1]), nu: Complex64::new(nu[0], nu[1]), n, r, theta });
                    }
                }
            }
        }
    }
    out
}

/// One computed column: a value or the reason it is missing.
type Cell = Option<Result<f64, Error>>;

fn finite(v: Result<f64, Error>, what: &'static str) -> Result<f64, Error> {
    match v {
        Ok(x) if !x.is_finite() => Err(Error::Overflow(what)),
        other => other,
    }
}

struct Ctx<'a> {
    point: Point,
    params: Result<ModulationParams, Error>,
    state: Option<&'a Result<PMCState, Error>>,
    dim: usize,
}

impl Ctx<'_> {
    fn paper(&self, f: impl FnOnce(&ModulationParams) -> Result<f64, Error>) -> Result<f64, Error> {
        match &self.params {
            Ok(p) => finite(f(p), "closed form"),
            Err(e) => Err(e.clone()),
        }
    }

    fn oracle(&self, f: impl FnOnce(&PMCState) -> Result<f64, Error>) -> Result<f64, Error> {
        match (&self.params, self.state) {
            (Err(e), _) => Err(e.clone()),
            (Ok(_), Some(Ok(s))) => finite(f(s), "oracle"),
            (Ok(_), Some(Err(e))) => Err(e.clone()),
            (Ok(_), None) => unreachable!("oracle requested without a state"),
        }
    }

    fn row(&self, quantity: &'static str, quasi: Option<(f64, Complex64)>, paper: Cell, oracle: Cell) -> SweepRow {
        let mut errors = Vec::new();
        let mut convergence = false;
        let mut take = |label: &str, cell: Cell| match cell {
            Some(Ok(v)) => Some(v),
            Some(Err(e)) => {
                convergence |= e.is_convergence();
                errors.push(format!("{label}: {e}"));
                None
            }
            None => None,
        };
        let paper_value = take("paper", paper);
        let oracle_value = take("oracle", oracle);
        let (truncation_dim, tail_mass) = match self.state {
            Some(Ok(s)) => (Some(s.truncation.dimension), Some(s.truncation.tail_mass)),
            Some(Err(_)) => (Some(self.dim), None),
            None => (None, None),
        };
        SweepRow {
            mu: self.point.mu,
            nu: self.point.nu,
            n: self.point.n,
            r: self.point.r,
            theta: self.point.theta,
            quasi,
            quantity,
            paper_value,
            oracle_value,
            rel_gap: paper_value.zip(oracle_value).map(|(p, o)| rel_gap(p, o)),
            truncation_dim,
            tail_mass,
            error: (!errors.is_empty()).then(|| RowError { message: errors.join("; "), convergence }),
        }
    }
}

fn pick(on: bool, f: impl FnOnce() -> Result<f64, Error>) -> Cell {
    on.then(f)
}

fn evaluate(cfg: &SweepConfig, kind: SweepKind, ctx: &Ctx<'_>) -> Vec<SweepRow> {
    let engine = cfg.engine;
    let zeta = ctx.point.zeta();
    match kind {
        SweepKind::A3 => {
            let paper = pick(engine.paper(), || ctx.paper(|p| Ok(a3(&moments_paper(p, zeta)?)?.a3)));
            let oracle = pick(engine.oracle(), || ctx.oracle(|s| Ok(a3(&moments_oracle(s)?)?.a3)));
            vec![ctx.row("a3", None, paper, oracle)]
        }
        // no closed form is evaluated for the variances; always oracle
        SweepKind::Squeeze => vec![
            ctx.row("I1", None, None, Some(ctx.oracle(|s| Ok(squeezing_identities(s).i1)))),
            ctx.row("I2", None, None, Some(ctx.oracle(|s| Ok(squeezing_identities(s).i2)))),
            ctx.row("uncertainty_product", None, None, Some(ctx.oracle(|s| Ok(uncertainty_product(s))))),
        ],
        SweepKind::Fidelity => {
            let paper = pick(engine.paper(), || ctx.paper(|p| fidelity_paper(p, zeta)));
            let oracle = pick(engine.oracle(), || ctx.oracle(fidelity_oracle));
            let fidelity = ctx.row("fidelity", None, paper, oracle);
            let norm = match engine {
                Engine::Both => match &ctx.params {
                    Ok(p) => match compare_norms(p, zeta, Some(ctx.dim)) {
                        Ok(c) => ctx.row("norm_sq", None, Some(Ok(c.paper)), Some(Ok(c.oracle))),
                        Err(e) => ctx.row("norm_sq", None, Some(ctx.paper(|p| paper_norm_sq(p, zeta))), Some(Err(e))),
                    },
                    Err(e) => ctx.row("norm_sq", None, Some(Err(e.clone())), Some(Err(e.clone()))),
                },
                Engine::Paper => ctx.row("norm_sq", None, Some(ctx.paper(|p| paper_norm_sq(p, zeta))), None),
                Engine::Oracle => ctx.row("norm_sq", None, None, Some(ctx.oracle(|s| Ok(s.norm_sq_oracle)))),
            };
            vec![fidelity, norm]
        }
        SweepKind::Quasiprob => {
            let quasi = cfg.quasi.as_ref().expect("validated");
            let gammas = quasi.gamma.points();
            let params: Vec<Result<QuasiProbParams, Error>> =
                gammas.iter().map(|&g| QuasiProbParams::new(g, quasi.s)).collect();
            let oracle: Vec<Option<Result<f64, Error>>> = if engine.oracle() {
                match (&ctx.params, ctx.state) {
                    (Ok(_), Some(Ok(s))) => {
                        let ok: Vec<QuasiProbParams> = params.iter().filter_map(|q| q.as_ref().ok().copied()).collect();
                        let mut values = quasiprob_grid(s, &ok).into_iter();
                        params
                            .iter()
                            .map(|q| Some(finite(q.clone().and_then(|_| values.next().expect("one value per point")), "oracle")))
                            .collect()
                    }
                    _ => params.iter().map(|_| Some(ctx.oracle(|_| unreachable!()))).collect(),
                }
            } else {
                vec![None; params.len()]
            };
            gammas
                .iter()
                .zip(params)
                .zip(oracle)
                .map(|((&g, q), oracle)| {
                    let paper = pick(engine.paper(), || {
                        q.clone().and_then(|q| ctx.paper(|p| quasiprob_paper(p, zeta, &q)))
                    });
                    ctx.row("F", Some((quasi.s, g)), paper, oracle)
                })
                .collect()
        }
    }
}

fn dimension(cfg: &SweepConfig, opts: &RunOptions, p: &ModulationParams, zeta: Complex64) -> usize {
    let d = cfg.dim_override.unwrap_or_else(|| default_dim(p, zeta));
    opts.max_dim.map_or(d, |cap| d.min(cap))
}

/// Evaluates every grid point of `cfg` in lexicographic input order
/// (μ, ν, N, r, θ, then γ). Failures become rows with an error message.
pub fn run_sweep(cfg: &SweepConfig, opts: &RunOptions) -> Vec<SweepRow> {
    let kind = cfg.kind.expect("sweep kind is set by the loader");
    let needs_state = cfg.engine.oracle() || kind == SweepKind::Squeeze;
    points(cfg)
        .into_par_iter()
        .map(|point| {
            let params = ModulationParams::new(point.mu, point.nu, point.n);
            let dim = params.as_ref().map_or(0, |p| dimension(cfg, opts, p, point.zeta()));
            let state = match (&params, needs_state) {
                (Ok(p), true) => Some(build_state(p, point.zeta(), Some(dim))),
                _ => None,
            };
            let ctx = Ctx { point, params, state: state.as_ref(), dim };
            evaluate(cfg, kind, &ctx)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
