use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pmcs_core::fock::{MAX_DIM, MIN_DIM};
use pmcs_core::states::{build_state, default_dim};
use pmcs_core::weyl::expand_superposed_power;
use pmcs_core::wavefunctions::{potential, EigenState};
use pmcs_core::{Complex64, ModulationParams};
use pmcs_cli::hint::gnuplot_hint;
use pmcs_cli::{emit, run_sweep, CliError, Engine, Format, RunOptions, SweepConfig, SweepKind};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pmcs", version, about = "Photon-modulated coherent state sweeps")]
struct Cli {
    /// Cap on the Fock truncation dimension.
    #[arg(long, env = "PMCS_MAX_DIM", global = true)]
    max_dim: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal-ordered expansion of (μa + νa†)^N.
    Weyl {
        #[command(subcommand)]
        action: WeylAction,
    },
    /// Build |N, ζ⟩ and compare its norms.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// A3 moment parameter.
    A3 {
        #[command(subcommand)]
        action: SweepAction,
    },
    /// Quadrature squeezing identities.
    Squeeze {
        #[command(subcommand)]
        action: SweepAction,
    },
    /// s-parameterized quasi-probability.
    Quasiprob {
        #[command(subcommand)]
        action: GridAction,
    },
    /// Fidelity with the coherent state.
    Fidelity {
        #[command(subcommand)]
        action: SweepAction,
    },
    /// Position-space eigenfunctions.
    Wavefn {
        #[command(subcommand)]
        action: WavefnAction,
    },
}

#[derive(Subcommand)]
enum WeylAction {
    Dump(WeylArgs),
}

#[derive(Subcommand)]
enum StateAction {
    Build(StateArgs),
}

#[derive(Subcommand)]
enum SweepAction {
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum GridAction {
    Grid(SweepArgs),
}

#[derive(Subcommand)]
enum WavefnAction {
    Dump(WavefnArgs),
}

/// `RE` or `RE,IM`.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err("expected RE or RE,IM".into()),
    }
}

#[derive(Args)]
struct WeylArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    mu: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    nu: Complex64,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    mu: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    nu: Complex64,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    zeta_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    zeta_im: f64,
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Print a gnuplot script for the sweep output and exit.
    #[arg(long)]
    gnuplot_hint: bool,
}

#[derive(Args)]
struct WavefnArgs {
    /// Physical index (0, 3, 4, ...).
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -6.0)]
    xmin: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 6.0)]
    xmax: f64,
    #[arg(long, default_value_t = 241)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Io(io::Error::new(e.kind(), format!("{}: {e}", p.display())))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn check_max_dim(max_dim: Option<usize>) -> Result<(), CliError> {
    match max_dim {
        Some(d) if !(MIN_DIM..=MAX_DIM).contains(&d) => {
            Err(CliError::Config(format!("PMCS_MAX_DIM = {d} is outside {MIN_DIM}..={MAX_DIM}")))
        }
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct Term {
    m: usize,
    n: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct WeylDump {
    #[serde(rename = "N")]
    n: usize,
    mu: [f64; 2],
    nu: [f64; 2],
    terms: Vec<Term>,
}

fn weyl_dump(a: &WeylArgs) -> Result<(), CliError> {
    let p = ModulationParams::new(a.mu, a.nu, a.n).map_err(|e| CliError::Config(e.to_string()))?;
    let series = expand_superposed_power(&p)?;
    let dump = WeylDump {
        n: a.n,
        mu: [a.mu.re, a.mu.im],
        nu: [a.nu.re, a.nu.im],
        terms: series.terms().map(|((m, n), c)| Term { m, n, re: c.re, im: c.im }).collect(),
    };
    let mut out = output(None)?;
    serde_json::to_writer_pretty(&mut out, &dump)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct StateDump {
    mu: [f64; 2],
    nu: [f64; 2],
    #[serde(rename = "N")]
    n: usize,
    zeta: [f64; 2],
    dim: usize,
    norm_sq_paper: f64,
    norm_sq_oracle: f64,
    rel_gap: f64,
    exact_regime: bool,
    tail_mass: f64,
    amplitudes: Vec<[f64; 2]>,
}

fn state_build(a: &StateArgs, max_dim: Option<usize>) -> Result<(), CliError> {
    let p = ModulationParams::new(a.mu, a.nu, a.n).map_err(|e| CliError::Config(e.to_string()))?;
    let zeta = Complex64::new(a.zeta_re, a.zeta_im);
    let mut dim = a.dim.unwrap_or_else(|| default_dim(&p, zeta));
    if let Some(cap) = max_dim {
        dim = dim.min(cap);
    }
    let s = build_state(&p, zeta, Some(dim)).map_err(|e| match e {
        e if e.is_convergence() => CliError::Numerical(e),
        e => CliError::Config(e.to_string()),
    })?;
    let dump = StateDump {
        mu: [a.mu.re, a.mu.im],
        nu: [a.nu.re, a.nu.im],
        n: a.n,
        zeta: [zeta.re, zeta.im],
        dim: s.dim(),
        norm_sq_paper: s.norm_sq_paper,
        norm_sq_oracle: s.norm_sq_oracle,
        rel_gap: s.discrepancy,
        exact_regime: p.is_exact_regime(),
        tail_mass: s.truncation.tail_mass,
        amplitudes: s.vector.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
    };
    let mut out = output(None)?;
    serde_json::to_writer_pretty(&mut out, &dump)?;
    writeln!(out)?;
    Ok(())
}

fn sweep(kind: SweepKind, a: &SweepArgs, max_dim: Option<usize>) -> Result<(), CliError> {
    let mut cfg = SweepConfig::load(kind, a.preset.as_deref(), a.config.as_deref())?;
    if let Some(e) = a.engine {
        cfg.engine = e;
    }
    if let Some(f) = a.format {
        cfg.format = f;
    }
    if let Some(p) = &a.out {
        cfg.output_path = Some(p.display().to_string());
    }
    if a.gnuplot_hint {
        let data = cfg.output_path.clone().unwrap_or_else(|| format!("{}.csv", a.preset.as_deref().unwrap_or("sweep")));
        print!("{}", gnuplot_hint(&cfg, &data));
        return Ok(());
    }
    let rows = run_sweep(&cfg, &RunOptions { max_dim });
    let path = cfg.output_path.as_ref().map(PathBuf::from);
    emit(&rows, kind, cfg.format, output(path.as_ref())?)?;
    let failed = rows.iter().filter(|r| r.error.as_ref().is_some_and(|e| e.convergence)).count();
    if failed > 0 {
        return Err(CliError::RowsUnconverged { failed, total: rows.len() });
    }
    Ok(())
}

fn wavefn_dump(a: &WavefnArgs) -> Result<(), CliError> {
    let state = EigenState::new(a.n).map_err(|e| CliError::Config(e.to_string()))?;
    if a.points < 2 || !(a.xmax > a.xmin) {
        return Err(CliError::Config("need --points >= 2 and --xmax > --xmin".into()));
    }
    let mut w = csv::Writer::from_writer(output(a.out.as_ref())?);
    w.write_record(["x", "psi", "V"])?;
    for i in 0..a.points {
        let x = a.xmin + (a.xmax - a.xmin) * i as f64 / (a.points - 1) as f64;
        w.write_record([x, state.value(x), potential(x)].map(|v| format!("{v:.16e}")))?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    check_max_dim(cli.max_dim)?;
    match &cli.command {
        Command::Weyl { action: WeylAction::Dump(a) } => weyl_dump(a),
        Command::State { action: StateAction::Build(a) } => state_build(a, cli.max_dim),
        Command::A3 { action: SweepAction::Sweep(a) } => sweep(SweepKind::A3, a, cli.max_dim),
        Command::Squeeze { action: SweepAction::Sweep(a) } => sweep(SweepKind::Squeeze, a, cli.max_dim),
        Command::Quasiprob { action: GridAction::Grid(a) } => sweep(SweepKind::Quasiprob, a, cli.max_dim),
        Command::Fidelity { action: SweepAction::Sweep(a) } => sweep(SweepKind::Fidelity, a, cli.max_dim),
        Command::Wavefn { action: WavefnAction::Dump(a) } => wavefn_dump(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pmcs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
