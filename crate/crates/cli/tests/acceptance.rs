//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_FAILURES` are computed exactly like the rest and
//! print FAIL; the target exits non-zero only if any other criterion fails,
//! or if a known failure starts passing.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::process::{Command, ExitCode};
use std::time::Instant;

use pmcs_cli::presets::{preset, NAMES};
use pmcs_cli::{emit, run_sweep, Engine, RunOptions};
use pmcs_core::fock::{coherent_state, operator_exp_number, superposed_operator};
use pmcs_core::nonclassicality::{
    a3, fidelity_oracle, fidelity_paper, moments_oracle, quasiprob_oracle, quasiprob_oracle_via, squeezing_identities,
    vector_moments, QuasiProbParams, QuasiProbRoute,
};
use pmcs_core::special::laguerre;
use pmcs_core::states::{build_state, paper_norm_sq};
use pmcs_core::wavefunctions::{overlap_matrix, potential, schrodinger_residual, KineticConvention, QuadratureSpec};
use pmcs_core::weyl::{expand_exp_number, expand_number_power, expand_superposed_power, series_to_matrix};
use pmcs_core::{Complex64, FockOperator, FockVector, ModulationParams, PMCState};

/// Criterion 6: at θ = 0 the oracle `I2` is positive at every sampled `r`
/// and the squeezing shows up in `I1` instead; see the README.
const KNOWN_FAILURES: &[usize] = &[6];

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state(mu: Complex64, nu: Complex64, n: usize, zeta: Complex64) -> PMCState {
    build_state(&ModulationParams::new(mu, nu, n).unwrap(), zeta, None).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn weyl_exactness() -> Outcome {
    let start = Instant::now();
    let dim = 64;
    let values = [c(1.0, 0.0), c(-0.5, 0.5), c(0.0, 0.3), c(0.7, -1.1)];
    let mut worst = 0.0f64;
    for big_n in 0..=8 {
        for &mu in &values {
            for &nu in &values {
                let p = ModulationParams::new(mu, nu, big_n).unwrap();
                let m = series_to_matrix(&expand_superposed_power(&p).unwrap(), dim).unwrap();
                let dense = superposed_operator(mu, nu, dim).unwrap().pow(big_n);
                let scale = dense.max_abs_on_block(32).max(1.0);
                worst = worst.max(m.max_diff_on_block(&dense, 32) / scale);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-10 && secs < 5.0, format!("max |Δ| / max(1, max|entry|) = {worst:.2e} on the 32-block, {secs:.2} s"))
}

fn ordering_identities() -> Outcome {
    let dim = 42;
    for j in 1..=8 {
        let m = series_to_matrix(&expand_number_power(j).unwrap(), dim).unwrap();
        let dense = FockOperator::number(dim).pow(j);
        for r in 0..=20 {
            for col in 0..=20 {
                if m.matrix[[r, col]] != dense.matrix[[r, col]] {
                    return Err(format!("(a†a)^{j} differs at ({r}, {col})"));
                }
            }
        }
    }
    let dim = 80;
    let points = [c(0.0, 0.0), c(0.7, -0.3), c(-1.2, 0.5), c(0.2, 1.4)];
    let mut worst = 0.0f64;
    for lambda in [c(2f64.ln(), 0.0), c(1.0, 0.3)] {
        let dense = operator_exp_number(lambda, dim).unwrap();
        let normal = expand_exp_number(lambda).unwrap().weyl_to_normal().unwrap();
        for &alpha in &points {
            for &beta in &points {
                let (va, _) = coherent_state(alpha, dim).unwrap();
                let (vb, _) = coherent_state(beta, dim).unwrap();
                let oracle = va.inner(&dense.apply(&vb));
                worst = worst.max((oracle - normal.normal_matrix_element(alpha, beta)).norm() / oracle.norm());
            }
        }
    }
    check(worst <= 1e-9, format!("(a†a)^j exact for j <= 8, n <= 20; e^(-λn) worst relative {worst:.2e}"))
}

fn normalization_reductions() -> Outcome {
    let mut worst_closed = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut record = |p: &ModulationParams, zeta: Complex64, expect: f64| {
        let got = paper_norm_sq(p, zeta).unwrap();
        worst_closed = worst_closed.max((got - expect).abs() / expect);
        let s = build_state(p, zeta, None).unwrap();
        worst_oracle = worst_oracle.max((s.norm_sq_oracle - got).abs() / got);
    };
    for &zeta in &[c(0.0, 0.0), c(0.5, 0.0), c(1.0, -1.0), c(-2.0, 0.7)] {
        let z2 = zeta.norm_sqr();
        record(&ModulationParams::new(c(0.4, 0.2), c(-0.3, 0.9), 0).unwrap(), zeta, 1.0);
        for n in 1..=8 {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            record(&ModulationParams::new(c(0.0, 0.0), c(1.0, 0.0), n).unwrap(), zeta, fact * laguerre(n, -z2).unwrap());
            if z2 > 0.0 {
                record(&ModulationParams::new(c(1.0, 0.0), c(0.0, 0.0), n).unwrap(), zeta, z2.powi(n as i32));
            }
        }
    }
    check(
        worst_closed <= 1e-12 && worst_oracle <= 1e-8,
        format!("closed form vs special cases {worst_closed:.2e}, oracle vs closed form {worst_oracle:.2e}"),
    )
}

fn cross_term_discrepancy() -> Outcome {
    // the fidelity sweep's norm_sq rows carry the discrepancy report
    let gap = |theta: f64| {
        let mut cfg = preset("fig4").unwrap();
        cfg.engine = Engine::Both;
        cfg.mu = vec![[FRAC_1_SQRT_2, 0.0]];
        cfg.nu = vec![[FRAC_1_SQRT_2, 0.0]];
        cfg.n = vec![1];
        cfg.zeta_grid.r_min = 1.0;
        cfg.zeta_grid.r_steps = 1;
        cfg.zeta_grid.theta = vec![theta];
        let rows = run_sweep(&cfg, &RunOptions::default());
        let row = rows.into_iter().find(|r| r.quantity == "norm_sq").unwrap();
        (row.paper_value.unwrap(), row.oracle_value.unwrap(), row.rel_gap.unwrap())
    };
    let (paper, oracle, real_gap) = gap(0.0);
    let (_, _, imag_gap) = gap(FRAC_PI_4);
    check(
        (oracle - 2.5).abs() < 1e-10 && (paper - 1.5).abs() < 1e-12 && (real_gap - 0.4).abs() <= 1e-6 && imag_gap <= 1e-8,
        format!("ζ=1: oracle {oracle:.10}, closed form {paper:.10}, rel_gap {real_gap:.8}; ζ²=i: rel_gap {imag_gap:.1e}"),
    )
}

fn a3_reproduction() -> Outcome {
    let a3_at = |r: f64| {
        let s = state(c(1.0 / 3.0, 0.0), c(2.0 / 3.0, 0.0), 2, c(r, 0.0));
        a3(&moments_oracle(&s).unwrap()).unwrap().a3
    };
    let values: Vec<(f64, f64)> = (1..=12).map(|i| 0.25 * i as f64).map(|r| (r, a3_at(r))).collect();
    let in_band = values.iter().all(|&(_, v)| -1.0 < v && v < 0.0);
    let decays = a3_at(3.0).abs() < a3_at(0.5).abs();
    let (coh, _) = coherent_state(c(1.3, -0.4), 60).unwrap();
    let coherent = a3(&vector_moments(&coh).unwrap()).unwrap().a3;
    let fock3 = a3(&vector_moments(&FockVector::basis(3, 20).unwrap()).unwrap()).unwrap().a3;
    check(
        in_band && decays && coherent.abs() <= 1e-10 && (fock3 + 1.0).abs() <= 1e-9,
        format!(
            "A3 in [{:.4}, {:.4}] over r = 0.25..3; A3(0.5) = {:.4}, A3(3) = {:.2e}; coherent {coherent:.1e}; |3> {fock3:.10}",
            values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min),
            values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max),
            a3_at(0.5),
            a3_at(3.0),
        ),
    )
}

fn squeezing() -> Outcome {
    let radii = preset("fig2").unwrap().zeta_grid.radii();
    let mut i2_bad = Vec::new();
    let mut i1_bad = 0;
    let mut min_product = f64::INFINITY;
    for n in [1, 2, 3, 6] {
        let mut positive_r = Vec::new();
        for &r in &radii {
            let sq = squeezing_identities(&state(c(1.0 / 3.0, 0.0), c(2.0 / 3.0, 0.0), n, c(r, 0.0)));
            if sq.i2 >= 0.0 {
                positive_r.push(r);
            }
            if sq.i1 <= 0.0 {
                i1_bad += 1;
            }
            min_product = min_product.min(sq.var_x * sq.var_y);
        }
        if let (Some(lo), Some(hi)) = (positive_r.first(), positive_r.last()) {
            i2_bad.push(format!("N={n}: I2 >= 0 at {} radii in [{lo:.2}, {hi:.2}]", positive_r.len()));
        }
    }
    let detail = format!(
        "{}; I1 <= 0 at {i1_bad} points; min (ΔX)²(ΔY)² = {min_product:.6}",
        if i2_bad.is_empty() { "I2 < 0 everywhere".to_string() } else { i2_bad.join(", ") }
    );
    check(i2_bad.is_empty() && i1_bad == 0 && min_product >= 0.25 - 1e-10, detail)
}

fn gamma_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..21 {
        for k in 0..21 {
            let g = c(-3.0 + 0.3 * i as f64, -3.0 + 0.3 * k as f64);
            if g.norm() <= 3.0 + 1e-12 {
                out.push(g);
            }
        }
    }
    out
}

fn quasiprobability() -> Outcome {
    let fig3 = state(c(0.001, 0.0), c(1.2, 0.0), 2, c(0.0, 1.0));
    let grid = gamma_grid();
    let negative = grid
        .iter()
        .map(|&g| quasiprob_oracle(&fig3, &QuasiProbParams::new(g, 1.2).unwrap()).unwrap())
        .filter(|&v| v < 0.0)
        .count();

    let tested = [
        fig3.clone(),
        state(c(1.0 / 3.0, 0.0), c(2.0 / 3.0, 0.0), 2, c(1.0, 0.0)),
        state(c(0.0, 0.0), c(1.0, 0.0), 3, c(-0.8, 0.3)),
        state(c(1.0, 0.0), c(0.0, 0.0), 0, c(0.5, 0.5)),
    ];
    let mut min_q = f64::INFINITY;
    for s in &tested {
        for &g in &grid {
            min_q = min_q.min(quasiprob_oracle(s, &QuasiProbParams::new(g, -1.0).unwrap()).unwrap());
        }
    }

    // (1/π)∫Q d²γ on a 0.2-step grid over [-7, 7]², from the exact amplitudes
    let (h, half) = (0.2, 35);
    let mut worst_norm = 0.0f64;
    for s in &tested[..2] {
        let mut integral = 0.0;
        for i in -half..=half {
            for k in -half..=half {
                let q = QuasiProbParams::new(c(i as f64 * h, k as f64 * h), -1.0).unwrap();
                integral += quasiprob_oracle_via(s, &q, QuasiProbRoute::CoherentExpansion).unwrap() * h * h;
            }
        }
        worst_norm = worst_norm.max((integral / std::f64::consts::PI - 1.0).abs());
    }
    check(
        negative > 0 && min_q >= -1e-10 && worst_norm < 0.02,
        format!(
            "F(γ, 1.2) < 0 at {negative}/{} grid points; min Q = {min_q:.1e}; |(1/π)∫Q - 1| <= {worst_norm:.1e}",
            grid.len()
        ),
    )
}

fn fidelity() -> Outcome {
    let (mu, nu) = (c(1.0 / 3.0, 0.0), c(2.0 / 3.0, 0.0));
    let mut n0_worst = 0.0f64;
    let mut decreasing = true;
    let mut curves = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let zeta = c(r, 0.0);
        let p0 = ModulationParams::new(mu, nu, 0).unwrap();
        n0_worst = n0_worst
            .max((fidelity_paper(&p0, zeta).unwrap() - 1.0).abs())
            .max((fidelity_oracle(&state(mu, nu, 0, zeta)).unwrap() - 1.0).abs());
        let f: Vec<f64> = [0, 1, 3, 10].iter().map(|&n| fidelity_oracle(&state(mu, nu, n, zeta)).unwrap()).collect();
        decreasing &= f.windows(2).all(|w| w[1] < w[0]);
        curves.push(format!("r={r}: {:.3}>{:.3}>{:.3}>{:.3}", f[0], f[1], f[2], f[3]));
    }
    let hand = fidelity_oracle(&state(c(0.0, 0.0), c(1.0, 0.0), 1, c(1.0, 0.0))).unwrap();
    check(
        n0_worst <= 1e-10 && decreasing && (hand - 0.5).abs() <= 1e-9,
        format!("N=0 off by {n0_worst:.1e}; {}; hand point {hand:.12}", curves.join(", ")),
    )
}

fn wavefunctions() -> Outcome {
    let idx = [0, 3, 4, 5, 6, 7];
    let m = overlap_matrix(&idx, &QuadratureSpec::for_index(7)).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let mut residual = 0.0f64;
    for n in [0, 3, 4, 5] {
        residual = residual.max(schrodinger_residual(n, 1e-3, 10.0, KineticConvention::Half).unwrap());
    }
    let v0 = potential(0.0);
    check(
        worst < 1e-7 && residual < 1e-4 && v0 == -8.0,
        format!("overlap deviation {worst:.1e}; residual {residual:.1e}; V(0) = {v0}"),
    )
}

fn determinism() -> Outcome {
    let csv = |name: &str| {
        let cfg = preset(name).unwrap();
        let mut buf = Vec::new();
        emit(&run_sweep(&cfg, &RunOptions::default()), cfg.kind.unwrap(), cfg.format, &mut buf).unwrap();
        buf
    };
    for name in NAMES {
        if csv(name) != csv(name) {
            return Err(format!("{name} differs between runs"));
        }
    }
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pmcs"))
            .args(["a3", "sweep", "--preset", "fig1", "--engine", "both"])
            .env_remove("PMCS_MAX_DIM")
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    check(
        a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout,
        format!("{} presets identical in-process; binary fig1 output identical ({} bytes)", NAMES.len(), a.stdout.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Weyl-expansion exactness", weyl_exactness),
        ("ordering identities", ordering_identities),
        ("normalization reductions", normalization_reductions),
        ("cross-term discrepancy", cross_term_discrepancy),
        ("A3 reproduction", a3_reproduction),
        ("squeezing", squeezing),
        ("quasi-probability", quasiprobability),
        ("fidelity", fidelity),
        ("wavefunction layer", wavefunctions),
        ("determinism", determinism),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&id);
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        let note = match (&outcome, known) {
            (Err(_), true) => " [known failure]",
            (Ok(_), true) => " [listed as a known failure but passes]",
            _ => "",
        };
        println!("criterion {id:>2} {tag} {name} ({secs:.2} s): {detail}{note}");
        if outcome.is_err() != known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria did not match the expected outcome");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
