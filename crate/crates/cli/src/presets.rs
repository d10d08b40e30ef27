//! Built-in sweeps for the four figure regimes.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::config::{Engine, Format, GammaGrid, QuasiGrid, SweepConfig, SweepKind, ZetaGrid};

pub const NAMES: [&str; 5] = ["fig1", "fig2", "fig3a", "fig3b", "fig4"];

const THIRD: [f64; 2] = [1.0 / 3.0, 0.0];
const TWO_THIRDS: [f64; 2] = [2.0 / 3.0, 0.0];

/// `r = 0.05, 0.10, ..., 3.0` along the real axis.
fn real_axis() -> ZetaGrid {
    ZetaGrid { r_min: 0.05, r_max: 3.0, r_steps: 60, theta: vec![0.0] }
}

fn base(kind: SweepKind, n: Vec<usize>) -> SweepConfig {
    SweepConfig {
        kind: Some(kind),
        engine: Engine::Oracle,
        mu: vec![THIRD],
        nu: vec![TWO_THIRDS],
        n,
        zeta_grid: real_axis(),
        quasi: None,
        dim_override: None,
        output_path: None,
        format: Format::Csv,
    }
}

pub fn preset(name: &str) -> Option<SweepConfig> {
    let cfg = match name {
        "fig1" => base(SweepKind::A3, vec![2, 20]),
        "fig2" => base(SweepKind::Squeeze, vec![1, 2, 3, 6]),
        "fig3a" => SweepConfig {
            mu: vec![[0.001, 0.0]],
            nu: vec![[1.2, 0.0]],
            zeta_grid: ZetaGrid { r_min: 1.0, r_max: 1.0, r_steps: 1, theta: vec![FRAC_PI_2] },
            quasi: Some(QuasiGrid {
                s: 1.2,
                gamma: GammaGrid::Polar {
                    r_min: 0.0,
                    r_max: 3.0,
                    r_steps: 21,
                    theta_min: 0.0,
                    theta_max: 2.0 * PI * 23.0 / 24.0,
                    theta_steps: 24,
                },
            }),
            ..base(SweepKind::Quasiprob, vec![2])
        },
        // ζ = -e^{0.1i}, γ = i, N swept
        "fig3b" => SweepConfig {
            mu: vec![[0.001, 0.0]],
            nu: vec![[1.2, 0.0]],
            zeta_grid: ZetaGrid { r_min: 1.0, r_max: 1.0, r_steps: 1, theta: vec![PI + 0.1] },
            quasi: Some(QuasiGrid { s: 1.2, gamma: GammaGrid::Points { points: vec![[0.0, 1.0]] } }),
            ..base(SweepKind::Quasiprob, (0..=11).collect())
        },
        "fig4" => base(SweepKind::Fidelity, vec![0, 1, 2, 3, 10]),
        _ => return None,
    };
    Some(cfg)
}
