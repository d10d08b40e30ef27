//! Gnuplot scripts for sweep output.

use std::fmt::Write;

use crate::config::{SweepConfig, SweepKind};

/// A script that plots the oracle column of the CSV at `data`.
pub fn gnuplot_hint(cfg: &SweepConfig, data: &str) -> String {
    let kind = cfg.kind.unwrap_or(SweepKind::A3);
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key top right");
    match kind {
        SweepKind::Quasiprob => {
            // s, gamma_re, gamma_im sit in columns 8..10; oracle_value is 13
            let single_gamma = cfg.quasi.as_ref().is_some_and(|q| q.gamma.points().len() == 1);
            if single_gamma {
                let _ = writeln!(s, "set xlabel 'N'\nset ylabel 'F'");
                let _ = writeln!(s, "plot '{data}' skip 1 using 5:13 with linespoints title 'oracle', \\");
                let _ = writeln!(s, "     '{data}' skip 1 using 5:12 with linespoints title 'closed form'");
            } else {
                let _ = writeln!(s, "set xlabel 'Re γ'\nset ylabel 'Im γ'\nset zlabel 'F'");
                let _ = writeln!(s, "set ticslevel 0");
                let _ = writeln!(s, "splot '{data}' skip 1 using 9:10:13 with points pointtype 7 pointsize 0.5 palette title ''");
            }
        }
        _ => {
            let quantities: &[&str] = match kind {
                SweepKind::A3 => &["a3"],
                SweepKind::Squeeze => &["I1", "I2"],
                SweepKind::Fidelity => &["fidelity"],
                SweepKind::Quasiprob => unreachable!(),
            };
            let _ = writeln!(s, "set xlabel 'r'");
            let mut terms = Vec::new();
            for q in quantities {
                for n in &cfg.n {
                    terms.push(format!(
                        "'{data}' skip 1 using (strcol(8) eq '{q}' && $5 == {n} ? $6 : 1/0):10 with lines title '{q}, N = {n}'"
                    ));
                }
            }
            let _ = writeln!(s, "plot {}", terms.join(", \\\n     "));
        }
    }
    let _ = writeln!(s, "pause mouse close");
    s
}
