//! CSV and JSON writers for sweep rows.

use std::io::Write;

use serde::Serialize;

use crate::config::{Format, SweepKind};
use crate::error::CliError;
use crate::sweep::SweepRow;

const LEAD: [&str; 7] = ["mu_re", "mu_im", "nu_re", "nu_im", "N", "r", "theta"];
const QUASI: [&str; 3] = ["s", "gamma_re", "gamma_im"];
const TAIL: [&str; 6] = ["quantity", "paper_value", "oracle_value", "rel_gap", "truncation_dim", "tail_mass"];

/// Column names; the `error` column is present only when some row failed.
pub fn header(kind: SweepKind, with_error: bool) -> Vec<&'static str> {
    let mut cols: Vec<&str> = LEAD.to_vec();
    if kind == SweepKind::Quasiprob {
        cols.extend(QUASI);
    }
    cols.extend(TAIL);
    if with_error {
        cols.push("error");
    }
    cols
}

/// 17 significant digits, so every value round-trips.
fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn csv_record(row: &SweepRow, kind: SweepKind, with_error: bool) -> Vec<String> {
    let mut rec = vec![
        float(row.mu.re),
        float(row.mu.im),
        float(row.nu.re),
        float(row.nu.im),
        row.n.to_string(),
        float(row.r),
        float(row.theta),
    ];
    if kind == SweepKind::Quasiprob {
        let (s, g) = row.quasi.expect("quasi rows carry (s, gamma)");
        rec.extend([float(s), float(g.re), float(g.im)]);
    }
    rec.extend([
        row.quantity.to_string(),
        opt(row.paper_value, float),
        opt(row.oracle_value, float),
        opt(row.rel_gap, float),
        opt(row.truncation_dim, |d| d.to_string()),
        opt(row.tail_mass, float),
    ]);
    if with_error {
        rec.push(row.error.as_ref().map(|e| e.message.clone()).unwrap_or_default());
    }
    rec
}

#[derive(Serialize)]
struct JsonRow<'a> {
    mu_re: f64,
    mu_im: f64,
    nu_re: f64,
    nu_im: f64,
    #[serde(rename = "N")]
    n: usize,
    r: f64,
    theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_im: Option<f64>,
    quantity: &'a str,
    paper_value: Option<f64>,
    oracle_value: Option<f64>,
    rel_gap: Option<f64>,
    truncation_dim: Option<usize>,
    tail_mass: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

impl<'a> From<&'a SweepRow> for JsonRow<'a> {
    fn from(row: &'a SweepRow) -> Self {
        JsonRow {
            mu_re: row.mu.re,
            mu_im: row.mu.im,
            nu_re: row.nu.re,
            nu_im: row.nu.im,
            n: row.n,
            r: row.r,
            theta: row.theta,
            s: row.quasi.map(|q| q.0),
            gamma_re: row.quasi.map(|q| q.1.re),
            gamma_im: row.quasi.map(|q| q.1.im),
            quantity: row.quantity,
            paper_value: row.paper_value,
            oracle_value: row.oracle_value,
            rel_gap: row.rel_gap,
            truncation_dim: row.truncation_dim,
            tail_mass: row.tail_mass,
            error: row.error.as_ref().map(|e| e.message.as_str()),
        }
    }
}

pub fn emit<W: Write>(rows: &[SweepRow], kind: SweepKind, format: Format, mut out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let with_error = rows.iter().any(|r| r.error.is_some());
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
            w.write_record(header(kind, with_error))?;
            for row in rows {
                w.write_record(csv_record(row, kind, with_error))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let json: Vec<JsonRow<'_>> = rows.iter().map(JsonRow::from).collect();
            serde_json::to_writer_pretty(&mut out, &json)?;
            writeln!(out)?;
            out.flush()?;
        }
    }
    Ok(())
}
