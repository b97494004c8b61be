//! Best-bound tables for `A_q(n, d; k)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use scodes_core::bounds::Engine;
use scodes_core::provenance::BoundResult;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Md,
    Csv,
}

pub struct Row {
    pub n: usize,
    pub k: usize,
    pub lower: BoundResult,
    pub upper: BoundResult,
}

/// Rows with `2k <= n <= n_max` and `d <= 2k`.
pub fn rows(e: &Engine, q: u64, n_max: usize, d: usize) -> Result<Vec<Row>, CliError> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for k in d.div_ceil(2).max(1)..=n / 2 {
            let (lower, upper) = e.bounds(q, n, d, k)?;
            out.push(Row { n, k, lower, upper });
        }
    }
    Ok(out)
}

/// Footnote keys are rule names; facts also carry their citation.
fn note_text(r: &BoundResult) -> String {
    match &r.citation {
        Some(c) => format!("{}: {c}", r.rule),
        None => r.rule.clone(),
    }
}

pub fn render(rows: &[Row], q: u64, d: usize, format: Format) -> String {
    let mut notes: BTreeMap<String, usize> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut mark = |r: &BoundResult| -> usize {
        let t = note_text(r);
        *notes.entry(t.clone()).or_insert_with(|| {
            order.push(t);
            order.len()
        })
    };
    let mut out = String::new();
    match format {
        Format::Md => {
            let _ = writeln!(out, "A_{q}(n,{d};k)\n");
            out.push_str("| n | k | lower | upper |\n|---:|---:|---:|---:|\n");
            for r in rows {
                let (a, b) = (mark(&r.lower), mark(&r.upper));
                let _ = writeln!(out, "| {} | {} | {} [{a}] | {} [{b}] |", r.n, r.k, r.lower.value, r.upper.value);
            }
            out.push('\n');
            for (i, t) in order.iter().enumerate() {
                let _ = writeln!(out, "[{}] {t}", i + 1);
            }
        }
        Format::Csv => {
            out.push_str("q,n,d,k,lower,lower_note,upper,upper_note\n");
            for r in rows {
                let (a, b) = (mark(&r.lower), mark(&r.upper));
                let _ = writeln!(out, "{q},{},{d},{},{},{a},{},{b}", r.n, r.k, r.lower.value, r.upper.value);
            }
            for (i, t) in order.iter().enumerate() {
                let _ = writeln!(out, "# [{}] {t}", i + 1);
            }
        }
    }
    out
}
