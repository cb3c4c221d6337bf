//! Structured (JSON) and flat CSV output.
//!
//! CSV layouts:
//! * verify: `check,metric,value` (one row per computed metric plus a
//!   `pass` row per check with value 1 or 0);
//! * growth: `n,value,fitted_slope` (the slope repeated on every row);
//! * extremal history: `restart,iteration,value`.

use std::io::Write;

use bergman_core::extremal::SearchResult;
use serde::Serialize;

use crate::verify::CheckReport;
use crate::ToolkitError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Structured,
    Csv,
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    pass: bool,
    checks: &'a [CheckReport],
}

pub fn write_verify<W: Write>(
    out: W,
    reports: &[CheckReport],
    pass: bool,
    format: Format,
) -> Result<(), ToolkitError> {
    match format {
        Format::Structured => write_json(
            out,
            &VerifyDocument {
                pass,
                checks: reports,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "metric", "value"])?;
            for r in reports {
                for m in &r.computed {
                    w.write_record([r.name.as_str(), m.metric.as_str(), &m.value.to_string()])?;
                }
                w.write_record([r.name.as_str(), "pass", if r.pass { "1" } else { "0" }])?;
            }
            w.flush().map_err(csv::Error::from)?;
            Ok(())
        }
    }
}

pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<(), ToolkitError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_growth<W: Write>(
    out: W,
    rows: &[(usize, f64)],
    slope: f64,
) -> Result<(), ToolkitError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "value", "fitted_slope"])?;
    for (n, v) in rows {
        w.write_record([n.to_string(), v.to_string(), slope.to_string()])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_history<W: Write>(out: W, result: &SearchResult) -> Result<(), ToolkitError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["restart", "iteration", "value"])?;
    for p in &result.history {
        w.write_record([
            p.restart.to_string(),
            p.iteration.to_string(),
            p.value.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSummary {
    pub best_value: f64,
    pub best_params: Vec<f64>,
    pub witness_point: [f64; 2],
    pub restarts_run: usize,
}

impl From<&SearchResult> for SearchSummary {
    fn from(r: &SearchResult) -> Self {
        SearchSummary {
            best_value: r.best_value,
            best_params: r.best_params.clone(),
            witness_point: [r.witness_point.re, r.witness_point.im],
            restarts_run: r.restarts_run,
        }
    }
}
