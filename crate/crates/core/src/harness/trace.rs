//! Per-step training traces and their CSV form.
//!
//! A trace file is a CSV with the fixed header
//! `t,epoch,f_t,d_t,d_hat_t,d_tilde_t,alpha_t,grad_norm,wall_ms`, preceded
//! by `#`-prefixed comment lines echoing the config and summary. Floats
//! are written with 17 significant digits so values parse back to the same
//! bits. The three feedback coefficient columns are empty for optimizers
//! other than eve. `wall_ms` is the only column that may differ between
//! byte-identical reruns.

use super::config::RunConfig;
use crate::error::{Error, Result};
use std::path::Path;

pub const TRACE_HEADER: &str = "t,epoch,f_t,d_t,d_hat_t,d_tilde_t,alpha_t,grad_norm,wall_ms";

/// One optimizer step as recorded in a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// 1-based step index.
    pub t: u64,
    /// 0-based epoch index.
    pub epoch: u32,
    /// Minibatch objective at the gradient evaluation point.
    pub f_t: f64,
    /// Raw feedback ratio; eve only.
    pub d: Option<f64>,
    /// Clipped feedback ratio; eve only.
    pub d_hat: Option<f64>,
    /// Smoothed feedback coefficient; eve only.
    pub d_tilde: Option<f64>,
    /// Learning rate applied this step.
    pub alpha: f64,
    /// Euclidean norm of the minibatch gradient.
    pub grad_norm: f64,
    /// Wall clock spent in this step, milliseconds (0 where unavailable).
    pub wall_ms: f64,
}

/// Terminal state of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The run stopped early at `step` (no record is written for it).
    Aborted { step: u64, reason: String },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

/// End-of-run aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub status: RunStatus,
    /// Number of recorded steps.
    pub steps: u64,
    /// Noiseless objective over all examples at the final parameters
    /// (NaN if it could not be evaluated after an abort).
    pub final_full_loss: f64,
    /// Smallest minibatch objective seen (NaN if no steps completed).
    pub best_f_t: f64,
}

/// A full run: config echo, per-step records, and summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub config: RunConfig,
    pub records: Vec<StepRecord>,
    pub summary: RunSummary,
}

/// 17-significant-digit float form; round-trips `f64` bit-exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// One record as a CSV row (no trailing newline); the feedback columns are
/// empty for optimizers that do not produce coefficients.
pub fn record_to_csv_row(r: &StepRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{:.3}",
        r.t,
        r.epoch,
        format_float(r.f_t),
        format_opt(r.d),
        format_opt(r.d_hat),
        format_opt(r.d_tilde),
        format_float(r.alpha),
        format_float(r.grad_norm),
        r.wall_ms,
    )
}

impl Trace {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for line in self.config.to_kv_string().lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        match &self.summary.status {
            RunStatus::Completed => out.push_str("# status = completed\n"),
            RunStatus::Aborted { step, reason } => {
                out.push_str(&format!("# status = aborted at step {step}: {reason}\n"));
            }
        }
        out.push_str(&format!("# steps = {}\n", self.summary.steps));
        out.push_str(&format!(
            "# final_full_loss = {}\n",
            format_float(self.summary.final_full_loss)
        ));
        out.push_str(&format!(
            "# best_f_t = {}\n",
            format_float(self.summary.best_f_t)
        ));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&record_to_csv_row(r));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

/// Parses the records of a trace CSV (comment lines are skipped).
pub fn read_records(text: &str) -> Result<Vec<StepRecord>> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Data("trace has no header line".into()))?;
    if header.trim() != TRACE_HEADER {
        return Err(Error::Data(format!(
            "unexpected trace header {header:?}; want {TRACE_HEADER:?}"
        )));
    }
    let mut records = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Data(format!(
                "trace row {row}: expected 9 fields, got {}",
                fields.len()
            )));
        }
        let f64_of = |name: &str, s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::Data(format!("trace row {row}, column {name}: {e}")))
        };
        let opt_of = |name: &str, s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                f64_of(name, s).map(Some)
            }
        };
        records.push(StepRecord {
            t: fields[0]
                .parse::<u64>()
                .map_err(|e| Error::Data(format!("trace row {row}, column t: {e}")))?,
            epoch: fields[1]
                .parse::<u32>()
                .map_err(|e| Error::Data(format!("trace row {row}, column epoch: {e}")))?,
            f_t: f64_of("f_t", fields[2])?,
            d: opt_of("d_t", fields[3])?,
            d_hat: opt_of("d_hat_t", fields[4])?,
            d_tilde: opt_of("d_tilde_t", fields[5])?,
            alpha: f64_of("alpha_t", fields[6])?,
            grad_norm: f64_of("grad_norm", fields[7])?,
            wall_ms: f64_of("wall_ms", fields[8])?,
        });
    }
    Ok(records)
}

pub fn read_records_file(path: &Path) -> Result<Vec<StepRecord>> {
    read_records(&std::fs::read_to_string(path)?)
}

/// Strips the `wall_ms` column and comment lines, for byte-level
/// comparisons between reruns.
pub fn strip_volatile(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        match line.rsplit_once(',') {
            Some((rest, _wall)) => {
                out.push_str(rest);
                out.push('\n');
            }
            None => {
                out.push_str(line);
                out.push('\n');
            }
        }
    }
    out
}
