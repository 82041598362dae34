use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::problem::log_points;
use super::CliError;
use crate::diagnostics::{default_window, estimate_rate, RateReport};
use crate::solvers::{Algorithm, SolverTrace};

/// Where the optimal value for a comparison comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FStarSource {
    Value(f64),
    /// Smallest objective value found in any of the traces.
    BestSeen,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceColumn {
    pub label: String,
    pub algorithm: Algorithm,
    pub iterations_to_tol: Option<usize>,
    pub rate: Option<RateReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub k: usize,
    /// f(x_k) − f* per trace.
    pub gaps: Vec<f64>,
    /// gaps[i] / gaps[0]; the first trace is the baseline.
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub problem: String,
    pub f_star: f64,
    pub tol: f64,
    pub traces: Vec<TraceColumn>,
    pub rows: Vec<CompareRow>,
}

/// Aligns labelled traces over the same problem at logarithmically spaced k.
pub fn cmd_compare(traces: &[(String, SolverTrace)], f_star: FStarSource, tol: f64) -> Result<ComparisonReport, CliError> {
    if traces.len() < 2 {
        return Err(super::ConfigError::new("traces", "need at least two traces to compare").into());
    }
    let (first_label, first) = &traces[0];
    for (label, t) in &traces[1..] {
        if t.meta.problem != first.meta.problem {
            return Err(CliError::MetadataMismatch(format!(
                "{first_label}: {:?} vs {label}: {:?}",
                first.meta.problem, t.meta.problem
            )));
        }
    }
    let f_star = match f_star {
        FStarSource::Value(v) => v,
        FStarSource::BestSeen => traces.iter().map(|(_, t)| t.best_value()).fold(f64::INFINITY, f64::min),
    };
    let common_k = traces.iter().filter_map(|(_, t)| t.last().map(|r| r.k)).min().unwrap_or(0);
    let mut ks = vec![0];
    ks.extend(log_points(common_k));
    if ks.last() != Some(&common_k) {
        ks.push(common_k);
    }
    let rows = ks
        .into_iter()
        .map(|k| {
            let gaps: Vec<f64> = traces.iter().map(|(_, t)| t.gap_at(k, f_star).unwrap_or(f64::NAN)).collect();
            let ratios = gaps.iter().map(|g| g / gaps[0]).collect();
            CompareRow { k, gaps, ratios }
        })
        .collect();
    let columns = traces
        .iter()
        .map(|(label, t)| {
            let last = t.last().map_or(0, |r| r.k);
            TraceColumn {
                label: label.clone(),
                algorithm: t.meta.algorithm,
                iterations_to_tol: t.iterations_to(f_star, tol),
                rate: estimate_rate(t, f_star, default_window(last)).ok(),
            }
        })
        .collect();
    Ok(ComparisonReport {
        schema_version: super::SUMMARY_SCHEMA_VERSION,
        problem: first.meta.problem.objective.clone(),
        f_star,
        tol,
        traces: columns,
        rows,
    })
}

pub fn render_comparison(r: &ComparisonReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}  (f* = {:.10e})", r.problem, r.f_star);
    let _ = write!(out, "{:>8}", "k");
    for c in &r.traces {
        let _ = write!(out, " {:>14}", c.label);
    }
    for c in &r.traces[1..] {
        let _ = write!(out, " {:>14}", format!("{}/{}", c.label, r.traces[0].label));
    }
    out.push('\n');
    for row in &r.rows {
        let _ = write!(out, "{:>8}", row.k);
        for g in &row.gaps {
            let _ = write!(out, " {g:>14.6e}");
        }
        for q in &row.ratios[1..] {
            let _ = write!(out, " {q:>14.4}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "iterations to f - f* <= {:e}, and log-log slope:", r.tol);
    for c in &r.traces {
        let iters = c.iterations_to_tol.map_or("never".to_string(), |k| k.to_string());
        let slope = c.rate.as_ref().map_or("n/a".to_string(), |s| format!("{:.3}", s.slope));
        let _ = writeln!(out, "  {:<16} {:>8}  slope {}", c.label, iters, slope);
    }
    out
}
