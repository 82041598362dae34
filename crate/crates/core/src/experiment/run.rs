use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::problem::{Built, Outcome, RankSample};
use super::CliError;
use crate::data_io::{write_json, write_trace};
use crate::diagnostics::{default_window, estimate_rate, zigzag_dispersion, RateReport};
use crate::linalg::Seed;
use crate::sets::SetDescriptor;
use crate::solvers::{Algorithm, StopReason};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

/// Command-line overrides for `run`.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub quiet: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub trace_file: String,
    /// Last recorded k.
    pub iterations: usize,
    pub stop_reason: Option<StopReason>,
    /// Solved without the constraint.
    pub unconstrained: bool,
    pub f_star: f64,
    pub final_value: f64,
    /// f(x_K) − f*
    pub final_gap: f64,
    /// FW gap at x_K; absent for unconstrained runs.
    pub final_fw_gap: Option<f64>,
    pub rate: Option<RateReport>,
    pub rate_error: Option<String>,
    pub zigzag: f64,
    pub wall_clock_s: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rank_samples: Vec<RankSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub objective: String,
    pub constraint: SetDescriptor,
    pub seed: u64,
    pub iters: usize,
    pub diagnostics: bool,
    pub f_star: f64,
    pub f_star_source: String,
    pub output_dir: String,
    pub algorithms: Vec<AlgorithmSummary>,
}

impl RunSummary {
    /// rank(X_k) ≤ k + 1 at every sampled k.
    pub fn rank_bound_holds(&self) -> bool {
        self.algorithms.iter().flat_map(|a| &a.rank_samples).all(|s| s.numerical_rank <= s.k + 1 && s.atoms <= s.k + 1)
    }
}

/// Runs every configured algorithm (one thread each), writes one trace per
/// algorithm plus `summary.json` into the output directory.
pub fn cmd_run(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary, CliError> {
    config.validate()?;
    let seed = opts.seed.unwrap_or(config.seed);
    let output = opts.output.clone().or_else(|| config.output_dir.clone()).unwrap_or_else(|| PathBuf::from("results"));
    std::fs::create_dir_all(&output)?;
    let iters = config.iterations();
    let built = Built::new(config, Seed(seed))?;

    let outcomes: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .algorithms
            .iter()
            .map(|&a| {
                let built = &built;
                scope.spawn(move || built.run(a, iters, config.diagnostics))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect::<Result<Vec<_>, _>>()
    })?;

    let seen = outcomes.iter().filter(|o| !o.unconstrained).map(|o| o.trace.best_value()).fold(f64::INFINITY, f64::min);
    let (f_star, f_star_source) = built.f_star(config.fstar(), seen)?;

    let mut algorithms = Vec::new();
    for (outcome, &algorithm) in outcomes.into_iter().zip(&config.algorithms) {
        let mut trace = outcome.trace;
        trace.meta.seed = Some(seed);
        let file = format!("{algorithm}.csv");
        write_trace(&trace, &output.join(&file))?;

        let fs = if outcome.unconstrained { built.unconstrained_f_star() } else { f_star };
        let last = trace.last().expect("runs record at least one row");
        let window = default_window(last.k);
        let (rate, rate_error) = match estimate_rate(&trace, fs, window) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        algorithms.push(AlgorithmSummary {
            algorithm,
            trace_file: file,
            iterations: last.k,
            stop_reason: trace.meta.stop_reason,
            unconstrained: outcome.unconstrained,
            f_star: fs,
            final_value: last.f_value,
            final_gap: last.f_value - fs,
            final_fw_gap: last.fw_gap.is_finite().then_some(last.fw_gap),
            rate,
            rate_error,
            zigzag: zigzag_dispersion(&trace, window),
            wall_clock_s: outcome.wall_clock_s,
            rank_samples: outcome.rank_samples,
        });
    }

    let summary = RunSummary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        objective: built.objective_description(),
        constraint: built.descriptor(),
        seed,
        iters,
        diagnostics: config.diagnostics,
        f_star,
        f_star_source,
        output_dir: output.display().to_string(),
        algorithms,
    };
    write_json(&output.join("summary.json"), &summary)?;
    Ok(summary)
}

pub fn render_summary(s: &RunSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}  on {:?}", s.objective, s.constraint);
    let _ = writeln!(out, "f* = {:.10e} ({}), seed {}, {} iterations", s.f_star, s.f_star_source, s.seed, s.iters);
    let _ = writeln!(out, "{:<8} {:>14} {:>14} {:>9} {:>9} {:>10}", "alg", "f - f*", "fw gap", "slope", "r^2", "seconds");
    for a in &s.algorithms {
        let (slope, r2) = a.rate.as_ref().map_or((f64::NAN, f64::NAN), |r| (r.slope, r.r_squared));
        let _ = writeln!(
            out,
            "{:<8} {:>14.6e} {:>14.6e} {:>9.3} {:>9.4} {:>10.3}",
            a.algorithm.name(),
            a.final_gap,
            a.final_fw_gap.unwrap_or(f64::NAN),
            slope,
            r2,
            a.wall_clock_s
        );
        if let Some(last) = a.rank_samples.last() {
            let _ = writeln!(out, "         rank(X_{}) = {} ({} atoms)", last.k, last.numerical_rank, last.atoms);
        }
    }
    out
}
