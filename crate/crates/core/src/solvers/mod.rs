//! Iterative solvers: Frank-Wolfe, accelerated Frank-Wolfe, Nesterov's
//! accelerated gradient method (plain, projected and strongly convex) and
//! projected gradient descent.
//!
//! All step schedules are open loop; nothing here performs a line search.

mod afw;
mod agm;
mod fw;
mod pgd;
mod trace;

use std::sync::Arc;
use std::time::{Duration, Instant};

pub use afw::{run_afw, run_afw_observed, AfwStep};
pub use agm::{
    run_agm, run_agm_observed, run_agm_sc, run_agm_sc_observed, run_projected_agm, AgmScStep, AgmStep,
    AGM_DIST_REF, AGM_GRAD_Y_SQ, AGM_LOWER_MODEL,
};
pub use fw::{run_fw, run_fw_observed, FwStep};
pub use pgd::run_projected_gd;
pub use trace::{
    Algorithm, EsColumns, ProblemDescriptor, ScheduleKind, SolverTrace, StopReason, TraceMetadata, TraceRow,
};

use crate::error::SolverError;

/// Open-loop step schedule δ_k.
#[derive(Clone)]
pub enum Schedule {
    /// δ_k = 2/(k+2)
    FwClassic,
    /// δ_k = 2/(k+3)
    AfwShifted,
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Schedule::FwClassic => f.write_str("FwClassic"),
            Schedule::AfwShifted => f.write_str("AfwShifted"),
            Schedule::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Schedule {
    pub fn custom(f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Schedule::Custom(Arc::new(f))
    }

    pub fn delta(&self, k: usize) -> f64 {
        match self {
            Schedule::FwClassic => 2.0 / (k as f64 + 2.0),
            Schedule::AfwShifted => 2.0 / (k as f64 + 3.0),
            Schedule::Custom(f) => f(k),
        }
    }

    pub fn kind(&self) -> ScheduleKind {
        match self {
            Schedule::FwClassic => ScheduleKind::FwClassic,
            Schedule::AfwShifted => ScheduleKind::AfwShifted,
            Schedule::Custom(_) => ScheduleKind::Custom,
        }
    }

    fn checked_delta(&self, k: usize) -> Result<f64, SolverError> {
        let d = self.delta(k);
        if d > 0.0 && d <= 1.0 {
            Ok(d)
        } else {
            Err(SolverError::InvalidStep { k, delta: d })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoppingRule {
    pub max_iters: usize,
    /// Stop once the recorded FW gap drops to this value.
    pub gap_tol: Option<f64>,
    pub time_budget: Option<Duration>,
    /// Fill the wall_time_ns column. Off by default so that traces are
    /// bitwise reproducible.
    pub record_time: bool,
}

impl StoppingRule {
    pub fn iterations(max_iters: usize) -> Self {
        Self { max_iters, gap_tol: None, time_budget: None, record_time: false }
    }

    pub fn with_gap_tol(mut self, tol: f64) -> Self {
        self.gap_tol = Some(tol);
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }

    pub fn with_timing(mut self, on: bool) -> Self {
        self.record_time = on;
        self
    }

    fn validate(&self) -> Result<(), SolverError> {
        if self.max_iters == 0 {
            Err(SolverError::InvalidStoppingRule)
        } else {
            Ok(())
        }
    }
}

/// Outcome of a run: the trace and the last iterate.
#[derive(Debug, Clone)]
pub struct SolverRun<P> {
    pub trace: SolverTrace,
    pub x: P,
    pub stop_reason: StopReason,
}

/// Shared row bookkeeping and stopping logic.
struct Recorder {
    started: Instant,
    stop: StoppingRule,
    trace: SolverTrace,
}

impl Recorder {
    fn new(stop: &StoppingRule, meta: TraceMetadata) -> Self {
        Self { started: Instant::now(), stop: stop.clone(), trace: SolverTrace::new(meta) }
    }

    fn push(&mut self, k: usize, f_value: f64, fw_gap: f64, step_delta: f64, es: Option<EsColumns>, extra: Vec<f64>) {
        let wall_time_ns = if self.stop.record_time { self.started.elapsed().as_nanos() as u64 } else { 0 };
        self.trace.rows.push(TraceRow { k, f_value, fw_gap, step_delta, wall_time_ns, es, extra });
    }

    /// Reason to stop after recording row k, if any.
    fn should_stop(&self, k: usize, fw_gap: f64) -> Option<StopReason> {
        if k >= self.stop.max_iters {
            return Some(StopReason::MaxIters);
        }
        if let Some(tol) = self.stop.gap_tol {
            if fw_gap.is_finite() && fw_gap <= tol {
                return Some(StopReason::GapTolerance);
            }
        }
        if let Some(budget) = self.stop.time_budget {
            if self.started.elapsed() >= budget {
                return Some(StopReason::TimeBudget);
            }
        }
        None
    }

    fn finish<P>(mut self, x: P, reason: StopReason) -> SolverRun<P> {
        self.trace.meta.stop_reason = Some(reason);
        SolverRun { trace: self.trace, x, stop_reason: reason }
    }
}
