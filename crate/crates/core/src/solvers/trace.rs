use serde::{Deserialize, Serialize};

use crate::sets::SetDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Fw,
    Afw,
    Agm,
    AgmSc,
    Pgd,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fw => "fw",
            Algorithm::Afw => "afw",
            Algorithm::Agm => "agm",
            Algorithm::AgmSc => "agm_sc",
            Algorithm::Pgd => "pgd",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fw" => Ok(Algorithm::Fw),
            "afw" => Ok(Algorithm::Afw),
            "agm" => Ok(Algorithm::Agm),
            "agm_sc" => Ok(Algorithm::AgmSc),
            "pgd" => Ok(Algorithm::Pgd),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// δ_k = 2/(k+2)
    FwClassic,
    /// δ_k = 2/(k+3)
    AfwShifted,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIters,
    GapTolerance,
    TimeBudget,
    /// Zero gradient (FW) or zero θ on the first step (AFW): x₀ is optimal.
    Stationary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDescriptor {
    pub objective: String,
    pub constraint: Option<SetDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub algorithm: Algorithm,
    pub schedule: Option<ScheduleKind>,
    pub seed: Option<u64>,
    pub problem: ProblemDescriptor,
    /// Estimate-sequence columns (phi_star, xi, lambda) are present.
    pub diagnostics: bool,
    /// Names of algorithm-specific columns following the standard ones.
    pub extra_columns: Vec<String>,
    pub stop_reason: Option<StopReason>,
}

/// Estimate-sequence bookkeeping at iteration k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsColumns {
    pub phi_star: f64,
    pub xi: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub f_value: f64,
    /// FW gap at x_k; NaN when the algorithm has no constraint set.
    pub fw_gap: f64,
    /// Step that produced x_k (0 at k = 0).
    pub step_delta: f64,
    pub wall_time_ns: u64,
    pub es: Option<EsColumns>,
    pub extra: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    pub meta: TraceMetadata,
    pub rows: Vec<TraceRow>,
}

impl SolverTrace {
    pub fn new(meta: TraceMetadata) -> Self {
        Self { meta, rows: Vec::new() }
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn final_value(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.f_value)
    }

    pub fn best_value(&self) -> f64 {
        self.rows.iter().map(|r| r.f_value).fold(f64::INFINITY, f64::min)
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.f_value).collect()
    }

    /// Column index of a named extra column.
    pub fn extra_index(&self, name: &str) -> Option<usize> {
        self.meta.extra_columns.iter().position(|c| c == name)
    }

    pub fn extra_column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.extra_index(name)?;
        Some(self.rows.iter().map(|r| r.extra[i]).collect())
    }

    /// First k with f(x_k) − f_star ≤ tol.
    pub fn iterations_to(&self, f_star: f64, tol: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.f_value - f_star <= tol).map(|r| r.k)
    }

    /// Gap f(x_k) − f_star at iteration k, if recorded.
    pub fn gap_at(&self, k: usize, f_star: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.k == k).map(|r| r.f_value - f_star)
    }
}
