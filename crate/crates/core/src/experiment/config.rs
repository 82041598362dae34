use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ConfigError;
use crate::sets::SetDescriptor;
use crate::solvers::Algorithm;

/// Problem family of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemConfig {
    /// f(x) = scale·‖x − c‖² with a seeded random c of norm `center_norm`.
    Quadratic {
        dim: Option<usize>,
        center_norm: Option<f64>,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Logistic loss over a LIBSVM file.
    Logistic { path: Option<PathBuf>, dim: Option<usize> },
    /// Squared loss on the observed entries of a MovieLens `u.data` file.
    Matcomp { path: Option<PathBuf>, scale: Option<(f64, f64)> },
    /// Squared loss on a seeded random low-rank matrix with unit Frobenius norm.
    MatcompSynthetic { rows: usize, cols: usize, rank: usize, observed_fraction: f64 },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    L2,
    L1,
    Lp,
    Nuclear,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintConfig {
    pub set: Option<SetKind>,
    pub radius: Option<f64>,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FStarPolicy {
    /// Closed form: projected center for quadratics on an ℓ2 ball, zero for
    /// noiseless synthetic completion at the true nuclear norm.
    Analytic,
    /// Best value seen by long reference runs and the experiment itself.
    ReferenceRun { iters: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Option<ProblemConfig>,
    #[serde(default)]
    pub constraint: ConstraintConfig,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    pub iters: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub diagnostics: bool,
    pub fstar_policy: Option<FStarPolicy>,
}

/// Default iteration budgets for vector problems and MovieLens completion.
pub const DEFAULT_VECTOR_ITERS: usize = 10_000;
pub const DEFAULT_MATCOMP_ITERS: usize = 300;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::new("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn problem(&self) -> Result<&ProblemConfig, ConfigError> {
        self.problem.as_ref().ok_or_else(|| ConfigError::new("problem", "missing"))
    }

    pub fn is_matcomp(&self) -> bool {
        matches!(self.problem, Some(ProblemConfig::Matcomp { .. } | ProblemConfig::MatcompSynthetic { .. }))
    }

    pub fn iterations(&self) -> usize {
        self.iters.unwrap_or(if self.is_matcomp() { DEFAULT_MATCOMP_ITERS } else { DEFAULT_VECTOR_ITERS })
    }

    pub fn fstar(&self) -> FStarPolicy {
        self.fstar_policy.unwrap_or(FStarPolicy::ReferenceRun { iters: 10 * self.iterations() })
    }

    /// Checks every field that can be checked without touching data files.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let problem = self.problem()?;
        match problem {
            ProblemConfig::Quadratic { dim, center_norm, scale } => {
                match dim {
                    None => return Err(ConfigError::new("problem.dim", "missing")),
                    Some(0) => return Err(ConfigError::new("problem.dim", "must be at least 1")),
                    _ => {}
                }
                match center_norm {
                    None => return Err(ConfigError::new("problem.center_norm", "missing")),
                    Some(c) if !(c.is_finite() && *c >= 0.0) => {
                        return Err(ConfigError::new("problem.center_norm", "must be finite and non-negative"))
                    }
                    _ => {}
                }
                if !(scale.is_finite() && *scale > 0.0) {
                    return Err(ConfigError::new("problem.scale", "must be positive"));
                }
            }
            ProblemConfig::Logistic { path, .. } | ProblemConfig::Matcomp { path, .. } => {
                if path.is_none() {
                    return Err(ConfigError::new("problem.path", "missing"));
                }
            }
            ProblemConfig::MatcompSynthetic { rows, cols, rank, observed_fraction } => {
                if *rows == 0 || *cols == 0 || *rank == 0 {
                    return Err(ConfigError::new("problem", "rows, cols and rank must be positive"));
                }
                if !(*observed_fraction > 0.0 && *observed_fraction <= 1.0) {
                    return Err(ConfigError::new("problem.observed_fraction", "must lie in (0, 1]"));
                }
            }
        }

        let set = self.constraint.set.ok_or_else(|| ConfigError::new("constraint.set", "missing"))?;
        match self.constraint.radius {
            None => return Err(ConfigError::new("constraint.radius", "missing")),
            Some(r) if !(r.is_finite() && r > 0.0) => {
                return Err(ConfigError::new("constraint.radius", format!("must be positive, got {r}")))
            }
            _ => {}
        }
        if set == SetKind::Lp {
            match self.constraint.p {
                None => return Err(ConfigError::new("constraint.p", "missing for an lp ball")),
                Some(p) if !(p.is_finite() && p > 1.0) => {
                    return Err(ConfigError::new("constraint.p", format!("must lie in (1, inf), got {p}")))
                }
                _ => {}
            }
        }
        let matrix = self.is_matcomp();
        if matrix != (set == SetKind::Nuclear) {
            return Err(ConfigError::new(
                "constraint.set",
                "matrix completion needs a nuclear ball and vector problems a norm ball",
            ));
        }

        if self.algorithms.is_empty() {
            return Err(ConfigError::new("algorithms", "at least one algorithm is required"));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return Err(ConfigError::new("algorithms", format!("{a} listed twice")));
            }
            let ok = match a {
                Algorithm::Fw | Algorithm::Afw => true,
                Algorithm::Agm | Algorithm::Pgd => matches!(set, SetKind::L2 | SetKind::L1),
                Algorithm::AgmSc => matches!(problem, ProblemConfig::Quadratic { .. }),
            };
            if !ok {
                return Err(ConfigError::new(
                    "algorithms",
                    format!("{a} is not available here (agm/pgd need an l2 or l1 ball, agm_sc a quadratic)"),
                ));
            }
        }
        if self.iters == Some(0) {
            return Err(ConfigError::new("iters", "must be at least 1"));
        }
        match self.fstar() {
            FStarPolicy::ReferenceRun { iters: 0 } => {
                return Err(ConfigError::new("fstar_policy.reference_run.iters", "must be at least 1"))
            }
            FStarPolicy::Analytic => {
                let ok = matches!(
                    (problem, set),
                    (ProblemConfig::Quadratic { .. }, SetKind::L2) | (ProblemConfig::MatcompSynthetic { .. }, _)
                );
                if !ok {
                    return Err(ConfigError::new(
                        "fstar_policy",
                        "analytic f* exists only for quadratics on an l2 ball and synthetic completion",
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Set descriptor for vector problems; matrix shapes are filled in later.
    pub fn vector_set(&self) -> Option<SetDescriptor> {
        let radius = self.constraint.radius?;
        match self.constraint.set? {
            SetKind::L2 => Some(SetDescriptor::L2Ball { radius }),
            SetKind::L1 => Some(SetDescriptor::L1Ball { radius }),
            SetKind::Lp => Some(SetDescriptor::LpBall { radius, p: self.constraint.p? }),
            SetKind::Nuclear => None,
        }
    }
}
