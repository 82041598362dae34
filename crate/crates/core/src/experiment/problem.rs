use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, FStarPolicy, ProblemConfig};
use super::CliError;
use crate::data_io::{read_libsvm, read_movielens, synthetic_low_rank};
use crate::linalg::{DenseVector, Seed, SparseMatrix};
use crate::matrix::FactoredMatrix;
use crate::objectives::{
    logistic_objective, matcomp_objective, quadratic_objective, LogisticProblem, MatCompProblem, MatrixCompletion,
    Logistic, Objective, Quadratic,
};
use crate::sets::{FeasibleSet, NormBall, NuclearBall, SetDescriptor};
use crate::solvers::{
    run_afw, run_afw_observed, run_agm_sc, run_fw, run_fw_observed, run_projected_agm, run_projected_gd, Algorithm,
    Schedule, SolverTrace, StoppingRule,
};

// Independent random streams derived from the experiment seed.
const STREAM_CENTER: u64 = 1;
const STREAM_X0: u64 = 2;
const STREAM_POWER: u64 = 3;
const STREAM_SYNTHETIC: u64 = 4;

/// Relative singular-value cutoff for the numerical rank of X_k.
const RANK_REL_TOL: f64 = 1e-9;
const CONSOLIDATE_TOL: f64 = 1e-12;

/// Iterations at which matrix ranks are sampled: 1, 2, 5, 10, 20, 50, …
pub fn log_points(max_k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut decade = 1usize;
    'outer: loop {
        for m in [1, 2, 5] {
            let k = m * decade;
            if k > max_k {
                break 'outer;
            }
            out.push(k);
        }
        decade *= 10;
    }
    out
}

/// Rank of X_k at a log point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSample {
    pub k: usize,
    /// Atoms left after merging identical outer products.
    pub atoms: usize,
    /// Singular values above 1e-9 relative to the largest.
    pub numerical_rank: usize,
}

impl RankSample {
    fn of(k: usize, x: &FactoredMatrix) -> Self {
        let mut x = x.clone();
        x.consolidate(CONSOLIDATE_TOL);
        RankSample { k, atoms: x.atom_count(), numerical_rank: x.numerical_rank(RANK_REL_TOL) }
    }
}

/// The vector objectives the runner knows about.
#[derive(Debug, Clone)]
pub(super) enum VectorProblem {
    Quadratic(Quadratic),
    Logistic(Logistic),
}

impl Objective for VectorProblem {
    type Point = DenseVector;
    type Grad = DenseVector;

    fn value(&self, x: &DenseVector) -> f64 {
        match self {
            VectorProblem::Quadratic(f) => f.value(x),
            VectorProblem::Logistic(f) => f.value(x),
        }
    }

    fn gradient(&self, x: &DenseVector) -> DenseVector {
        match self {
            VectorProblem::Quadratic(f) => f.gradient(x),
            VectorProblem::Logistic(f) => f.gradient(x),
        }
    }

    fn smoothness(&self) -> f64 {
        match self {
            VectorProblem::Quadratic(f) => f.smoothness(),
            VectorProblem::Logistic(f) => f.smoothness(),
        }
    }

    fn strong_convexity(&self) -> Option<f64> {
        match self {
            VectorProblem::Quadratic(f) => f.strong_convexity(),
            VectorProblem::Logistic(f) => f.strong_convexity(),
        }
    }

    fn describe(&self) -> String {
        match self {
            VectorProblem::Quadratic(f) => f.describe(),
            VectorProblem::Logistic(f) => f.describe(),
        }
    }
}

/// Result of one algorithm on the configured problem.
pub(super) struct Outcome {
    pub trace: SolverTrace,
    pub rank_samples: Vec<RankSample>,
    pub wall_clock_s: f64,
    /// Solved without the constraint (agm_sc).
    pub unconstrained: bool,
}

pub(super) enum Built {
    Vector { obj: VectorProblem, ball: NormBall, x0: DenseVector },
    Matrix { obj: MatrixCompletion, radius: f64, power_seed: Seed, x0: FactoredMatrix, f_star_zero: bool },
}

impl Built {
    pub fn new(config: &ExperimentConfig, seed: Seed) -> Result<Built, CliError> {
        let radius = config.constraint.radius.expect("validated");
        match config.problem()? {
            ProblemConfig::Quadratic { dim, center_norm, scale } => {
                let (dim, center_norm) = (dim.expect("validated"), center_norm.expect("validated"));
                let center = DenseVector::random_unit(dim, &mut seed.derive(STREAM_CENTER).rng()).scaled(center_norm);
                let obj = VectorProblem::Quadratic(quadratic_objective(center, *scale)?);
                let ball = vector_ball(config)?;
                let x0 = interior_start(&ball, dim, seed);
                Ok(Built::Vector { obj, ball, x0 })
            }
            ProblemConfig::Logistic { path, dim } => {
                let ds = read_libsvm(path.as_ref().expect("validated"), *dim)?;
                let d = ds.dim();
                let obj = VectorProblem::Logistic(logistic_objective(LogisticProblem::new(ds.features, ds.labels)?)?);
                Ok(Built::Vector { obj, ball: vector_ball(config)?, x0: DenseVector::zeros(d) })
            }
            ProblemConfig::Matcomp { path, scale } => {
                let ds = read_movielens(path.as_ref().expect("validated"), *scale)?;
                Self::matrix(ds.ratings, radius, seed, false)
            }
            ProblemConfig::MatcompSynthetic { rows, cols, rank, observed_fraction } => {
                let inst = synthetic_low_rank(*rows, *cols, *rank, *observed_fraction, seed.derive(STREAM_SYNTHETIC))
                    .map_err(crate::error::DataError::from)?;
                // the truth is feasible iff R ≥ ‖M‖_*, and then f* = 0
                let feasible = radius >= inst.nuclear_norm * (1.0 - 1e-12);
                Self::matrix(inst.observed, radius, seed, feasible)
            }
        }
    }

    fn matrix(observed: SparseMatrix, radius: f64, seed: Seed, f_star_zero: bool) -> Result<Built, CliError> {
        let obj = matcomp_objective(MatCompProblem::new(observed)?);
        let (m, n) = obj.shape();
        let power_seed = seed.derive(STREAM_POWER);
        let x0 = NuclearBall::new(radius, m, n, power_seed)?.aligned_vertex(obj.mask())?;
        Ok(Built::Matrix { obj, radius, power_seed, x0, f_star_zero })
    }

    pub fn objective_description(&self) -> String {
        match self {
            Built::Vector { obj, .. } => obj.describe(),
            Built::Matrix { obj, .. } => obj.describe(),
        }
    }

    pub fn descriptor(&self) -> SetDescriptor {
        match self {
            Built::Vector { ball, .. } => ball.descriptor(),
            Built::Matrix { obj, radius, .. } => {
                let (rows, cols) = obj.shape();
                SetDescriptor::NuclearBall { radius: *radius, rows, cols }
            }
        }
    }

    fn nuclear_ball(&self) -> Option<NuclearBall> {
        match self {
            Built::Matrix { obj, radius, power_seed, .. } => {
                let (m, n) = obj.shape();
                Some(NuclearBall::new(*radius, m, n, *power_seed).expect("radius validated"))
            }
            Built::Vector { .. } => None,
        }
    }

    /// Runs one algorithm; every call owns its own oracle state, so cells can
    /// run on separate threads without affecting each other's traces.
    pub fn run(&self, algorithm: Algorithm, iters: usize, diagnostics: bool) -> Result<Outcome, CliError> {
        let stop = StoppingRule::iterations(iters);
        let started = std::time::Instant::now();
        let mut rank_samples = Vec::new();
        let trace = match self {
            Built::Vector { obj, ball, x0 } => {
                let x0 = x0.clone();
                match algorithm {
                    Algorithm::Fw => run_fw(obj, ball, x0, &Schedule::FwClassic, &stop)?.trace,
                    Algorithm::Afw => run_afw(obj, ball, x0, &Schedule::AfwShifted, &stop, diagnostics)?.trace,
                    Algorithm::Agm => run_projected_agm(obj, ball, x0, &stop)?.trace,
                    Algorithm::Pgd => run_projected_gd(obj, ball, x0, &stop)?.trace,
                    Algorithm::AgmSc => run_agm_sc(obj, x0, &stop)?.trace,
                }
            }
            Built::Matrix { obj, x0, .. } => {
                let ball = self.nuclear_ball().expect("matrix problem");
                let points = log_points(iters);
                rank_samples.push(RankSample::of(0, x0));
                let mut sample = |k_next: usize, x: &FactoredMatrix| {
                    if points.binary_search(&k_next).is_ok() {
                        rank_samples.push(RankSample::of(k_next, x));
                    }
                };
                match algorithm {
                    Algorithm::Fw => {
                        run_fw_observed(obj, &ball, x0.clone(), &Schedule::FwClassic, &stop, |s| {
                            sample(s.k + 1, s.x_next)
                        })?
                        .trace
                    }
                    Algorithm::Afw => {
                        run_afw_observed(obj, &ball, x0.clone(), &Schedule::AfwShifted, &stop, diagnostics, |s| {
                            sample(s.k + 1, s.x_next)
                        })?
                        .trace
                    }
                    other => unreachable!("{other} rejected by config validation for matrix problems"),
                }
            }
        };
        let unconstrained = algorithm == Algorithm::AgmSc;
        Ok(Outcome { trace, rank_samples, wall_clock_s: started.elapsed().as_secs_f64(), unconstrained })
    }

    /// f* for the constrained problem, and where it came from. `seen` is the
    /// best value over the experiment's own constrained traces.
    pub fn f_star(&self, policy: FStarPolicy, seen: f64) -> Result<(f64, String), CliError> {
        match policy {
            FStarPolicy::Analytic => match self {
                Built::Vector { obj: VectorProblem::Quadratic(q), ball, .. } => {
                    let x_star = q.l2_ball_minimizer(ball.radius()).expect("isotropic");
                    Ok((q.value(&x_star), "analytic".into()))
                }
                Built::Matrix { f_star_zero: true, .. } => Ok((0.0, "analytic".into())),
                Built::Matrix { .. } => Err(super::ConfigError::new(
                    "fstar_policy",
                    "analytic f* needs a radius of at least the true nuclear norm",
                )
                .into()),
                _ => Err(super::ConfigError::new("fstar_policy", "no closed form for this problem").into()),
            },
            FStarPolicy::ReferenceRun { iters } => {
                let reference = match self {
                    Built::Vector { ball, .. } if ball.has_projection() => self.run(Algorithm::Agm, iters, false)?,
                    _ => self.run(Algorithm::Afw, iters, false)?,
                };
                let best = reference.trace.best_value().min(seen);
                Ok((best, format!("reference_run(iters={iters})")))
            }
        }
    }

    /// f* of the unconstrained problem, used for agm_sc.
    pub fn unconstrained_f_star(&self) -> f64 {
        // every configured strongly convex objective is a quadratic with minimum 0
        0.0
    }
}

fn vector_ball(config: &ExperimentConfig) -> Result<NormBall, CliError> {
    Ok(match config.vector_set().expect("validated") {
        SetDescriptor::L2Ball { radius } => NormBall::l2(radius)?,
        SetDescriptor::L1Ball { radius } => NormBall::l1(radius)?,
        SetDescriptor::LpBall { radius, p } => NormBall::lp(radius, p)?,
        SetDescriptor::NuclearBall { .. } => unreachable!("vector problems use norm balls"),
    })
}

/// Random direction scaled to half the radius in the ball's own norm.
fn interior_start(ball: &NormBall, dim: usize, seed: Seed) -> DenseVector {
    let u = DenseVector::random_unit(dim, &mut seed.derive(STREAM_X0).rng());
    u.scaled(0.5 * ball.radius() / ball.norm_of(&u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_points_are_geometric() {
        assert_eq!(log_points(300), vec![1, 2, 5, 10, 20, 50, 100, 200]);
        assert_eq!(log_points(0), Vec::<usize>::new());
    }
}
