use crate::error::SolverError;
use crate::linalg::DenseVector;
use crate::objectives::VectorObjective;
use crate::sets::FeasibleSet;

use super::{Algorithm, ProblemDescriptor, Recorder, SolverRun, StoppingRule, TraceMetadata};

/// Projected gradient descent with constant step 1/L:
/// x_{k+1} = Π(x_k − ∇f(x_k)/L).
pub fn run_projected_gd<O: VectorObjective>(
    obj: &O,
    set: &dyn FeasibleSet<DenseVector, DenseVector>,
    x0: DenseVector,
    stop: &StoppingRule,
) -> Result<SolverRun<DenseVector>, SolverError> {
    stop.validate()?;
    if !set.has_projection() {
        return Err(SolverError::MissingProjection);
    }
    if !set.contains(&x0) {
        return Err(SolverError::InfeasibleStart);
    }
    let meta = TraceMetadata {
        algorithm: Algorithm::Pgd,
        schedule: None,
        seed: None,
        problem: ProblemDescriptor { objective: obj.describe(), constraint: Some(set.descriptor()) },
        diagnostics: false,
        extra_columns: vec![],
        stop_reason: None,
    };
    let step = 1.0 / obj.smoothness();
    let mut rec = Recorder::new(stop, meta);
    let mut x = x0;
    for k in 0.. {
        let grad = obj.gradient(&x);
        let gap = crate::diagnostics::fw_gap(&grad, &x, set)?;
        rec.push(k, obj.value(&x), gap, if k == 0 { 0.0 } else { step }, None, vec![]);
        if let Some(reason) = rec.should_stop(k, gap) {
            return Ok(rec.finish(x, reason));
        }
        x = set.project(&x.add_scaled(-step, &grad)).expect("projection checked above");
    }
    unreachable!("loop exits through the stopping rule")
}
