use crate::error::{SetError, SolverError};
use crate::objectives::Objective;
use crate::sets::FeasibleSet;
use crate::space::{Direction, Iterate};

use super::{Algorithm, ProblemDescriptor, Recorder, Schedule, SolverRun, StopReason, StoppingRule, TraceMetadata};

/// Quantities of one FW iteration, handed to observers.
pub struct FwStep<'a, P, G> {
    pub k: usize,
    pub delta: f64,
    pub x: &'a P,
    pub grad: &'a G,
    pub v_next: &'a P,
    pub x_next: &'a P,
}

/// Frank-Wolfe: v_{k+1} = lmo(∇f(x_k)), x_{k+1} = (1−δ_k)x_k + δ_k v_{k+1}.
pub fn run_fw<O, S>(
    obj: &O,
    set: &S,
    x0: O::Point,
    schedule: &Schedule,
    stop: &StoppingRule,
) -> Result<SolverRun<O::Point>, SolverError>
where
    O: Objective,
    S: FeasibleSet<O::Point, O::Grad> + ?Sized,
{
    run_fw_observed(obj, set, x0, schedule, stop, |_| {})
}

pub fn run_fw_observed<O, S>(
    obj: &O,
    set: &S,
    x0: O::Point,
    schedule: &Schedule,
    stop: &StoppingRule,
    mut observer: impl FnMut(&FwStep<'_, O::Point, O::Grad>),
) -> Result<SolverRun<O::Point>, SolverError>
where
    O: Objective,
    S: FeasibleSet<O::Point, O::Grad> + ?Sized,
{
    stop.validate()?;
    if !set.contains(&x0) {
        return Err(SolverError::InfeasibleStart);
    }
    let meta = TraceMetadata {
        algorithm: Algorithm::Fw,
        schedule: Some(schedule.kind()),
        seed: None,
        problem: ProblemDescriptor { objective: obj.describe(), constraint: Some(set.descriptor()) },
        diagnostics: false,
        extra_columns: vec![],
        stop_reason: None,
    };
    let mut rec = Recorder::new(stop, meta);
    let mut x = x0;
    let mut v = x.clone();
    let mut last_delta = 0.0;
    for k in 0.. {
        let f = obj.value(&x);
        let grad = obj.gradient(&x);
        let (v_next, gap, stationary) = match set.lmo(&grad) {
            Ok(v_next) => {
                let gap = grad.pair(&x) - grad.pair(&v_next);
                (v_next, gap, false)
            }
            // zero gradient: x_k is a global minimizer, keep v
            Err(SetError::ZeroDirection) => (v.clone(), 0.0, true),
            Err(e) => return Err(e.into()),
        };
        rec.push(k, f, gap, last_delta, None, vec![]);
        if stationary {
            return Ok(rec.finish(x, StopReason::Stationary));
        }
        if let Some(reason) = rec.should_stop(k, gap) {
            return Ok(rec.finish(x, reason));
        }
        let delta = schedule.checked_delta(k)?;
        let x_next = x.blend(&v_next, delta);
        observer(&FwStep { k, delta, x: &x, grad: &grad, v_next: &v_next, x_next: &x_next });
        x = x_next;
        v = v_next;
        last_delta = delta;
    }
    unreachable!("loop exits through the stopping rule")
}
