use crate::diagnostics::{surrogate_step, SurrogateState};
use crate::error::{SetError, SolverError};
use crate::objectives::Objective;
use crate::sets::FeasibleSet;
use crate::space::{Direction, Iterate};

use super::{
    Algorithm, EsColumns, ProblemDescriptor, Recorder, Schedule, SolverRun, StopReason, StoppingRule, TraceMetadata,
};

/// Quantities of one AFW iteration, handed to observers.
pub struct AfwStep<'a, P, G> {
    pub k: usize,
    pub delta: f64,
    pub x: &'a P,
    pub v: &'a P,
    pub y: &'a P,
    pub grad_y: &'a G,
    pub theta_next: &'a G,
    pub v_next: &'a P,
    pub x_next: &'a P,
    /// θ_{k+1} was zero and v_{k+1} = v_k was kept.
    pub kept_momentum: bool,
    /// Surrogate state after the step, when diagnostics are on.
    pub surrogate: Option<&'a SurrogateState<P, G>>,
}

/// Accelerated Frank-Wolfe:
///
/// ```text
/// y_k     = (1−δ_k) x_k + δ_k v_k
/// θ_{k+1} = (1−δ_k) θ_k + δ_k ∇f(y_k)
/// v_{k+1} = argmin_{x∈X} ⟨θ_{k+1}, x⟩
/// x_{k+1} = (1−δ_k) x_k + δ_k v_{k+1}
/// ```
///
/// starting from θ₀ = 0 and v₀ = x₀. When θ_{k+1} = 0 the previous v_k is
/// kept; if that happens on the very first step, x₀ is already optimal and the
/// run stops with [`StopReason::Stationary`].
///
/// With `diagnostics` on, each row carries (Φ*_k, ξ_k, λ_k) from the linear
/// estimate sequence.
pub fn run_afw<O, S>(
    obj: &O,
    set: &S,
    x0: O::Point,
    schedule: &Schedule,
    stop: &StoppingRule,
    diagnostics: bool,
) -> Result<SolverRun<O::Point>, SolverError>
where
    O: Objective,
    S: FeasibleSet<O::Point, O::Grad> + ?Sized,
{
    run_afw_observed(obj, set, x0, schedule, stop, diagnostics, |_| {})
}

pub fn run_afw_observed<O, S>(
    obj: &O,
    set: &S,
    x0: O::Point,
    schedule: &Schedule,
    stop: &StoppingRule,
    diagnostics: bool,
    mut observer: impl FnMut(&AfwStep<'_, O::Point, O::Grad>),
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
        algorithm: Algorithm::Afw,
        schedule: Some(schedule.kind()),
        seed: None,
        problem: ProblemDescriptor { objective: obj.describe(), constraint: Some(set.descriptor()) },
        diagnostics,
        extra_columns: vec![],
        stop_reason: None,
    };
    let smoothness = obj.smoothness();
    let mut rec = Recorder::new(stop, meta);
    let mut x = x0;
    let mut v = x.clone();
    let mut theta: Option<O::Grad> = None;
    let mut surrogate: Option<SurrogateState<O::Point, O::Grad>> = None;
    let mut stationary = false;
    let mut last_delta = 0.0;

    for k in 0.. {
        let f = obj.value(&x);
        let grad_x = obj.gradient(&x);
        let gap = crate::diagnostics::fw_gap(&grad_x, &x, set)?;
        if diagnostics && surrogate.is_none() {
            surrogate = Some(SurrogateState::initial(f, &x, grad_x.zero_like()));
        }
        let es = surrogate.as_ref().map(|s| EsColumns { phi_star: s.phi_star, xi: s.xi, lambda: s.lambda });
        rec.push(k, f, gap, last_delta, es, vec![]);
        if stationary {
            return Ok(rec.finish(x, StopReason::Stationary));
        }
        if let Some(reason) = rec.should_stop(k, gap) {
            return Ok(rec.finish(x, reason));
        }

        let delta = schedule.checked_delta(k)?;
        // v₀ = x₀, so y₀ = x₀ exactly; blending would round
        let y = if k == 0 { x.clone() } else { x.blend(&v, delta) };
        let grad_y = obj.gradient(&y);
        let theta_next = match &theta {
            Some(t) => t.blend(&grad_y, delta),
            None => grad_y.zero_like().blend(&grad_y, delta),
        };
        let (v_next, kept_momentum) = match set.lmo(&theta_next) {
            Ok(v_next) => (v_next, false),
            Err(SetError::ZeroDirection) => (v.clone(), true),
            Err(e) => return Err(e.into()),
        };
        if kept_momentum && k == 0 {
            stationary = true;
        }
        let x_next = x.blend(&v_next, delta);
        if let Some(s) = surrogate.as_mut() {
            let f_y = obj.value(&y);
            *s = surrogate_step(s, delta, f_y, &grad_y, &y, &v_next, smoothness);
        }
        observer(&AfwStep {
            k,
            delta,
            x: &x,
            v: &v,
            y: &y,
            grad_y: &grad_y,
            theta_next: &theta_next,
            v_next: &v_next,
            x_next: &x_next,
            kept_momentum,
            surrogate: surrogate.as_ref(),
        });
        x = x_next;
        v = v_next;
        theta = Some(theta_next);
        last_delta = delta;
    }
    unreachable!("loop exits through the stopping rule")
}
