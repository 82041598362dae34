use crate::error::SolverError;
use crate::linalg::DenseVector;
use crate::objectives::VectorObjective;
use crate::sets::FeasibleSet;

use super::{Algorithm, ProblemDescriptor, Recorder, ScheduleKind, SolverRun, StoppingRule, TraceMetadata};

/// ‖∇f(y_k)‖²
pub const AGM_GRAD_Y_SQ: &str = "grad_y_sq";
/// f(y_k) + ⟨∇f(y_k), v_{k+1} − y_k⟩, the term averaged by the weighted dual gap.
pub const AGM_LOWER_MODEL: &str = "lower_model";
/// ‖v_k − x_ref‖, present when a reference point is given.
pub const AGM_DIST_REF: &str = "dist_v_ref";

/// Quantities of one AGM iteration, handed to observers.
pub struct AgmStep<'a> {
    pub k: usize,
    pub delta: f64,
    /// μ_{k+1} = (1 − δ_k) μ_k
    pub mu_next: f64,
    pub x: &'a DenseVector,
    pub v: &'a DenseVector,
    pub y: &'a DenseVector,
    pub f_y: f64,
    pub grad_y: &'a DenseVector,
    pub x_next: &'a DenseVector,
    pub v_next: &'a DenseVector,
}

/// Nesterov's accelerated gradient method with δ_k = 2/(k+3), μ₀ = 2L,
/// μ_{k+1} = (1−δ_k)μ_k:
///
/// ```text
/// y_k     = δ_k v_k + (1−δ_k) x_k
/// x_{k+1} = y_k − ∇f(y_k)/L
/// v_{k+1} = v_k − (δ_k/μ_{k+1}) ∇f(y_k)
/// ```
///
/// Rows carry the extra columns [`AGM_GRAD_Y_SQ`] and [`AGM_LOWER_MODEL`]
/// (NaN on the final row, which has no y).
pub fn run_agm<O: VectorObjective>(
    obj: &O,
    x0: DenseVector,
    stop: &StoppingRule,
) -> Result<SolverRun<DenseVector>, SolverError> {
    run_agm_observed(obj, None, x0, stop, None, |_| {})
}

/// AGM with both the gradient step and the momentum step projected back onto
/// the set, so every x_k, v_k (and hence y_k) is feasible.
pub fn run_projected_agm<O: VectorObjective>(
    obj: &O,
    set: &dyn FeasibleSet<DenseVector, DenseVector>,
    x0: DenseVector,
    stop: &StoppingRule,
) -> Result<SolverRun<DenseVector>, SolverError> {
    run_agm_observed(obj, Some(set), x0, stop, None, |_| {})
}

/// Full-control variant: optional projection set, optional reference point
/// (adds the [`AGM_DIST_REF`] column) and a per-iteration observer.
pub fn run_agm_observed<O: VectorObjective>(
    obj: &O,
    set: Option<&dyn FeasibleSet<DenseVector, DenseVector>>,
    x0: DenseVector,
    stop: &StoppingRule,
    reference: Option<&DenseVector>,
    mut observer: impl FnMut(&AgmStep<'_>),
) -> Result<SolverRun<DenseVector>, SolverError> {
    stop.validate()?;
    if let Some(s) = set {
        if !s.has_projection() {
            return Err(SolverError::MissingProjection);
        }
        if !s.contains(&x0) {
            return Err(SolverError::InfeasibleStart);
        }
    }
    let project = |z: DenseVector| -> DenseVector {
        match set {
            Some(s) => s.project(&z).expect("projection checked above"),
            None => z,
        }
    };
    let mut extra_columns = vec![AGM_GRAD_Y_SQ.to_string(), AGM_LOWER_MODEL.to_string()];
    if reference.is_some() {
        extra_columns.push(AGM_DIST_REF.to_string());
    }
    let meta = TraceMetadata {
        algorithm: Algorithm::Agm,
        schedule: Some(ScheduleKind::AfwShifted),
        seed: None,
        problem: ProblemDescriptor { objective: obj.describe(), constraint: set.map(|s| s.descriptor()) },
        diagnostics: false,
        extra_columns,
        stop_reason: None,
    };
    let l = obj.smoothness();
    let mut rec = Recorder::new(stop, meta);
    let mut x = x0;
    let mut v = x.clone();
    let mut mu = 2.0 * l;
    let mut last_delta = 0.0;

    for k in 0.. {
        let f = obj.value(&x);
        let gap = match set {
            Some(s) => crate::diagnostics::fw_gap(&obj.gradient(&x), &x, s)?,
            None => f64::NAN,
        };
        let dist_ref = reference.map(|r| v.dist_sq(r).sqrt());
        let reason = rec.should_stop(k, gap);
        if let Some(reason) = reason {
            let mut extra = vec![f64::NAN, f64::NAN];
            extra.extend(dist_ref);
            rec.push(k, f, gap, last_delta, None, extra);
            return Ok(rec.finish(x, reason));
        }

        let delta = 2.0 / (k as f64 + 3.0);
        let y = v.scaled(delta).add_scaled(1.0 - delta, &x);
        let grad_y = obj.gradient(&y);
        let f_y = obj.value(&y);
        let mu_next = (1.0 - delta) * mu;
        let x_next = project(y.add_scaled(-1.0 / l, &grad_y));
        let v_next = project(v.add_scaled(-delta / mu_next, &grad_y));

        let lower_model = f_y + grad_y.dot(&v_next) - grad_y.dot(&y);
        let mut extra = vec![grad_y.norm_sq(), lower_model];
        extra.extend(dist_ref);
        rec.push(k, f, gap, last_delta, None, extra);

        observer(&AgmStep {
            k,
            delta,
            mu_next,
            x: &x,
            v: &v,
            y: &y,
            f_y,
            grad_y: &grad_y,
            x_next: &x_next,
            v_next: &v_next,
        });
        x = x_next;
        v = v_next;
        mu = mu_next;
        last_delta = delta;
    }
    unreachable!("loop exits through the stopping rule")
}

/// Quantities of one strongly convex AGM iteration.
pub struct AgmScStep<'a> {
    pub k: usize,
    /// δ = 1/√κ
    pub delta: f64,
    pub v: &'a DenseVector,
    pub y: &'a DenseVector,
    pub grad_y: &'a DenseVector,
    /// z_{k+1} = y_k − ∇f(y_k)/μ, minimizer of the strongly convex lower model.
    pub z_next: &'a DenseVector,
    pub v_next: &'a DenseVector,
    pub x_next: &'a DenseVector,
}

/// AGM for μ-strongly convex objectives with δ = 1/√κ:
///
/// ```text
/// y_k     = x_k/(1+δ) + δ v_k/(1+δ)
/// x_{k+1} = y_k − ∇f(y_k)/L
/// v_{k+1} = (1−δ) v_k + δ y_k − (δ/μ) ∇f(y_k)
/// ```
pub fn run_agm_sc<O: VectorObjective>(
    obj: &O,
    x0: DenseVector,
    stop: &StoppingRule,
) -> Result<SolverRun<DenseVector>, SolverError> {
    run_agm_sc_observed(obj, x0, stop, |_| {})
}

pub fn run_agm_sc_observed<O: VectorObjective>(
    obj: &O,
    x0: DenseVector,
    stop: &StoppingRule,
    mut observer: impl FnMut(&AgmScStep<'_>),
) -> Result<SolverRun<DenseVector>, SolverError> {
    stop.validate()?;
    let mu = match obj.strong_convexity() {
        Some(mu) if mu > 0.0 => mu,
        _ => return Err(SolverError::MissingStrongConvexity),
    };
    let l = obj.smoothness();
    let delta = (mu / l).sqrt();
    let meta = TraceMetadata {
        algorithm: Algorithm::AgmSc,
        schedule: None,
        seed: None,
        problem: ProblemDescriptor { objective: obj.describe(), constraint: None },
        diagnostics: false,
        extra_columns: vec![],
        stop_reason: None,
    };
    let mut rec = Recorder::new(stop, meta);
    let mut x = x0;
    let mut v = x.clone();
    for k in 0.. {
        rec.push(k, obj.value(&x), f64::NAN, if k == 0 { 0.0 } else { delta }, None, vec![]);
        if let Some(reason) = rec.should_stop(k, f64::NAN) {
            return Ok(rec.finish(x, reason));
        }
        let y = x.scaled(1.0 / (1.0 + delta)).add_scaled(delta / (1.0 + delta), &v);
        let grad_y = obj.gradient(&y);
        let x_next = y.add_scaled(-1.0 / l, &grad_y);
        let v_next = v.scaled(1.0 - delta).add_scaled(delta, &y).add_scaled(-delta / mu, &grad_y);
        let z_next = y.add_scaled(-1.0 / mu, &grad_y);
        observer(&AgmScStep {
            k,
            delta,
            v: &v,
            y: &y,
            grad_y: &grad_y,
            z_next: &z_next,
            v_next: &v_next,
            x_next: &x_next,
        });
        x = x_next;
        v = v_next;
    }
    unreachable!("loop exits through the stopping rule")
}
