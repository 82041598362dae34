use momentum_fw::error::SolverError;
use momentum_fw::linalg::{DenseVector, Seed};
use momentum_fw::objectives::{quadratic_objective, Objective, Quadratic};
use momentum_fw::sets::{FeasibleSet, NormBall};
use momentum_fw::solvers::{
    run_afw, run_afw_observed, run_agm, run_agm_sc, run_fw, run_fw_observed, run_projected_agm, run_projected_gd,
    Algorithm, Schedule, StopReason, StoppingRule,
};

fn problem(center_norm: f64) -> (Quadratic, DenseVector) {
    let c = DenseVector::random_unit(8, &mut Seed(3).rng()).scaled(center_norm);
    (quadratic_objective(c.clone(), 1.0).unwrap(), DenseVector::basis(8, 0, 0.5))
}

#[test]
fn iterates_stay_feasible() {
    let (f, x0) = problem(3.0);
    for ball in [NormBall::l2(1.0).unwrap(), NormBall::l1(1.0).unwrap(), NormBall::lp(1.0, 3.0).unwrap()] {
        let stop = StoppingRule::iterations(200);
        let mut ok = true;
        run_fw_observed(&f, &ball, x0.clone(), &Schedule::FwClassic, &stop, |st| ok &= ball.contains(st.x_next)).unwrap();
        run_afw_observed(&f, &ball, x0.clone(), &Schedule::AfwShifted, &stop, false, |st| {
            ok &= ball.contains(st.x_next) && ball.contains(st.y)
        })
        .unwrap();
        assert!(ok, "{:?}", ball.descriptor());
    }
}

#[test]
fn trace_shape_and_metadata() {
    let (f, x0) = problem(3.0);
    let ball = NormBall::l2(1.0).unwrap();
    let run = run_afw(&f, &ball, x0, &Schedule::AfwShifted, &StoppingRule::iterations(50), true).unwrap();
    assert_eq!(run.trace.rows.len(), 51);
    assert!(run.trace.rows.iter().enumerate().all(|(i, r)| r.k == i && r.es.is_some() && r.wall_time_ns == 0));
    assert_eq!(run.trace.rows[0].step_delta, 0.0);
    assert_eq!(run.trace.rows[1].step_delta, 2.0 / 3.0);
    assert_eq!(run.trace.meta.algorithm, Algorithm::Afw);
    assert_eq!(run.stop_reason, StopReason::MaxIters);
    assert_eq!(run.trace.final_value(), f.value(&run.x));
}

#[test]
fn runs_are_deterministic() {
    let (f, x0) = problem(3.0);
    let ball = NormBall::l1(1.0).unwrap();
    let stop = StoppingRule::iterations(300);
    let a = run_afw(&f, &ball, x0.clone(), &Schedule::AfwShifted, &stop, true).unwrap();
    let b = run_afw(&f, &ball, x0, &Schedule::AfwShifted, &stop, true).unwrap();
    assert_eq!(a.trace, b.trace);
}

#[test]
fn gap_tolerance_stops_early() {
    let (f, x0) = problem(3.0);
    let ball = NormBall::l2(1.0).unwrap();
    let run = run_fw(&f, &ball, x0, &Schedule::FwClassic, &StoppingRule::iterations(100_000).with_gap_tol(1e-6)).unwrap();
    assert_eq!(run.stop_reason, StopReason::GapTolerance);
    assert!(run.trace.last().unwrap().fw_gap <= 1e-6);
    assert!(run.trace.rows.len() < 100_000);
}

#[test]
fn stationary_start_is_detected() {
    let (f, _) = problem(0.3);
    let c = f.center().clone();
    let ball = NormBall::l2(1.0).unwrap();
    let fw = run_fw(&f, &ball, c.clone(), &Schedule::FwClassic, &StoppingRule::iterations(10)).unwrap();
    assert_eq!(fw.stop_reason, StopReason::Stationary);
    let afw = run_afw(&f, &ball, c, &Schedule::AfwShifted, &StoppingRule::iterations(10), false).unwrap();
    assert_eq!(afw.stop_reason, StopReason::Stationary);
}

#[test]
fn error_paths() {
    let (f, _) = problem(3.0);
    let ball = NormBall::l2(1.0).unwrap();
    let outside = DenseVector::basis(8, 1, 2.0);
    let stop = StoppingRule::iterations(10);
    assert_eq!(
        run_fw(&f, &ball, outside.clone(), &Schedule::FwClassic, &stop).unwrap_err(),
        SolverError::InfeasibleStart
    );
    assert_eq!(run_projected_gd(&f, &ball, outside, &stop).unwrap_err(), SolverError::InfeasibleStart);
    let lp = NormBall::lp(1.0, 3.0).unwrap();
    assert_eq!(
        run_projected_agm(&f, &lp, DenseVector::zeros(8), &stop).unwrap_err(),
        SolverError::MissingProjection
    );
    assert_eq!(
        run_fw(&f, &ball, DenseVector::zeros(8), &Schedule::FwClassic, &StoppingRule::iterations(0)).unwrap_err(),
        SolverError::InvalidStoppingRule
    );
    let bad = Schedule::custom(|_| 1.5);
    assert!(matches!(
        run_fw(&f, &ball, DenseVector::zeros(8), &bad, &stop).unwrap_err(),
        SolverError::InvalidStep { k: 0, .. }
    ));
}

#[test]
fn strongly_convex_run_requires_a_modulus() {
    use momentum_fw::objectives::{logistic_objective, LogisticProblem};
    use momentum_fw::linalg::SparseMatrix;
    let x = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 1, -1.0)]).unwrap();
    let f = logistic_objective(LogisticProblem::new(x, vec![1.0, -1.0]).unwrap()).unwrap();
    assert_eq!(
        run_agm_sc(&f, DenseVector::zeros(2), &StoppingRule::iterations(5)).unwrap_err(),
        SolverError::MissingStrongConvexity
    );
}

#[test]
fn baselines_converge_on_the_quadratic() {
    let (f, x0) = problem(0.4);
    let stop = StoppingRule::iterations(2000);
    let f_star = f.value(f.center());
    let agm = run_agm(&f, x0.clone(), &stop).unwrap();
    let sc = run_agm_sc(&f, x0.clone(), &stop).unwrap();
    let ball = NormBall::l2(1.0).unwrap();
    let pgd = run_projected_gd(&f, &ball, x0.clone(), &stop).unwrap();
    let pagm = run_projected_agm(&f, &ball, x0, &stop).unwrap();
    for (name, v) in [("agm", agm.trace.final_value()), ("agm_sc", sc.trace.final_value()), ("pgd", pgd.trace.final_value()), ("pagm", pagm.trace.final_value())] {
        assert!(v - f_star < 1e-8, "{name}: {}", v - f_star);
    }
    assert!(agm.trace.rows.iter().all(|r| r.fw_gap.is_nan()));
    assert!(pgd.trace.rows.iter().all(|r| r.fw_gap >= -1e-12));
}

#[test]
fn fw_gap_upper_bounds_suboptimality() {
    let (f, x0) = problem(3.0);
    let ball = NormBall::l2(1.0).unwrap();
    let f_star = f.value(&f.l2_ball_minimizer(1.0).unwrap());
    let run = run_fw(&f, &ball, x0, &Schedule::FwClassic, &StoppingRule::iterations(500)).unwrap();
    for r in &run.trace.rows {
        assert!(r.f_value - f_star <= r.fw_gap + 1e-12, "k={}", r.k);
    }
}
