//! Euclidean projection onto the ℓ1 ball and the projected baselines that use it.

use momentum_fw::linalg::{DenseVector, Seed};
use momentum_fw::objectives::{quadratic_objective, Objective};
use momentum_fw::sets::{project_l1, NormBall};
use momentum_fw::solvers::{run_afw, run_projected_agm, run_projected_gd, Schedule, StoppingRule};

fn main() -> anyhow::Result<()> {
    let z = DenseVector::new(vec![3.0, -1.0, 0.2, 0.0, -2.5])?;
    let p = project_l1(&z, 2.0);
    println!("project {:?} -> {:?} (l1 norm {:.3})", z.as_slice(), p.as_slice(), p.norm_l1());

    let center = DenseVector::gaussian(30, &mut Seed(5).rng());
    let f = quadratic_objective(center, 1.0)?;
    let ball = NormBall::l1(2.0)?;
    let x0 = DenseVector::zeros(30);
    let stop = StoppingRule::iterations(500);
    let runs = [
        ("pgd", run_projected_gd(&f, &ball, x0.clone(), &stop)?.trace),
        ("agm", run_projected_agm(&f, &ball, x0.clone(), &stop)?.trace),
        ("afw", run_afw(&f, &ball, x0, &Schedule::AfwShifted, &stop, false)?.trace),
    ];
    let best = runs.iter().map(|(_, t)| t.best_value()).fold(f64::INFINITY, f64::min);
    for (name, t) in &runs {
        println!("{name}: f = {:.10}, f - best = {:.3e}", t.final_value(), t.final_value() - best);
    }
    println!("f(0) = {:.4}", f.value(&DenseVector::zeros(30)));
    Ok(())
}
