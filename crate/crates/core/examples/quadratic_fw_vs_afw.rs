//! FW and AFW on a quadratic whose minimizer lies outside the unit ball.
//!
//! cargo run --release --example quadratic_fw_vs_afw

use momentum_fw::diagnostics::estimate_rate;
use momentum_fw::linalg::{DenseVector, Seed};
use momentum_fw::objectives::{quadratic_objective, Objective};
use momentum_fw::sets::NormBall;
use momentum_fw::solvers::{run_afw, run_fw, Schedule, StoppingRule};

fn main() -> anyhow::Result<()> {
    let mut rng = Seed(1).rng();
    let center = DenseVector::random_unit(20, &mut rng).scaled(2.0);
    let f = quadratic_objective(center, 1.0)?;
    let ball = NormBall::l2(1.0)?;
    let f_star = f.value(&f.l2_ball_minimizer(1.0).expect("isotropic quadratic"));
    // from 0 the first FW step would land exactly on the minimizer
    let x0 = DenseVector::random_unit(20, &mut rng).scaled(0.5);
    let stop = StoppingRule::iterations(10_000);

    let fw = run_fw(&f, &ball, x0.clone(), &Schedule::FwClassic, &stop)?;
    let afw = run_afw(&f, &ball, x0, &Schedule::AfwShifted, &stop, false)?;

    println!("{:>6} {:>14} {:>14}", "k", "fw", "afw");
    for k in [1, 10, 100, 1000, 10_000] {
        println!("{k:>6} {:>14.4e} {:>14.4e}", fw.trace.gap_at(k, f_star).unwrap(), afw.trace.gap_at(k, f_star).unwrap());
    }
    for (name, t) in [("fw", &fw.trace), ("afw", &afw.trace)] {
        let r = estimate_rate(t, f_star, (100, 10_000))?;
        println!("{name}: log-log slope {:.3} (r^2 {:.4})", r.slope, r.r_squared);
    }
    Ok(())
}
