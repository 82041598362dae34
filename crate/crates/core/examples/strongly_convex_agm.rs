//! Constant-momentum AGM on a strongly convex quadratic, which converges
//! linearly, next to the sublinear schedule of plain AGM.

use momentum_fw::linalg::{DenseVector, Seed};
use momentum_fw::objectives::{Objective, Quadratic};
use momentum_fw::solvers::{run_agm, run_agm_sc, StoppingRule};

fn main() -> anyhow::Result<()> {
    let weights: Vec<f64> = (0..10).map(|i| 0.05 + i as f64 * 0.1).collect();
    let mut rng = Seed(11).rng();
    let c = DenseVector::gaussian(10, &mut rng);
    let f = Quadratic::diagonal(weights, c.clone())?;
    println!("L = {}, mu = {:?}", f.smoothness(), f.strong_convexity());
    let x0 = DenseVector::gaussian(10, &mut rng).scaled(5.0);
    let stop = StoppingRule::iterations(300);
    let sc = run_agm_sc(&f, x0.clone(), &stop)?;
    let plain = run_agm(&f, x0, &stop)?;
    println!("{:>5} {:>12} {:>12}", "k", "agm", "agm_sc");
    for k in [0, 10, 50, 100, 200, 300] {
        println!("{k:>5} {:>12.3e} {:>12.3e}", plain.trace.gap_at(k, 0.0).unwrap(), sc.trace.gap_at(k, 0.0).unwrap());
    }
    Ok(())
}
