//! Unconstrained AGM on an ill-conditioned diagonal quadratic, checked against
//! its value, gradient and momentum envelopes.

use momentum_fw::diagnostics::bounds;
use momentum_fw::linalg::{DenseVector, Seed};
use momentum_fw::objectives::{Objective, Quadratic};
use momentum_fw::solvers::{run_agm_observed, StoppingRule, AGM_DIST_REF, AGM_GRAD_Y_SQ};

fn main() -> anyhow::Result<()> {
    let weights: Vec<f64> = (0..10).map(|i| 10f64.powf(i as f64 / 3.0 - 2.0)).collect();
    let mut rng = Seed(7).rng();
    let x_star = DenseVector::gaussian(10, &mut rng);
    let x0 = DenseVector::gaussian(10, &mut rng);
    let f = Quadratic::diagonal(weights, x_star.clone())?;
    let l = f.smoothness();
    let c = bounds::agm_potential(f.value(&x0), l, x0.dist_sq(&x_star));

    let run = run_agm_observed(&f, None, x0, &StoppingRule::iterations(5000), Some(&x_star), |_| {})?;
    let grad = run.trace.extra_column(AGM_GRAD_Y_SQ).unwrap();
    let dist = run.trace.extra_column(AGM_DIST_REF).unwrap();
    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>10}", "k", "f-f*", "4C/(k+2)^2", "|grad|^2", "16LC/(k+2)^2", "|v-x*|^2");
    for k in [0, 1, 10, 100, 1000, 4999] {
        let row = &run.trace.rows[k];
        println!(
            "{k:>5} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e} {:>10.3e}",
            row.f_value,
            bounds::agm_value(k, c),
            grad[k],
            bounds::agm_gradient(k, l, c),
            dist[k].powi(2)
        );
    }
    println!("momentum radius bound C/L = {:.3e}", bounds::agm_momentum_radius(l, c));
    Ok(())
}
