//! The estimate-sequence columns of an AFW run: f(x_k) is sandwiched by
//! Φ*_k + ξ_k, and ξ_k stays under 2LD²/(k+2).

use momentum_fw::diagnostics::bounds;
use momentum_fw::linalg::{DenseVector, Seed};
use momentum_fw::objectives::{quadratic_objective, Objective};
use momentum_fw::sets::{FeasibleSet, NormBall};
use momentum_fw::solvers::{run_afw, Schedule, StoppingRule};

fn main() -> anyhow::Result<()> {
    let center = DenseVector::random_unit(10, &mut Seed(3).rng()).scaled(0.4);
    let f = quadratic_objective(center, 1.0)?;
    let ball = NormBall::l1(1.0)?;
    let run = run_afw(&f, &ball, DenseVector::basis(10, 0, 1.0), &Schedule::AfwShifted, &StoppingRule::iterations(2000), true)?;
    let (l, d) = (f.smoothness(), ball.diameter());

    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}", "k", "f", "phi*+xi", "xi", "2LD^2/(k+2)", "lambda");
    for row in run.trace.rows.iter().filter(|r| [0, 1, 2, 5, 10, 100, 1000, 2000].contains(&r.k)) {
        let es = row.es.expect("diagnostics on");
        println!(
            "{:>5} {:>12.5e} {:>12.5e} {:>12.3e} {:>12.3e} {:>12.3e}",
            row.k,
            row.f_value,
            es.phi_star + es.xi,
            es.xi,
            bounds::xi_envelope(row.k, l, d),
            es.lambda
        );
    }
    let holds = run.trace.rows.iter().all(|r| {
        let es = r.es.unwrap();
        r.f_value <= es.phi_star + es.xi + 1e-12 && es.xi <= bounds::xi_envelope(r.k, l, d)
    });
    println!("sandwich holds on every row: {holds}");
    Ok(())
}
