//! Writing a trace to CSV with its JSON sidecar, reading it back and fitting
//! a convergence rate.

use momentum_fw::data_io::{read_trace, sidecar_path, write_trace};
use momentum_fw::diagnostics::{default_window, estimate_rate};
use momentum_fw::linalg::DenseVector;
use momentum_fw::objectives::{quadratic_objective, Objective};
use momentum_fw::sets::NormBall;
use momentum_fw::solvers::{run_afw, Schedule, StoppingRule};

fn main() -> anyhow::Result<()> {
    let f = quadratic_objective(DenseVector::basis(5, 0, 3.0), 1.0)?;
    let run = run_afw(&f, &NormBall::l2(1.0)?, DenseVector::zeros(5), &Schedule::AfwShifted, &StoppingRule::iterations(1000), true)?;

    let dir = std::env::temp_dir().join("momentum-fw-trace-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("afw.csv");
    write_trace(&run.trace, &path)?;
    println!("wrote {} and {}", path.display(), sidecar_path(&path).display());

    let back = read_trace(&path)?;
    assert_eq!(back, run.trace);
    let f_star = f.value(&DenseVector::basis(5, 0, 1.0));
    let rate = estimate_rate(&back, f_star, default_window(1000))?;
    println!("{} rows, columns {:?}, slope {:.3}", back.rows.len(), back.meta.extra_columns, rate.slope);
    Ok(())
}
