//! ℓ1-constrained logistic regression on a LIBSVM-format dataset.
//!
//! cargo run --release --example logistic_libsvm [-- path/to/data.libsvm]

use std::io::Cursor;

use momentum_fw::data_io::{parse_libsvm, read_libsvm};
use momentum_fw::linalg::DenseVector;
use momentum_fw::objectives::{logistic_objective, LogisticProblem, Objective};
use momentum_fw::sets::NormBall;
use momentum_fw::solvers::{run_afw, run_fw, Schedule, StoppingRule};

const TOY: &str = "\
+1 1:0.9 2:0.1 4:0.3
-1 2:1.2 3:0.4
+1 1:1.1 3:-0.2 4:0.8
-1 1:-0.3 2:0.7
+1 1:0.5 4:1.0
-1 2:0.9 3:0.9 4:-0.4
";

fn main() -> anyhow::Result<()> {
    let ds = match std::env::args().nth(1) {
        Some(path) => read_libsvm(path.as_ref(), None)?,
        None => parse_libsvm(Cursor::new(TOY), None)?,
    };
    println!("{} samples, {} features, labels {:?}", ds.n_samples(), ds.dim(), ds.mapping);
    let f = logistic_objective(LogisticProblem::new(ds.features, ds.labels)?)?;
    println!("{} with L = {:.4}", f.describe(), f.smoothness());

    let ball = NormBall::l1(5.0)?;
    let x0 = DenseVector::zeros(f.dim());
    let stop = StoppingRule::iterations(2000);
    let fw = run_fw(&f, &ball, x0.clone(), &Schedule::FwClassic, &stop)?;
    let afw = run_afw(&f, &ball, x0, &Schedule::AfwShifted, &stop, false)?;
    for (name, run) in [("fw", &fw), ("afw", &afw)] {
        let last = run.trace.last().unwrap();
        println!("{name}: f = {:.8}, fw gap = {:.3e}, weights {:?}", last.f_value, last.fw_gap, run.x.as_slice());
    }
    Ok(())
}
