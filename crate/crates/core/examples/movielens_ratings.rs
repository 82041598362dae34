//! Loading MovieLens-style `user item rating timestamp` triples and running AFW
//! on the resulting completion problem.
//!
//! cargo run --release --example movielens_ratings [-- path/to/u.data]

use std::io::Cursor;

use momentum_fw::data_io::{parse_movielens, read_movielens};
use momentum_fw::linalg::Seed;
use momentum_fw::objectives::{matcomp_objective, MatCompProblem, Objective};
use momentum_fw::sets::NuclearBall;
use momentum_fw::solvers::{run_afw, Schedule, StoppingRule};

const TOY: &str = "1\t1\t5\t881250949\n1\t2\t3\t881250949\n2\t1\t4\t0\n2\t3\t1\t0\n3\t2\t2\t0\n3\t3\t5\t0\n4\t1\t4\t0\n";

fn main() -> anyhow::Result<()> {
    let ds = match std::env::args().nth(1) {
        Some(path) => read_movielens(path.as_ref(), Some((1.0, 5.0)))?,
        None => parse_movielens(Cursor::new(TOY), Some((1.0, 5.0)))?,
    };
    println!("{} users x {} items, density {:.4}, {} duplicates", ds.n_users, ds.n_items, ds.density(), ds.duplicates);

    let f = matcomp_objective(MatCompProblem::new(ds.ratings)?);
    let ball = NuclearBall::new(10.0, ds.n_users, ds.n_items, Seed(0))?;
    let x0 = ball.aligned_vertex(f.mask())?;
    let run = run_afw(&f, &ball, x0, &Schedule::AfwShifted, &StoppingRule::iterations(100), false)?;
    let last = run.trace.last().unwrap();
    println!("{}: f = {:.6}, fw gap = {:.3e}, {} atoms", f.describe(), last.f_value, last.fw_gap, run.x.atom_count());
    Ok(())
}
