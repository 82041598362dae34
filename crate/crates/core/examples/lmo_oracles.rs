//! Linear minimization oracles of the ℓ1, ℓ2, ℓp and nuclear-norm balls.

use momentum_fw::linalg::{DenseVector, Seed, SparseMatrix};
use momentum_fw::sets::{lmo_l1, lmo_l2, lmo_lp, lmo_nuclear};

fn main() -> anyhow::Result<()> {
    let theta = DenseVector::new(vec![0.3, -2.0, 1.0, 0.5])?;
    println!("theta          = {:?}", theta.as_slice());
    println!("l2 ball vertex = {:?}", lmo_l2(&theta, 1.0)?.as_slice());
    println!("l1 ball vertex = {:?}", lmo_l1(&theta, 1.0)?.as_slice());
    for p in [1.5, 3.0, 10.0] {
        let v = lmo_lp(&theta, 1.0, p)?;
        println!("l{p} ball vertex = {:?}  <theta, v> = {:.6}", v.as_slice(), theta.dot(&v));
    }

    // rank-one vertex -R p qᵀ from the top singular pair
    let g = SparseMatrix::from_triplets(3, 3, vec![(0, 0, 3.0), (1, 2, -1.0), (2, 1, 0.5)])?;
    let v = lmo_nuclear(&g, 2.0, 1e-12, Seed(0))?;
    println!("nuclear vertex: scale {}, sigma {:.6}, left {:?}, right {:?}", v.scale, v.sigma, v.left.as_slice(), v.right.as_slice());
    Ok(())
}
