use nalgebra::DMatrix;
use rand::seq::index::sample;

use crate::error::NumericError;
use crate::linalg::{DenseVector, Seed, SparseMatrix};

/// A random low-rank matrix and a uniformly sampled set of observed entries.
#[derive(Debug, Clone)]
pub struct LowRankInstance {
    pub rows: usize,
    pub cols: usize,
    /// Row-major ground truth, scaled to unit Frobenius norm.
    pub full: Vec<f64>,
    pub observed: SparseMatrix,
    /// ‖M‖_*; with this radius the truth is feasible and f* = 0.
    pub nuclear_norm: f64,
}

/// M = U Vᵀ with Gaussian factors, normalized to ‖M‖_F = 1; exactly
/// `round(fraction · rows · cols)` entries (at least one) are observed.
pub fn synthetic_low_rank(
    rows: usize,
    cols: usize,
    rank: usize,
    fraction: f64,
    seed: Seed,
) -> Result<LowRankInstance, NumericError> {
    if rows == 0 || cols == 0 || rank == 0 {
        return Err(NumericError::EmptyShape);
    }
    let mut rng = seed.rng();
    let u: Vec<DenseVector> = (0..rank).map(|_| DenseVector::gaussian(rows, &mut rng)).collect();
    let v: Vec<DenseVector> = (0..rank).map(|_| DenseVector::gaussian(cols, &mut rng)).collect();
    let mut full = vec![0.0; rows * cols];
    for (ut, vt) in u.iter().zip(&v) {
        for i in 0..rows {
            for j in 0..cols {
                full[i * cols + j] += ut[i] * vt[j];
            }
        }
    }
    let fro = full.iter().map(|x| x * x).sum::<f64>().sqrt();
    full.iter_mut().for_each(|x| *x /= fro);

    let total = rows * cols;
    let count = ((fraction.clamp(0.0, 1.0) * total as f64).round() as usize).max(1);
    let mut picked = sample(&mut rng, total, count).into_vec();
    picked.sort_unstable();
    let triplets = picked.into_iter().map(|idx| (idx / cols, idx % cols, full[idx])).collect();
    let observed = SparseMatrix::from_triplets(rows, cols, triplets)?;

    let nuclear_norm = DMatrix::from_row_slice(rows, cols, &full).singular_values().sum();
    Ok(LowRankInstance { rows, cols, full, observed, nuclear_norm })
}
