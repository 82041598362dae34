//! Numeric primitives shared by every other module: dense vectors, CSR sparse
//! matrices, seeded randomness and power iteration for dominant eigen and
//! singular pairs.

use std::ops::Index;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::NumericError;

/// Seed for every random draw in the crate. Identical seeds give identical
/// streams on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Derives an independent child seed, e.g. one per restart or per iteration.
    pub fn derive(self, stream: u64) -> Seed {
        // splitmix64 finalizer over the pair
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15_u64.wrapping_mul(stream.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

/// A finite vector in R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DenseVector {
    entries: Vec<f64>,
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = NumericError;

    fn try_from(entries: Vec<f64>) -> Result<Self, Self::Error> {
        DenseVector::new(entries)
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Self {
        v.entries
    }
}

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, NumericError> {
        if entries.is_empty() {
            return Err(NumericError::EmptyVector);
        }
        if let Some(i) = entries.iter().position(|x| !x.is_finite()) {
            return Err(NumericError::NonFinite { index: i });
        }
        Ok(Self { entries })
    }

    /// Internal constructor for results of arithmetic on finite inputs.
    pub(crate) fn from_vec(entries: Vec<f64>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_vec(vec![0.0; dim])
    }

    pub fn basis(dim: usize, index: usize, scale: f64) -> Self {
        let mut v = vec![0.0; dim];
        v[index] = scale;
        Self::from_vec(v)
    }

    /// Standard normal draw, `dim` entries.
    pub fn gaussian(dim: usize, rng: &mut impl Rng) -> Self {
        Self::from_vec((0..dim).map(|_| rng.sample(StandardNormal)).collect())
    }

    /// Uniform draw on the Euclidean unit sphere.
    pub fn random_unit(dim: usize, rng: &mut impl Rng) -> Self {
        loop {
            let g = Self::gaussian(dim, rng);
            let n = g.norm();
            if n > 1e-300 {
                return g.scaled(1.0 / n);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.entries.iter()
    }

    pub fn dot(&self, other: &DenseVector) -> f64 {
        dot(&self.entries, &other.entries)
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        self.entries.iter().map(|x| x.abs()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// ℓp norm for p ≥ 1, computed with max-scaling.
    pub fn norm_lp(&self, p: f64) -> f64 {
        let m = self.norm_inf();
        if m == 0.0 {
            return 0.0;
        }
        let s: f64 = self.entries.iter().map(|x| (x.abs() / m).powf(p)).sum();
        m * s.powf(1.0 / p)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0.0)
    }

    pub fn scaled(&self, a: f64) -> DenseVector {
        Self::from_vec(self.entries.iter().map(|x| a * x).collect())
    }

    /// `self + a * other`
    pub fn add_scaled(&self, a: f64, other: &DenseVector) -> DenseVector {
        debug_assert_eq!(self.dim(), other.dim());
        Self::from_vec(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x + a * y)
                .collect(),
        )
    }

    pub fn sub(&self, other: &DenseVector) -> DenseVector {
        self.add_scaled(-1.0, other)
    }

    /// `(1 - t) * self + t * other`, evaluated entrywise in exactly that form.
    pub fn lerp(&self, other: &DenseVector, t: f64) -> DenseVector {
        debug_assert_eq!(self.dim(), other.dim());
        let s = 1.0 - t;
        Self::from_vec(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| s * x + t * y)
                .collect(),
        )
    }

    pub fn dist_sq(&self, other: &DenseVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Sparse matrix in compressed-row form. Entries are unique and sorted
/// row-major; explicit zeros are kept (they carry mask structure).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        mut entries: Vec<(usize, usize, f64)>,
    ) -> Result<Self, NumericError> {
        if n_rows == 0 || n_cols == 0 {
            return Err(NumericError::EmptyShape);
        }
        for &(r, c, v) in &entries {
            if r >= n_rows || c >= n_cols {
                return Err(NumericError::OutOfBounds { row: r, col: c, n_rows, n_cols });
            }
            if !v.is_finite() {
                return Err(NumericError::NonFiniteEntry { row: r, col: c });
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        if let Some(w) = entries.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(NumericError::DuplicateEntry { row: w[0].0, col: w[0].1 });
        }
        let mut row_ptr = vec![0usize; n_rows + 1];
        for &(r, _, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let col_idx = entries.iter().map(|e| e.1).collect();
        let values = entries.iter().map(|e| e.2).collect();
        Ok(Self { n_rows, n_cols, row_ptr, col_idx, values })
    }

    /// Row-major dense input; zeros are dropped.
    pub fn from_dense(n_rows: usize, n_cols: usize, data: &[f64]) -> Result<Self, NumericError> {
        assert_eq!(data.len(), n_rows * n_cols, "dense buffer has wrong length");
        let entries = (0..n_rows)
            .flat_map(|r| (0..n_cols).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let v = data[r * n_cols + c];
                (v != 0.0).then_some((r, c, v))
            })
            .collect();
        Self::from_triplets(n_rows, n_cols, entries)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    /// Same sparsity pattern, new values (aligned with `iter()` order).
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len(), "value count must match pattern");
        Self { values, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// out = self · x
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_cols);
        for (r, o) in out.iter_mut().enumerate().take(self.n_rows) {
            *o = self.row(r).map(|(c, v)| v * x[c]).sum();
        }
    }

    /// out = selfᵀ · y
    pub fn mul_transpose_vec(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.n_rows);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (r, &yr) in y.iter().enumerate() {
            if yr == 0.0 {
                continue;
            }
            for (c, v) in self.row(r) {
                out[c] += v * yr;
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.values)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n_rows * self.n_cols];
        for (r, c, v) in self.iter() {
            d[r * self.n_cols + c] = v;
        }
        d
    }
}

/// Symmetric positive semidefinite operator applied matrix-free.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

/// GᵀG for a sparse G, applied as two sparse products.
pub struct GramOperator<'a> {
    matrix: &'a SparseMatrix,
    scratch: std::cell::RefCell<Vec<f64>>,
}

impl<'a> GramOperator<'a> {
    pub fn new(matrix: &'a SparseMatrix) -> Self {
        Self { matrix, scratch: std::cell::RefCell::new(vec![0.0; matrix.n_rows()]) }
    }
}

impl LinearOperator for GramOperator<'_> {
    fn dim(&self) -> usize {
        self.matrix.n_cols()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let mut tmp = self.scratch.borrow_mut();
        self.matrix.mul_vec(x, &mut tmp);
        self.matrix.mul_transpose_vec(&tmp, out);
    }
}

/// Closure-backed operator, handy for tests and small dense problems.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        (self.f)(x, out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DenseVector,
    /// Relative residual ‖Mv − λv‖ / λ at exit.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerSettings {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000 }
    }
}

/// Dominant eigenpair of a PSD operator by power iteration.
///
/// A second, independently seeded start is tried when the first one maps to
/// zero or fails to converge within `max_iter`; the better of the two is
/// returned with `converged` set accordingly.
pub fn power_iteration(
    op: &dyn LinearOperator,
    settings: PowerSettings,
    seed: Seed,
) -> Result<EigenPair, NumericError> {
    power_iteration_from(op, settings, seed, None)
}

/// Power iteration with an optional warm start. The warm start replaces the
/// first random direction; the restart is always seeded.
pub fn power_iteration_from(
    op: &dyn LinearOperator,
    settings: PowerSettings,
    seed: Seed,
    warm_start: Option<&[f64]>,
) -> Result<EigenPair, NumericError> {
    assert!(settings.tol > 0.0 && settings.max_iter >= 1, "invalid power iteration settings");
    let dim = op.dim();
    let mut best: Option<EigenPair> = None;
    let mut zero_starts = 0;
    for attempt in 0..2u64 {
        let start = match (attempt, warm_start) {
            (0, Some(w)) if norm(w) > 0.0 => {
                let n = norm(w);
                w.iter().map(|x| x / n).collect()
            }
            _ => DenseVector::random_unit(dim, &mut seed.derive(attempt).rng()).into_vec(),
        };
        match power_sweeps(op, start, settings) {
            None => zero_starts += 1,
            Some(pair) => {
                let done = pair.converged;
                let better = best.as_ref().map_or(true, |b| pair.residual < b.residual);
                if better {
                    best = Some(pair);
                }
                if done {
                    break;
                }
            }
        }
    }
    match best {
        Some(b) => Ok(b),
        None => {
            debug_assert_eq!(zero_starts, 2);
            Err(NumericError::ZeroOperator)
        }
    }
}

fn power_sweeps(op: &dyn LinearOperator, mut v: Vec<f64>, settings: PowerSettings) -> Option<EigenPair> {
    let dim = v.len();
    let mut w = vec![0.0; dim];
    op.apply(&v, &mut w);
    if norm(&w) == 0.0 {
        return None;
    }
    let mut lambda = dot(&v, &w);
    let mut residual = f64::INFINITY;
    for it in 1..=settings.max_iter {
        // w = Mv already holds; normalise it into the next iterate
        let n = norm(&w);
        if n == 0.0 {
            // v landed in the kernel after a sweep: only possible for a
            // degenerate operator, report what we have
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / n;
        }
        op.apply(&v, &mut w);
        lambda = dot(&v, &w);
        if lambda <= 0.0 {
            residual = f64::INFINITY;
            continue;
        }
        let r: f64 = v.iter().zip(&w).map(|(vi, wi)| (wi - lambda * vi).powi(2)).sum::<f64>().sqrt();
        residual = r / lambda;
        if residual <= settings.tol {
            return Some(EigenPair {
                value: lambda,
                vector: DenseVector::from_vec(v),
                residual,
                iterations: it,
                converged: true,
            });
        }
    }
    Some(EigenPair {
        value: lambda,
        vector: DenseVector::from_vec(v),
        residual,
        iterations: settings.max_iter,
        converged: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularTriple {
    pub sigma: f64,
    /// Left singular vector, unit ℓ2 norm.
    pub left: DenseVector,
    /// Right singular vector, unit ℓ2 norm.
    pub right: DenseVector,
    pub converged: bool,
}

/// Top singular triple of a sparse matrix via power iteration on GᵀG.
/// Signs are fixed so the largest-magnitude entry of `left` is positive.
pub fn top_singular_pair(
    g: &SparseMatrix,
    settings: PowerSettings,
    seed: Seed,
) -> Result<SingularTriple, NumericError> {
    top_singular_pair_from(g, settings, seed, None)
}

pub fn top_singular_pair_from(
    g: &SparseMatrix,
    settings: PowerSettings,
    seed: Seed,
    warm_right: Option<&[f64]>,
) -> Result<SingularTriple, NumericError> {
    if g.is_zero() {
        return Err(NumericError::ZeroOperator);
    }
    let gram = GramOperator::new(g);
    let pair = power_iteration_from(&gram, settings, seed, warm_right)?;
    let mut q = pair.vector.into_vec();
    let mut p = vec![0.0; g.n_rows()];
    g.mul_vec(&q, &mut p);
    let sigma = norm(&p);
    if sigma == 0.0 {
        return Err(NumericError::ZeroOperator);
    }
    p.iter_mut().for_each(|x| *x /= sigma);
    let q_norm = norm(&q);
    q.iter_mut().for_each(|x| *x /= q_norm);
    // sign convention: largest |p_i| positive (first index on ties)
    let pivot = p
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |(bi, bv), (i, &x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) })
        .0;
    if p[pivot] < 0.0 {
        p.iter_mut().for_each(|x| *x = -*x);
        q.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(SingularTriple {
        sigma,
        left: DenseVector::from_vec(p),
        right: DenseVector::from_vec(q),
        converged: pair.converged,
    })
}
