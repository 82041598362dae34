//! Matrix iterates for nuclear-norm-ball problems.
//!
//! Iterates are kept as weighted lists of rank-one atoms `w · p qᵀ` together
//! with a cache of their values on the observation mask, so objective and
//! gradient evaluations never materialize the dense matrix. Gradients and
//! running gradient averages live on the mask only ([`MaskedMatrix`]).

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::linalg::{dot, DenseVector, SparseMatrix};
use crate::space::{Direction, Iterate};

#[derive(Debug, Clone)]
pub struct Atom {
    pub weight: f64,
    pub left: Arc<DenseVector>,
    pub right: Arc<DenseVector>,
}

impl Atom {
    fn same_factors(&self, other: &Atom, tol: f64) -> Option<f64> {
        if Arc::ptr_eq(&self.left, &other.left) && Arc::ptr_eq(&self.right, &other.right) {
            return Some(1.0);
        }
        let close = |a: &DenseVector, b: &DenseVector, s: f64| {
            a.iter().zip(b.iter()).all(|(x, y)| (x - s * y).abs() <= tol)
        };
        for s in [1.0, -1.0] {
            if close(&self.left, &other.left, s) && close(&self.right, &other.right, s) {
                return Some(1.0);
            }
            if close(&self.left, &other.left, s) && close(&self.right, &other.right, -s) {
                return Some(-1.0);
            }
        }
        None
    }
}

/// Rank-structured m×n matrix `Σ wᵢ pᵢ qᵢᵀ` bound to an observation mask.
#[derive(Debug, Clone)]
pub struct FactoredMatrix {
    rows: usize,
    cols: usize,
    atoms: Vec<Atom>,
    mask: Arc<SparseMatrix>,
    on_mask: Vec<f64>,
}

impl FactoredMatrix {
    /// `weight · left rightᵀ`.
    pub fn rank_one(weight: f64, left: DenseVector, right: DenseVector, mask: Arc<SparseMatrix>) -> Self {
        assert_eq!(left.dim(), mask.n_rows(), "left factor length must equal row count");
        assert_eq!(right.dim(), mask.n_cols(), "right factor length must equal column count");
        let on_mask = mask.iter().map(|(r, c, _)| weight * left[r] * right[c]).collect();
        Self {
            rows: mask.n_rows(),
            cols: mask.n_cols(),
            atoms: vec![Atom { weight, left: Arc::new(left), right: Arc::new(right) }],
            mask,
            on_mask,
        }
    }

    pub fn zeros(mask: Arc<SparseMatrix>) -> Self {
        let nnz = mask.nnz();
        Self { rows: mask.n_rows(), cols: mask.n_cols(), atoms: Vec::new(), mask, on_mask: vec![0.0; nnz] }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn mask(&self) -> &Arc<SparseMatrix> {
        &self.mask
    }

    /// Values on the mask, aligned with the mask's row-major entry order.
    pub fn on_mask(&self) -> &[f64] {
        &self.on_mask
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.atoms.iter().map(|a| a.weight * a.left[r] * a.right[c]).sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.rows * self.cols];
        for a in &self.atoms {
            for r in 0..self.rows {
                let lr = a.weight * a.left[r];
                if lr == 0.0 {
                    continue;
                }
                for c in 0..self.cols {
                    d[r * self.cols + c] += lr * a.right[c];
                }
            }
        }
        d
    }

    /// Σ |wᵢ| ‖pᵢ‖ ‖qᵢ‖, an upper bound on the nuclear norm.
    pub fn atomic_norm_bound(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.abs() * a.left.norm() * a.right.norm()).sum()
    }

    /// Merges atoms with identical outer products (up to `tol` entrywise, sign
    /// flips allowed) and drops zero-weight atoms. The cached mask values are
    /// unchanged since the represented matrix is unchanged.
    pub fn consolidate(&mut self, tol: f64) {
        let mut merged: Vec<Atom> = Vec::with_capacity(self.atoms.len());
        'outer: for a in self.atoms.drain(..) {
            for m in merged.iter_mut() {
                if let Some(sign) = m.same_factors(&a, tol) {
                    m.weight += sign * a.weight;
                    continue 'outer;
                }
            }
            merged.push(a);
        }
        merged.retain(|a| a.weight != 0.0);
        self.atoms = merged;
    }

    /// Numerical rank: singular values above `rel_tol · σ_max`, computed from
    /// the r×r core after orthogonalizing the stacked factors.
    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let r = self.atoms.len();
        if r == 0 {
            return 0;
        }
        let left = DMatrix::from_fn(self.rows, r, |i, j| self.atoms[j].left[i]);
        let right = DMatrix::from_fn(self.cols, r, |i, j| self.atoms[j].right[i]);
        let weights = DMatrix::from_fn(r, r, |i, j| if i == j { self.atoms[i].weight } else { 0.0 });
        let rl = left.qr().r();
        let rr = right.qr().r();
        let core = &rl * weights * rr.transpose();
        let sv = core.singular_values();
        let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
        if smax == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * smax).count()
    }
}

impl Iterate for FactoredMatrix {
    fn blend(&self, other: &Self, t: f64) -> Self {
        debug_assert!(Arc::ptr_eq(&self.mask, &other.mask) || self.mask == other.mask);
        let s = 1.0 - t;
        let mut atoms = Vec::with_capacity(self.atoms.len() + other.atoms.len());
        atoms.extend(self.atoms.iter().map(|a| Atom { weight: s * a.weight, ..a.clone() }));
        atoms.extend(other.atoms.iter().map(|a| Atom { weight: t * a.weight, ..a.clone() }));
        atoms.retain(|a| a.weight != 0.0);
        let on_mask = self.on_mask.iter().zip(&other.on_mask).map(|(x, y)| s * x + t * y).collect();
        Self { rows: self.rows, cols: self.cols, atoms, mask: Arc::clone(&self.mask), on_mask }
    }

    fn dist_sq(&self, other: &Self) -> f64 {
        // ‖Σ wᵢ pᵢqᵢᵀ − Σ uⱼ aⱼbⱼᵀ‖² via the atom Gram matrix
        let signed: Vec<(f64, &Atom)> = self
            .atoms
            .iter()
            .map(|a| (a.weight, a))
            .chain(other.atoms.iter().map(|a| (-a.weight, a)))
            .collect();
        let mut total = 0.0;
        for (i, (wi, ai)) in signed.iter().enumerate() {
            for (j, (wj, aj)) in signed.iter().enumerate().skip(i) {
                let g = wi * wj * ai.left.dot(&aj.left) * ai.right.dot(&aj.right);
                total += if i == j { g } else { 2.0 * g };
            }
        }
        total.max(0.0)
    }
}

/// A matrix supported on the observation mask (gradients, θ averages).
#[derive(Debug, Clone)]
pub struct MaskedMatrix {
    mask: Arc<SparseMatrix>,
    values: Vec<f64>,
}

impl MaskedMatrix {
    pub fn new(mask: Arc<SparseMatrix>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), mask.nnz(), "one value per mask entry");
        Self { mask, values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &Arc<SparseMatrix> {
        &self.mask
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        self.mask.with_values(self.values.clone())
    }
}

impl Direction<FactoredMatrix> for MaskedMatrix {
    fn blend(&self, other: &Self, t: f64) -> Self {
        let s = 1.0 - t;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| s * x + t * y).collect();
        Self { mask: Arc::clone(&self.mask), values }
    }

    fn zero_like(&self) -> Self {
        Self { mask: Arc::clone(&self.mask), values: vec![0.0; self.values.len()] }
    }

    fn pair(&self, x: &FactoredMatrix) -> f64 {
        dot(&self.values, x.on_mask())
    }

    fn norm_sq(&self) -> f64 {
        dot(&self.values, &self.values)
    }

    fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}
