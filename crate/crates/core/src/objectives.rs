//! Smooth convex objectives with exact gradients and a smoothness constant.

use std::sync::Arc;

use crate::error::ObjectiveError;
use crate::linalg::{power_iteration, DenseVector, GramOperator, PowerSettings, Seed, SparseMatrix};
use crate::matrix::{FactoredMatrix, MaskedMatrix};
use crate::space::{Direction, Iterate};

/// A smooth convex function over some point type.
pub trait Objective {
    type Point: Iterate;
    type Grad: Direction<Self::Point>;

    fn value(&self, x: &Self::Point) -> f64;

    fn gradient(&self, x: &Self::Point) -> Self::Grad;

    /// Lipschitz constant of the gradient (possibly an upper bound).
    fn smoothness(&self) -> f64;

    fn strong_convexity(&self) -> Option<f64> {
        None
    }

    /// Short stable description used in trace metadata.
    fn describe(&self) -> String;
}

/// Objectives over plain vectors; the baselines (GD, AGM) need `x - g / L`.
pub trait VectorObjective: Objective<Point = DenseVector, Grad = DenseVector> {}

impl<T: Objective<Point = DenseVector, Grad = DenseVector>> VectorObjective for T {}

/// f(x) = Σ wᵢ (xᵢ − cᵢ)²
#[derive(Debug, Clone)]
pub struct Quadratic {
    weights: Vec<f64>,
    center: DenseVector,
}

/// f(x) = scale · ‖x − center‖²
pub fn quadratic_objective(center: DenseVector, scale: f64) -> Result<Quadratic, ObjectiveError> {
    Quadratic::isotropic(center, scale)
}

impl Quadratic {
    pub fn isotropic(center: DenseVector, scale: f64) -> Result<Self, ObjectiveError> {
        Self::diagonal(vec![scale; center.dim()], center)
    }

    pub fn diagonal(weights: Vec<f64>, center: DenseVector) -> Result<Self, ObjectiveError> {
        if weights.len() != center.dim() {
            return Err(ObjectiveError::DimensionMismatch { expected: center.dim(), found: weights.len() });
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(ObjectiveError::InvalidScale(w));
        }
        Ok(Self { weights, center })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &DenseVector {
        &self.center
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn is_isotropic(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    /// Minimizer over the ℓ2 ball of the given radius. Only closed-form for
    /// isotropic quadratics (radial projection of the center).
    pub fn l2_ball_minimizer(&self, radius: f64) -> Option<DenseVector> {
        if !self.is_isotropic() {
            return None;
        }
        let n = self.center.norm();
        Some(if n <= radius { self.center.clone() } else { self.center.scaled(radius / n) })
    }
}

impl Objective for Quadratic {
    type Point = DenseVector;
    type Grad = DenseVector;

    fn value(&self, x: &DenseVector) -> f64 {
        self.weights
            .iter()
            .zip(x.iter().zip(self.center.iter()))
            .map(|(w, (xi, ci))| w * (xi - ci) * (xi - ci))
            .sum()
    }

    fn gradient(&self, x: &DenseVector) -> DenseVector {
        DenseVector::from_vec(
            self.weights
                .iter()
                .zip(x.iter().zip(self.center.iter()))
                .map(|(w, (xi, ci))| 2.0 * w * (xi - ci))
                .collect(),
        )
    }

    fn smoothness(&self) -> f64 {
        2.0 * self.weights.iter().cloned().fold(f64::MIN, f64::max)
    }

    fn strong_convexity(&self) -> Option<f64> {
        Some(2.0 * self.weights.iter().cloned().fold(f64::MAX, f64::min))
    }

    fn describe(&self) -> String {
        if self.is_isotropic() {
            format!("quadratic(dim={}, scale={}, center_norm={})", self.dim(), self.weights[0], self.center.norm())
        } else {
            format!("diag_quadratic(dim={}, center_norm={})", self.dim(), self.center.norm())
        }
    }
}

/// Binary classification data with labels in {−1, +1}.
#[derive(Debug, Clone)]
pub struct LogisticProblem {
    features: SparseMatrix,
    labels: Vec<f64>,
}

impl LogisticProblem {
    pub fn new(features: SparseMatrix, labels: Vec<f64>) -> Result<Self, ObjectiveError> {
        if labels.is_empty() {
            return Err(ObjectiveError::NoData);
        }
        if labels.len() != features.n_rows() {
            return Err(ObjectiveError::DimensionMismatch { expected: features.n_rows(), found: labels.len() });
        }
        if let Some((row, &value)) = labels.iter().enumerate().find(|(_, &b)| b != 1.0 && b != -1.0) {
            return Err(ObjectiveError::InvalidLabel { row, value });
        }
        Ok(Self { features, labels })
    }

    pub fn features(&self) -> &SparseMatrix {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }
}

/// f(x) = (1/n) Σ ln(1 + exp(−bᵢ⟨aᵢ, x⟩))
#[derive(Debug, Clone)]
pub struct Logistic {
    problem: LogisticProblem,
    smoothness: f64,
}

pub fn logistic_objective(problem: LogisticProblem) -> Result<Logistic, ObjectiveError> {
    Logistic::new(problem)
}

/// ln(1 + eᵗ) without overflow.
pub(crate) fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// 1 / (1 + e⁻ᵗ) without overflow.
pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl Logistic {
    pub fn new(problem: LogisticProblem) -> Result<Self, ObjectiveError> {
        let gram = GramOperator::new(&problem.features);
        let top = power_iteration(&gram, PowerSettings { tol: 1e-9, max_iter: 5_000 }, Seed(0x10_6157))?;
        let n = problem.labels.len() as f64;
        Ok(Self { smoothness: top.value / (4.0 * n), problem })
    }

    pub fn dim(&self) -> usize {
        self.problem.features.n_cols()
    }

    pub fn problem(&self) -> &LogisticProblem {
        &self.problem
    }

    fn margins(&self, x: &DenseVector) -> Vec<f64> {
        assert_eq!(x.dim(), self.dim(), "point dimension must match feature count");
        let mut z = vec![0.0; self.problem.features.n_rows()];
        self.problem.features.mul_vec(x.as_slice(), &mut z);
        z.iter().zip(&self.problem.labels).map(|(zi, b)| b * zi).collect()
    }
}

impl Objective for Logistic {
    type Point = DenseVector;
    type Grad = DenseVector;

    fn value(&self, x: &DenseVector) -> f64 {
        let m = self.margins(x);
        m.iter().map(|&t| softplus(-t)).sum::<f64>() / m.len() as f64
    }

    fn gradient(&self, x: &DenseVector) -> DenseVector {
        let m = self.margins(x);
        let n = m.len() as f64;
        // d/dz softplus(−b z) = −b σ(−b z)
        let weights: Vec<f64> =
            m.iter().zip(&self.problem.labels).map(|(&t, &b)| -b * sigmoid(-t) / n).collect();
        let mut g = vec![0.0; self.dim()];
        self.problem.features.mul_transpose_vec(&weights, &mut g);
        DenseVector::from_vec(g)
    }

    fn smoothness(&self) -> f64 {
        self.smoothness
    }

    fn describe(&self) -> String {
        format!(
            "logistic(n={}, d={}, nnz={})",
            self.problem.features.n_rows(),
            self.dim(),
            self.problem.features.nnz()
        )
    }
}

/// Observed entries of a partially known matrix.
#[derive(Debug, Clone)]
pub struct MatCompProblem {
    observed: Arc<SparseMatrix>,
}

impl MatCompProblem {
    pub fn new(observed: SparseMatrix) -> Result<Self, ObjectiveError> {
        if observed.nnz() == 0 {
            return Err(ObjectiveError::EmptyMask);
        }
        Ok(Self { observed: Arc::new(observed) })
    }

    pub fn observed(&self) -> &Arc<SparseMatrix> {
        &self.observed
    }
}

/// f(X) = ½ Σ_{(i,j)∈K} (X_ij − A_ij)², over factored matrix iterates.
#[derive(Debug, Clone)]
pub struct MatrixCompletion {
    problem: MatCompProblem,
}

pub fn matcomp_objective(problem: MatCompProblem) -> MatrixCompletion {
    MatrixCompletion { problem }
}

impl MatrixCompletion {
    pub fn mask(&self) -> &Arc<SparseMatrix> {
        &self.problem.observed
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.problem.observed.n_rows(), self.problem.observed.n_cols())
    }

    /// Objective on a dense row-major m·n buffer.
    pub fn value_flat(&self, x: &[f64]) -> Result<f64, ObjectiveError> {
        let (m, n) = self.shape();
        if x.len() != m * n {
            return Err(ObjectiveError::DimensionMismatch { expected: m * n, found: x.len() });
        }
        Ok(0.5 * self.problem.observed.iter().map(|(r, c, a)| (x[r * n + c] - a).powi(2)).sum::<f64>())
    }

    /// Gradient on a dense row-major m·n buffer; zero off the mask.
    pub fn gradient_flat(&self, x: &[f64]) -> Result<Vec<f64>, ObjectiveError> {
        let (m, n) = self.shape();
        if x.len() != m * n {
            return Err(ObjectiveError::DimensionMismatch { expected: m * n, found: x.len() });
        }
        let mut g = vec![0.0; m * n];
        for (r, c, a) in self.problem.observed.iter() {
            g[r * n + c] = x[r * n + c] - a;
        }
        Ok(g)
    }
}

impl Objective for MatrixCompletion {
    type Point = FactoredMatrix;
    type Grad = MaskedMatrix;

    fn value(&self, x: &FactoredMatrix) -> f64 {
        0.5 * x
            .on_mask()
            .iter()
            .zip(self.problem.observed.values())
            .map(|(xv, a)| (xv - a).powi(2))
            .sum::<f64>()
    }

    fn gradient(&self, x: &FactoredMatrix) -> MaskedMatrix {
        let values = x.on_mask().iter().zip(self.problem.observed.values()).map(|(xv, a)| xv - a).collect();
        MaskedMatrix::new(Arc::clone(&self.problem.observed), values)
    }

    fn smoothness(&self) -> f64 {
        1.0
    }

    fn describe(&self) -> String {
        let (m, n) = self.shape();
        format!("matcomp(m={}, n={}, observed={})", m, n, self.problem.observed.nnz())
    }
}
