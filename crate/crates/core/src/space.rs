//! The two roles a solver needs from its vector space: primal iterates that
//! move by convex combination, and dual directions (gradients, θ) that pair
//! with them.

use crate::linalg::DenseVector;

/// A point that projection-free solvers move through by convex combination.
pub trait Iterate: Clone {
    /// `(1 - t) * self + t * other`.
    fn blend(&self, other: &Self, t: f64) -> Self;

    /// Squared Euclidean (Frobenius) distance.
    fn dist_sq(&self, other: &Self) -> f64;
}

/// A linear functional on `P`: gradients and running gradient averages.
pub trait Direction<P>: Clone {
    fn blend(&self, other: &Self, t: f64) -> Self;

    /// Zero functional with the same shape.
    fn zero_like(&self) -> Self;

    /// ⟨self, x⟩
    fn pair(&self, x: &P) -> f64;

    fn norm_sq(&self) -> f64;

    fn is_zero(&self) -> bool;
}

impl Iterate for DenseVector {
    fn blend(&self, other: &Self, t: f64) -> Self {
        self.lerp(other, t)
    }

    fn dist_sq(&self, other: &Self) -> f64 {
        DenseVector::dist_sq(self, other)
    }
}

impl Direction<DenseVector> for DenseVector {
    fn blend(&self, other: &Self, t: f64) -> Self {
        self.lerp(other, t)
    }

    fn zero_like(&self) -> Self {
        DenseVector::zeros(self.dim())
    }

    fn pair(&self, x: &DenseVector) -> f64 {
        self.dot(x)
    }

    fn norm_sq(&self) -> f64 {
        DenseVector::norm_sq(self)
    }

    fn is_zero(&self) -> bool {
        DenseVector::is_zero(self)
    }
}
