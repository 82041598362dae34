//! Norm-ball constraint sets: linear minimization oracles (LMOs) and, where a
//! baseline needs one, Euclidean projection.
//!
//! Oracles are pure functions. A zero direction is reported as
//! [`SetError::ZeroDirection`]; solvers decide what to do with it.

use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::SetError;
use crate::linalg::{top_singular_pair_from, DenseVector, PowerSettings, Seed, SparseMatrix};
use crate::matrix::{FactoredMatrix, MaskedMatrix};

/// Absolute slack on the norm inequality in `contains`.
pub const CONTAINS_SLACK: f64 = 1e-9;

/// Above this ratio between the largest and smallest nonzero |θᵢ| the ℓp
/// oracle switches to log-domain powers.
const LP_LOG_DOMAIN_RATIO: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "set", rename_all = "snake_case")]
pub enum SetDescriptor {
    L2Ball { radius: f64 },
    L1Ball { radius: f64 },
    LpBall { radius: f64, p: f64 },
    NuclearBall { radius: f64, rows: usize, cols: usize },
}

impl SetDescriptor {
    pub fn radius(&self) -> f64 {
        match *self {
            SetDescriptor::L2Ball { radius }
            | SetDescriptor::L1Ball { radius }
            | SetDescriptor::LpBall { radius, .. }
            | SetDescriptor::NuclearBall { radius, .. } => radius,
        }
    }
}

/// A convex compact set over points `P`, minimized against directions `G`.
pub trait FeasibleSet<P, G> {
    /// argmin over the set of ⟨direction, x⟩.
    fn lmo(&self, direction: &G) -> Result<P, SetError>;

    fn contains(&self, x: &P) -> bool;

    /// Euclidean diameter D.
    fn diameter(&self) -> f64;

    fn descriptor(&self) -> SetDescriptor;

    /// Euclidean projection, when cheap enough to offer.
    fn project(&self, _x: &P) -> Option<P> {
        None
    }

    fn has_projection(&self) -> bool {
        false
    }
}

fn check_radius(radius: f64) -> Result<(), SetError> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(SetError::InvalidRadius(radius))
    }
}

/// v = −(R/‖θ‖₂)·θ
pub fn lmo_l2(theta: &DenseVector, radius: f64) -> Result<DenseVector, SetError> {
    check_radius(radius)?;
    let n = theta.norm();
    if n == 0.0 {
        return Err(SetError::ZeroDirection);
    }
    Ok(theta.scaled(-radius / n))
}

/// Signed vertex −sgn(θᵢ)·R·eᵢ at the first index maximizing |θᵢ|.
pub fn lmo_l1(theta: &DenseVector, radius: f64) -> Result<DenseVector, SetError> {
    check_radius(radius)?;
    let (best, mag) = theta
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |(bi, bm), (i, &t)| if t.abs() > bm { (i, t.abs()) } else { (bi, bm) });
    if mag == 0.0 {
        return Err(SetError::ZeroDirection);
    }
    Ok(DenseVector::basis(theta.dim(), best, -theta[best].signum() * radius))
}

/// vᵢ = −sgn(θᵢ)·R·|θᵢ|^(q−1) / ‖θ‖_q^(q−1) with 1/p + 1/q = 1.
pub fn lmo_lp(theta: &DenseVector, radius: f64, p: f64) -> Result<DenseVector, SetError> {
    check_radius(radius)?;
    if !(p.is_finite() && p > 1.0) {
        return Err(SetError::InvalidExponent(p));
    }
    let max = theta.norm_inf();
    if max == 0.0 {
        return Err(SetError::ZeroDirection);
    }
    let q = p / (p - 1.0);
    let min_nonzero = theta.iter().filter(|t| **t != 0.0).fold(f64::INFINITY, |m, t| m.min(t.abs()));
    // u = |θ| / max|θ| keeps every power in [0, 1]
    let u: Vec<f64> = theta.iter().map(|t| t.abs() / max).collect();
    let v: Vec<f64> = if max / min_nonzero > LP_LOG_DOMAIN_RATIO {
        let logs: Vec<f64> = u.iter().map(|x| if *x > 0.0 { x.ln() } else { f64::NEG_INFINITY }).collect();
        // log ‖u‖_q^q via log-sum-exp; the max term is exactly ln 1 = 0
        let log_norm_q = logs.iter().map(|l| (q * l).exp()).sum::<f64>().ln() / q;
        theta
            .iter()
            .zip(&logs)
            .map(|(t, l)| {
                if *t == 0.0 {
                    0.0
                } else {
                    -t.signum() * radius * ((q - 1.0) * (l - log_norm_q)).exp()
                }
            })
            .collect()
    } else {
        let norm_q = u.iter().map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q);
        let denom = norm_q.powf(q - 1.0);
        theta.iter().zip(&u).map(|(t, x)| -t.signum() * radius * x.powf(q - 1.0) / denom).collect()
    };
    // signum(0.0) is 1 but x.powf(q - 1) is 0 there, so zeros stay zero
    Ok(DenseVector::from_vec(v.into_iter().map(|x| if x == 0.0 { 0.0 } else { x }).collect()))
}

/// Rank-one nuclear-ball vertex `scale · left rightᵀ` with `scale = −R`.
#[derive(Debug, Clone)]
pub struct NuclearVertex {
    pub scale: f64,
    pub left: DenseVector,
    pub right: DenseVector,
    /// Top singular value of the direction.
    pub sigma: f64,
}

/// V = −R·p qᵀ from the top singular pair (p, q) of the direction.
pub fn lmo_nuclear(grad: &SparseMatrix, radius: f64, tol: f64, seed: Seed) -> Result<NuclearVertex, SetError> {
    lmo_nuclear_from(grad, radius, PowerSettings { tol, ..PowerSettings::default() }, seed, None)
}

fn lmo_nuclear_from(
    grad: &SparseMatrix,
    radius: f64,
    settings: PowerSettings,
    seed: Seed,
    warm: Option<&[f64]>,
) -> Result<NuclearVertex, SetError> {
    check_radius(radius)?;
    if grad.is_zero() {
        return Err(SetError::ZeroDirection);
    }
    let t = top_singular_pair_from(grad, settings, seed, warm)?;
    Ok(NuclearVertex { scale: -radius, left: t.left, right: t.right, sigma: t.sigma })
}

/// z if ‖z‖₂ ≤ R, else R·z/‖z‖₂
pub fn project_l2(z: &DenseVector, radius: f64) -> DenseVector {
    let n = z.norm();
    if n <= radius {
        z.clone()
    } else {
        z.scaled(radius / n)
    }
}

/// Euclidean projection onto the ℓ1 ball by sorting magnitudes and
/// soft-thresholding at the unique τ with Σ max(|zᵢ| − τ, 0) = R.
pub fn project_l1(z: &DenseVector, radius: f64) -> DenseVector {
    if z.norm_l1() <= radius {
        return z.clone();
    }
    let tau = l1_threshold(z, radius);
    DenseVector::from_vec(z.iter().map(|&x| x.signum() * (x.abs() - tau).max(0.0)).collect())
}

pub(crate) fn l1_threshold(z: &DenseVector, radius: f64) -> f64 {
    let mut u: Vec<f64> = z.iter().map(|x| x.abs()).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - radius) / (j + 1) as f64;
        if uj > t {
            tau = t;
        } else {
            break;
        }
    }
    tau.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallKind {
    L2,
    L1,
    Lp(f64),
}

/// ℓ2, ℓ1 or ℓp ball of radius R centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBall {
    kind: BallKind,
    radius: f64,
}

impl NormBall {
    pub fn l2(radius: f64) -> Result<Self, SetError> {
        check_radius(radius)?;
        Ok(Self { kind: BallKind::L2, radius })
    }

    pub fn l1(radius: f64) -> Result<Self, SetError> {
        check_radius(radius)?;
        Ok(Self { kind: BallKind::L1, radius })
    }

    pub fn lp(radius: f64, p: f64) -> Result<Self, SetError> {
        check_radius(radius)?;
        if !(p.is_finite() && p > 1.0) {
            return Err(SetError::InvalidExponent(p));
        }
        Ok(Self { kind: BallKind::Lp(p), radius })
    }

    pub fn kind(&self) -> BallKind {
        self.kind
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn norm_of(&self, x: &DenseVector) -> f64 {
        match self.kind {
            BallKind::L2 => x.norm(),
            BallKind::L1 => x.norm_l1(),
            BallKind::Lp(p) => x.norm_lp(p),
        }
    }
}

impl FeasibleSet<DenseVector, DenseVector> for NormBall {
    fn lmo(&self, direction: &DenseVector) -> Result<DenseVector, SetError> {
        match self.kind {
            BallKind::L2 => lmo_l2(direction, self.radius),
            BallKind::L1 => lmo_l1(direction, self.radius),
            BallKind::Lp(p) => lmo_lp(direction, self.radius, p),
        }
    }

    fn contains(&self, x: &DenseVector) -> bool {
        self.norm_of(x) <= self.radius + CONTAINS_SLACK
    }

    fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    fn descriptor(&self) -> SetDescriptor {
        match self.kind {
            BallKind::L2 => SetDescriptor::L2Ball { radius: self.radius },
            BallKind::L1 => SetDescriptor::L1Ball { radius: self.radius },
            BallKind::Lp(p) => SetDescriptor::LpBall { radius: self.radius, p },
        }
    }

    fn project(&self, x: &DenseVector) -> Option<DenseVector> {
        match self.kind {
            BallKind::L2 => Some(project_l2(x, self.radius)),
            BallKind::L1 => Some(project_l1(x, self.radius)),
            BallKind::Lp(_) => None,
        }
    }

    fn has_projection(&self) -> bool {
        !matches!(self.kind, BallKind::Lp(_))
    }
}

/// Nuclear-norm ball over m×n matrices, LMO via top singular pair.
///
/// Successive oracle calls warm-start power iteration from the previous right
/// singular vector. The cache makes results depend on call order, so each
/// solver run should own its own ball; `Clone` starts with an empty cache.
#[derive(Debug)]
pub struct NuclearBall {
    radius: f64,
    rows: usize,
    cols: usize,
    power: PowerSettings,
    seed: Seed,
    warm_start: bool,
    warm: Mutex<Option<Vec<f64>>>,
}

impl Clone for NuclearBall {
    fn clone(&self) -> Self {
        Self { warm: Mutex::new(None), ..*self }
    }
}

impl NuclearBall {
    pub fn new(radius: f64, rows: usize, cols: usize, seed: Seed) -> Result<Self, SetError> {
        check_radius(radius)?;
        Ok(Self {
            radius,
            rows,
            cols,
            power: PowerSettings { tol: 1e-9, max_iter: 2_000 },
            seed,
            warm_start: true,
            warm: Mutex::new(None),
        })
    }

    pub fn with_power_settings(mut self, power: PowerSettings) -> Self {
        self.power = power;
        self
    }

    pub fn with_warm_start(mut self, on: bool) -> Self {
        self.warm_start = on;
        self
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// R·p qᵀ from the top singular pair of `target`: the boundary point
    /// best aligned with the observed matrix.
    pub fn aligned_vertex(&self, target: &Arc<SparseMatrix>) -> Result<FactoredMatrix, SetError> {
        let v = lmo_nuclear_from(target, self.radius, self.power, self.seed, None)?;
        Ok(FactoredMatrix::rank_one(self.radius, v.left, v.right, Arc::clone(target)))
    }
}

impl FeasibleSet<FactoredMatrix, MaskedMatrix> for NuclearBall {
    fn lmo(&self, direction: &MaskedMatrix) -> Result<FactoredMatrix, SetError> {
        let mask = direction.mask();
        if mask.n_rows() != self.rows || mask.n_cols() != self.cols {
            return Err(SetError::DimensionMismatch { expected: self.rows * self.cols, found: mask.n_rows() * mask.n_cols() });
        }
        let sparse = direction.to_sparse();
        let mut warm = self.warm.lock().expect("warm-start cache poisoned");
        let start = if self.warm_start { warm.as_deref() } else { None };
        let v = lmo_nuclear_from(&sparse, self.radius, self.power, self.seed, start)?;
        if self.warm_start {
            *warm = Some(v.right.as_slice().to_vec());
        }
        Ok(FactoredMatrix::rank_one(v.scale, v.left, v.right, Arc::clone(mask)))
    }

    fn contains(&self, x: &FactoredMatrix) -> bool {
        x.atomic_norm_bound() <= self.radius + CONTAINS_SLACK
    }

    fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    fn descriptor(&self) -> SetDescriptor {
        SetDescriptor::NuclearBall { radius: self.radius, rows: self.rows, cols: self.cols }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    fn close(a: &DenseVector, b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn l2_examples() {
        assert!(close(&lmo_l2(&v(&[3.0, 4.0]), 1.0).unwrap(), &[-0.6, -0.8], 1e-15));
        assert!(close(&lmo_l2(&v(&[0.0, -2.0]), 3.0).unwrap(), &[0.0, 3.0], 1e-15));
        assert_eq!(lmo_l2(&v(&[0.0, 0.0]), 1.0), Err(SetError::ZeroDirection));
        assert_eq!(lmo_l2(&v(&[1.0]), 0.0), Err(SetError::InvalidRadius(0.0)));
    }

    #[test]
    fn l1_examples() {
        assert_eq!(lmo_l1(&v(&[3.0, -5.0, 1.0]), 2.0).unwrap().as_slice(), &[0.0, 2.0, 0.0]);
        assert_eq!(lmo_l1(&v(&[2.0, -2.0]), 1.0).unwrap().as_slice(), &[-1.0, 0.0]);
        assert_eq!(lmo_l1(&v(&[1.0, 0.0, 0.0]), 1.0).unwrap().as_slice(), &[-1.0, 0.0, 0.0]);
        assert_eq!(lmo_l1(&v(&[0.0, 0.0]), 1.0), Err(SetError::ZeroDirection));
    }

    #[test]
    fn lp_examples() {
        assert!(close(&lmo_lp(&v(&[3.0, 4.0]), 1.0, 2.0).unwrap(), &[-0.6, -0.8], 1e-15));
        let c = -(2f64.powf(-0.25));
        let out = lmo_lp(&v(&[1.0, 1.0]), 1.0, 4.0).unwrap();
        assert!(close(&out, &[c, c], 1e-15));
        assert!((out.norm_lp(4.0) - 1.0).abs() < 1e-12);
        assert_eq!(lmo_lp(&v(&[0.0, 2.0]), 1.0, 3.0).unwrap().as_slice(), &[0.0, -1.0]);
        assert_eq!(lmo_lp(&v(&[1.0]), 1.0, 1.0), Err(SetError::InvalidExponent(1.0)));
    }

    #[test]
    fn lp_log_domain_branch_keeps_unit_norm() {
        let theta = v(&[1e-12, -3.0, 1e10, 0.0]);
        for p in [1.05, 1.5, 3.0, 40.0] {
            let out = lmo_lp(&theta, 2.0, p).unwrap();
            assert!(out.iter().all(|x| x.is_finite()));
            assert!((out.norm_lp(p) - 2.0).abs() < 1e-9, "p = {p}");
            assert_eq!(out[3], 0.0);
            assert!(out[2] < 0.0 && out[1] > 0.0);
        }
    }

    #[test]
    fn projections() {
        assert_eq!(project_l2(&v(&[0.1, 0.2]), 1.0).as_slice(), &[0.1, 0.2]);
        assert!(close(&project_l2(&v(&[3.0, 4.0]), 1.0), &[0.6, 0.8], 1e-15));
        assert_eq!(project_l1(&v(&[0.5, 0.3]), 1.0).as_slice(), &[0.5, 0.3]);
        assert_eq!(project_l1(&v(&[2.0, 0.0]), 1.0).as_slice(), &[1.0, 0.0]);
        assert!(close(&project_l1(&v(&[1.0, 1.0]), 1.0), &[0.5, 0.5], 1e-15));
        assert!(close(&project_l1(&v(&[-3.0, 1.0, 0.5]), 2.0), &[-2.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn nuclear_diag_example() {
        let g = SparseMatrix::from_dense(2, 2, &[5.0, 0.0, 0.0, 1.0]).unwrap();
        let out = lmo_nuclear(&g, 2.0, 1e-12, Seed(1)).unwrap();
        let dense: Vec<f64> =
            (0..2).flat_map(|r| (0..2).map(move |c| (r, c))).map(|(r, c)| out.scale * out.left[r] * out.right[c]).collect();
        assert!(close(&DenseVector::new(dense).unwrap(), &[-2.0, 0.0, 0.0, 0.0], 1e-9));
        let z = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 0.0)]).unwrap();
        assert!(matches!(lmo_nuclear(&z, 1.0, 1e-9, Seed(0)), Err(SetError::ZeroDirection)));
    }

    #[test]
    fn ball_descriptors_and_diameter() {
        let b = NormBall::lp(1.5, 3.0).unwrap();
        assert_eq!(b.diameter(), 3.0);
        assert_eq!(b.descriptor(), SetDescriptor::LpBall { radius: 1.5, p: 3.0 });
        assert!(!b.has_projection());
        assert!(NormBall::l1(2.0).unwrap().has_projection());
        assert!(NormBall::l2(-1.0).is_err());
    }
}
