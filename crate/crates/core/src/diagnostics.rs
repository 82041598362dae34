//! Analysis objects computed alongside the solvers: FW gaps, the linear
//! estimate-sequence tracker for accelerated Frank-Wolfe, the weighted dual
//! gap of AGM, momentum-as-minimizer checks and empirical rate fits.

use serde::{Deserialize, Serialize};

use crate::error::{DiagnosticsError, SetError};
use crate::linalg::DenseVector;
use crate::sets::FeasibleSet;
use crate::solvers::SolverTrace;
use crate::space::{Direction, Iterate};

/// FW gap ⟨g, x − lmo(g)⟩. A zero direction gives 0.
pub fn fw_gap<P, G, S>(grad: &G, x: &P, set: &S) -> Result<f64, SetError>
where
    G: Direction<P>,
    S: FeasibleSet<P, G> + ?Sized,
{
    match set.lmo(grad) {
        Ok(v) => Ok(grad.pair(x) - grad.pair(&v)),
        Err(SetError::ZeroDirection) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// State of the linear surrogate Φ_k(x) = Φ*_k + ⟨x − v_k, θ_k⟩ together with
/// the estimate-sequence weight λ_k and the slack ξ_k.
#[derive(Debug, Clone)]
pub struct SurrogateState<P, G> {
    pub theta: G,
    pub v: P,
    pub phi_star: f64,
    pub lambda: f64,
    pub xi: f64,
    pub k: usize,
}

impl<P: Iterate, G: Direction<P>> SurrogateState<P, G> {
    /// λ₀ = 1, ξ₀ = 0, Φ*₀ = f(x₀), v₀ = x₀, θ₀ = 0.
    pub fn initial(f_x0: f64, x0: &P, zero: G) -> Self {
        Self { theta: zero, v: x0.clone(), phi_star: f_x0, lambda: 1.0, xi: 0.0, k: 0 }
    }

    /// Φ_k evaluated at an arbitrary point.
    pub fn surrogate_at(&self, x: &P) -> f64 {
        self.phi_star + self.theta.pair(x) - self.theta.pair(&self.v)
    }
}

/// One step of the surrogate recursion, given the quantities AFW produced at
/// iteration k (δ_k, f(y_k), ∇f(y_k), y_k and the new momentum point v_{k+1}).
pub fn surrogate_step<P, G>(
    state: &SurrogateState<P, G>,
    delta: f64,
    f_y: f64,
    grad_y: &G,
    y: &P,
    v_next: &P,
    smoothness: f64,
) -> SurrogateState<P, G>
where
    P: Iterate,
    G: Direction<P>,
{
    let keep = 1.0 - delta;
    let phi_star = keep * state.phi_star
        + delta * f_y
        + keep * (state.theta.pair(v_next) - state.theta.pair(&state.v))
        + delta * (grad_y.pair(v_next) - grad_y.pair(y));
    let xi = keep * state.xi + 0.5 * smoothness * delta * delta * v_next.dist_sq(&state.v);
    SurrogateState {
        theta: state.theta.blend(grad_y, delta),
        v: v_next.clone(),
        phi_star,
        lambda: state.lambda * keep,
        xi,
        k: state.k + 1,
    }
}

/// Closed-form bounds and weights for the default schedules.
pub mod bounds {
    /// λ_k = ∏_{j<k} (1 − 2/(j+3)) = 2/((k+1)(k+2)).
    pub fn lambda_shifted(k: usize) -> f64 {
        let k = k as f64;
        2.0 / ((k + 1.0) * (k + 2.0))
    }

    /// f(x_k) − f* ≤ 2(f(x₀) − f*)/((k+1)(k+2)) + 2LD²/(k+2) for AFW.
    pub fn afw_general(k: usize, initial_gap: f64, smoothness: f64, diameter: f64) -> f64 {
        lambda_shifted(k) * initial_gap + xi_envelope(k, smoothness, diameter)
    }

    /// ξ_k ≤ 2LD²/(k+2).
    pub fn xi_envelope(k: usize, smoothness: f64, diameter: f64) -> f64 {
        2.0 * smoothness * diameter * diameter / (k as f64 + 2.0)
    }

    /// Initial potential f(x₀) − f* + L‖x₀ − x*‖² of AGM with μ₀ = 2L.
    pub fn agm_potential(initial_gap: f64, smoothness: f64, dist_sq: f64) -> f64 {
        initial_gap + smoothness * dist_sq
    }

    /// 4·C/(k+2)² envelope on f(x_k) − f* for AGM.
    pub fn agm_value(k: usize, potential: f64) -> f64 {
        4.0 * potential / ((k as f64 + 2.0).powi(2))
    }

    /// ‖∇f(y_k)‖² ≤ 16·L·C/(k+2)².
    pub fn agm_gradient(k: usize, smoothness: f64, potential: f64) -> f64 {
        16.0 * smoothness * potential / ((k as f64 + 2.0).powi(2))
    }

    /// ‖v_k − x*‖² ≤ C / L.
    pub fn agm_momentum_radius(smoothness: f64, potential: f64) -> f64 {
        potential / smoothness
    }

    /// Weighted dual gap bound 2L‖x₀ − x*‖²/(k(k+3)).
    pub fn weighted_dual_gap(k: usize, smoothness: f64, dist_sq: f64) -> f64 {
        let k = k as f64;
        2.0 * smoothness * dist_sq / (k * (k + 3.0))
    }

    /// Weights of ∇f(y_τ), τ = 0..=k, in θ_{k+1} under δ_k = 2/(k+3):
    /// 2(τ+2)/((k+2)(k+3)).
    pub fn theta_weights(k: usize) -> Vec<f64> {
        let denom = ((k + 2) * (k + 3)) as f64;
        (0..=k).map(|tau| 2.0 * (tau as f64 + 2.0) / denom).collect()
    }
}

/// Weights w_k^(τ) = 2(τ+2)/(k(k+3)), τ = 0..k−1.
pub fn dual_gap_weights(k: usize) -> Vec<f64> {
    let denom = (k * (k + 3)) as f64;
    (0..k).map(|tau| 2.0 * (tau as f64 + 2.0) / denom).collect()
}

/// Supporting-hyperplane data of one AGM iteration.
#[derive(Debug, Clone)]
pub struct HyperplaneRecord {
    pub f_y: f64,
    pub grad_y: DenseVector,
    pub v_next: DenseVector,
    pub y: DenseVector,
}

impl HyperplaneRecord {
    /// f(y_τ) + ⟨∇f(y_τ), v_{τ+1} − y_τ⟩
    pub fn lower_model(&self) -> f64 {
        self.f_y + self.grad_y.dot(&self.v_next) - self.grad_y.dot(&self.y)
    }
}

/// Σ_τ w_k^(τ) [f(y_τ) + ⟨∇f(y_τ), v_{τ+1} − y_τ⟩] over the first k records.
pub fn weighted_dual_gap(records: &[HyperplaneRecord], k: usize) -> Result<f64, DiagnosticsError> {
    let terms: Vec<f64> = records.iter().take(k).map(HyperplaneRecord::lower_model).collect();
    weighted_dual_gap_from_terms(&terms, k)
}

/// Same as [`weighted_dual_gap`] over precomputed lower-model values, e.g. the
/// `lower_model` column of an AGM trace.
pub fn weighted_dual_gap_from_terms(terms: &[f64], k: usize) -> Result<f64, DiagnosticsError> {
    if k == 0 || terms.len() < k {
        return Err(DiagnosticsError::IncompleteTrace { needed: k.max(1), available: terms.len() });
    }
    Ok(dual_gap_weights(k).iter().zip(terms).map(|(w, t)| w * t).sum())
}

/// Closed-form minimizer v_k − (δ_k/μ_{k+1})∇f(y_k) of the regularized lower
/// model, with the residual of its first-order condition
/// ∇f(y_k) + (μ_{k+1}/δ_k)(v − v_k) = 0.
pub fn agm_momentum_equivalence(
    v_k: &DenseVector,
    grad_yk: &DenseVector,
    delta_k: f64,
    mu_next: f64,
) -> (DenseVector, f64) {
    assert!(delta_k > 0.0 && mu_next > 0.0, "δ and μ must be positive");
    let closed = v_k.add_scaled(-delta_k / mu_next, grad_yk);
    let residual = grad_yk.add_scaled(mu_next / delta_k, &closed.sub(v_k)).norm();
    (closed, residual)
}

/// Least-squares fit of log(f(x_k) − f*) against log k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub slope: f64,
    pub intercept: f64,
    pub window: (usize, usize),
    pub r_squared: f64,
    /// Rows in the window dropped because the gap was ≤ 1e-14.
    #[serde(skip)]
    pub excluded: usize,
}

const RATE_GAP_FLOOR: f64 = 1e-14;
const RATE_MIN_ROWS: usize = 10;

/// Default window [max(100, K/100), K].
pub fn default_window(last_k: usize) -> (usize, usize) {
    ((last_k / 100).max(100).min(last_k), last_k)
}

pub fn estimate_rate(trace: &SolverTrace, f_star: f64, window: (usize, usize)) -> Result<RateReport, DiagnosticsError> {
    let (k_min, k_max) = window;
    if k_min >= k_max {
        return Err(DiagnosticsError::InvalidWindow(k_min, k_max));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = 0;
    for row in trace.rows.iter().filter(|r| r.k >= k_min.max(1) && r.k <= k_max) {
        let gap = row.f_value - f_star;
        if gap < 0.0 {
            return Err(DiagnosticsError::NegativeGap { k: row.k, gap });
        }
        if gap <= RATE_GAP_FLOOR {
            excluded += 1;
            continue;
        }
        xs.push((row.k as f64).ln());
        ys.push(gap.ln());
    }
    if xs.len() < RATE_MIN_ROWS {
        return Err(DiagnosticsError::EmptyWindow { usable: xs.len() });
    }
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(RateReport { slope, intercept, window, r_squared, excluded })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r_squared)
}

/// Standard deviation of successive differences f(x_{k+1}) − f(x_k) over the
/// window; an informational measure of zig-zag.
pub fn zigzag_dispersion(trace: &SolverTrace, window: (usize, usize)) -> f64 {
    let vals: Vec<f64> =
        trace.rows.iter().filter(|r| r.k >= window.0 && r.k <= window.1).map(|r| r.f_value).collect();
    if vals.len() < 3 {
        return 0.0;
    }
    let diffs: Vec<f64> = vals.windows(2).map(|w| w[1] - w[0]).collect();
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n).sqrt()
}
