use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{agm_momentum_equivalence, bounds};
use crate::linalg::{DenseVector, Seed, SparseMatrix};
use crate::matrix::FactoredMatrix;
use crate::objectives::{
    logistic_objective, matcomp_objective, quadratic_objective, LogisticProblem, MatCompProblem, Objective,
    Quadratic,
};
use crate::sets::{lmo_l1, lmo_l2, lmo_lp, lmo_nuclear, project_l1, project_l2, NormBall, NuclearBall};
use crate::solvers::{
    run_afw_observed, run_agm_observed, run_agm_sc_observed, run_fw, run_fw_observed, Schedule, StoppingRule,
};

/// Deliberate defects used to check that the self-test notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Return +R·θ/‖θ‖ from the ℓ2 oracle, the maximizer instead of the minimizer.
    FlipLmoL2Sign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Suite {
    checks: Vec<SelftestCheck>,
}

impl Suite {
    fn record(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(SelftestCheck { name: name.to_string(), passed, detail });
    }
}

/// Runs the invariant suite. Output depends only on `seed` and `mutation`.
pub fn cmd_selftest(seed: u64, mutation: Option<Mutation>) -> SelftestReport {
    let seed = Seed(seed);
    let mut s = Suite { checks: Vec::new() };
    let l2 = |theta: &DenseVector, r: f64| {
        let v = lmo_l2(theta, r).expect("nonzero direction");
        match mutation {
            Some(Mutation::FlipLmoL2Sign) => v.scaled(-1.0),
            None => v,
        }
    };

    // linear minimization oracles against sampled feasible points
    {
        let mut rng = seed.derive(10).rng();
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..200 {
            let theta = DenseVector::gaussian(8, &mut rng);
            let v = l2(&theta, 1.5);
            for _ in 0..20 {
                let x = DenseVector::random_unit(8, &mut rng).scaled(1.5 * rng.random::<f64>());
                worst = worst.max(theta.dot(&v) - theta.dot(&x));
            }
        }
        s.record("lmo_l2 minimizes over the ball", worst <= 1e-9, format!("max excess {worst:.3e}"));
    }
    {
        let mut rng = seed.derive(11).rng();
        let mut mismatches = 0;
        for _ in 0..200 {
            let theta = DenseVector::gaussian(6, &mut rng);
            let v = lmo_l1(&theta, 2.0).expect("nonzero direction");
            let best = (0..6)
                .flat_map(|i| [2.0, -2.0].map(|s| DenseVector::basis(6, i, s)))
                .map(|x| theta.dot(&x))
                .fold(f64::INFINITY, f64::min);
            if theta.dot(&v) != best {
                mismatches += 1;
            }
        }
        s.record("lmo_l1 matches vertex enumeration", mismatches == 0, format!("{mismatches} mismatches"));
    }
    {
        let mut rng = seed.derive(12).rng();
        let mut worst = f64::NEG_INFINITY;
        let mut p2 = 0.0_f64;
        for _ in 0..200 {
            let theta = DenseVector::gaussian(7, &mut rng);
            let p = 1.0 + 4.0 * rng.random::<f64>() + 1e-3;
            let v = lmo_lp(&theta, 1.0, p).expect("nonzero direction");
            for _ in 0..20 {
                let u = DenseVector::gaussian(7, &mut rng);
                let x = u.scaled(rng.random::<f64>() / u.norm_lp(p));
                worst = worst.max(theta.dot(&v) - theta.dot(&x));
            }
            let a = lmo_lp(&theta, 1.0, 2.0).expect("nonzero direction");
            let b = lmo_l2(&theta, 1.0).expect("nonzero direction");
            p2 = p2.max(a.sub(&b).norm_inf());
        }
        s.record(
            "lmo_lp minimizes and agrees with lmo_l2 at p = 2",
            worst <= 1e-9 && p2 <= 1e-12,
            format!("max excess {worst:.3e}, p=2 deviation {p2:.3e}"),
        );
    }
    {
        let mut rng = seed.derive(13).rng();
        let (m, n) = (6, 5);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..20 {
            let g: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>() - 0.5).collect();
            let gm = SparseMatrix::from_dense(m, n, &g).expect("finite");
            let vtx = lmo_nuclear(&gm, 2.0, 1e-12, seed.derive(14)).expect("nonzero direction");
            let v_val: f64 = gm.iter().map(|(i, j, gij)| gij * vtx.scale * vtx.left[i] * vtx.right[j]).sum();
            for _ in 0..25 {
                // convex combinations of two unit rank-one matrices stay in the ball
                let t = rng.random::<f64>();
                let (a, b) = (DenseVector::random_unit(m, &mut rng), DenseVector::random_unit(n, &mut rng));
                let (c, d) = (DenseVector::random_unit(m, &mut rng), DenseVector::random_unit(n, &mut rng));
                let x_val: f64 =
                    gm.iter().map(|(i, j, gij)| gij * 2.0 * (t * a[i] * b[j] + (1.0 - t) * c[i] * d[j])).sum();
                worst = worst.max(v_val - x_val);
            }
        }
        s.record("lmo_nuclear minimizes over the ball", worst <= 1e-6, format!("max excess {worst:.3e}"));
    }

    // projections satisfy the variational inequality ⟨z − Πz, x − Πz⟩ ≤ 0
    {
        let mut rng = seed.derive(15).rng();
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..200 {
            let z = DenseVector::gaussian(6, &mut rng).scaled(3.0);
            for (pz, sample) in [
                (project_l2(&z, 1.0), DenseVector::random_unit(6, &mut rng)),
                (project_l1(&z, 1.0), lmo_l1(&DenseVector::gaussian(6, &mut rng), 1.0).expect("nonzero")),
            ] {
                worst = worst.max(z.sub(&pz).dot(&sample.sub(&pz)));
            }
        }
        s.record("projections satisfy the optimality condition", worst <= 1e-9, format!("max {worst:.3e}"));
    }

    // gradients against central differences
    {
        let mut rng = seed.derive(16).rng();
        let center = DenseVector::gaussian(5, &mut rng);
        let q = quadratic_objective(center, 1.7).expect("valid");
        let a: Vec<f64> = (0..20).map(|_| rng.random::<f64>() - 0.5).collect();
        let labels: Vec<f64> = (0..5).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let lg = logistic_objective(
            LogisticProblem::new(SparseMatrix::from_dense(5, 4, &a).expect("finite"), labels).expect("valid"),
        )
        .expect("valid");
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let x = DenseVector::gaussian(5, &mut rng);
            worst = worst.max(fd_error(&q, &x));
            let x = DenseVector::gaussian(4, &mut rng);
            worst = worst.max(fd_error(&lg, &x));
        }
        let obs = SparseMatrix::from_dense(3, 3, &[1.0, 0.0, 2.0, 0.0, -1.0, 0.5, 3.0, 0.0, 0.0]).expect("finite");
        let mc = matcomp_objective(MatCompProblem::new(obs).expect("nonempty"));
        let x: Vec<f64> = (0..9).map(|_| rng.random::<f64>()).collect();
        let g = mc.gradient_flat(&x).expect("shape");
        for i in 0..9 {
            let h = 1e-6;
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (mc.value_flat(&xp).expect("shape") - mc.value_flat(&xm).expect("shape")) / (2.0 * h);
            worst = worst.max((fd - g[i]).abs() / g[i].abs().max(1.0));
        }
        s.record("gradients match finite differences", worst <= 1e-5, format!("max relative error {worst:.3e}"));
    }

    // hand traces of the 1-d problem f(x) = x² on [−1, 1] from x₀ = 1
    {
        let f = quadratic_objective(v1(0.0), 1.0).expect("valid");
        let ball = NormBall::l2(1.0).expect("valid");
        let stop = StoppingRule::iterations(2);
        let fw = run_fw(&f, &ball, v1(1.0), &Schedule::FwClassic, &stop).expect("feasible");
        let xs: Vec<f64> = fw.trace.rows.iter().map(|r| r.f_value.sqrt()).collect();
        let ok = close(fw.x[0], 1.0 / 3.0) && close(xs[1], 1.0);
        s.record("FW hand trace 1, -1, 1/3", ok, format!("x_2 = {:.17}", fw.x[0]));

        let mut afw = (f64::NAN, f64::NAN, f64::NAN, f64::NAN);
        run_afw_observed(&f, &ball, v1(1.0), &Schedule::AfwShifted, &StoppingRule::iterations(1), false, |st| {
            afw = (st.y[0], st.theta_next[0], st.v_next[0], st.x_next[0]);
        })
        .expect("feasible");
        let ok = close(afw.0, 1.0) && close(afw.1, 4.0 / 3.0) && close(afw.2, -1.0) && close(afw.3, -1.0 / 3.0);
        s.record("AFW hand trace y0=1, theta1=4/3, v1=-1, x1=-1/3", ok, format!("{afw:?}"));

        let mut agm = (f64::NAN, f64::NAN, f64::NAN);
        run_agm_observed(&f, None, v1(1.0), &StoppingRule::iterations(1), None, |st| {
            agm = (st.x_next[0], st.v_next[0], st.mu_next);
        })
        .expect("valid");
        let ok = close(agm.0, 0.0) && close(agm.1, 0.0) && close(agm.2, 4.0 / 3.0);
        s.record("AGM hand trace x1=0, v1=0, mu1=4/3", ok, format!("{agm:?}"));
    }

    // estimate-sequence sandwich on a short AFW run
    {
        let mut rng = seed.derive(17).rng();
        let c = DenseVector::random_unit(10, &mut rng).scaled(2.0);
        let f = quadratic_objective(c.clone(), 1.0).expect("valid");
        let ball = NormBall::l2(1.0).expect("valid");
        let f_star = f.value(&c.scaled(0.5));
        let x0 = DenseVector::random_unit(10, &mut rng).scaled(0.5);
        let f0 = f.value(&x0);
        let mut violations = 0;
        let mut theta_dev = 0.0_f64;
        let mut grads = Vec::new();
        let run = run_afw_observed(&f, &ball, x0, &Schedule::AfwShifted, &StoppingRule::iterations(300), true, |st| {
            grads.push(st.grad_y.clone());
            if st.k == 100 {
                let w = bounds::theta_weights(100);
                let avg = grads.iter().zip(&w).fold(DenseVector::zeros(10), |acc, (g, wi)| acc.add_scaled(*wi, g));
                theta_dev = avg.sub(st.theta_next).norm();
            }
        })
        .expect("feasible");
        let (l, d) = (2.0, 2.0);
        for row in &run.trace.rows {
            let es = row.es.expect("diagnostics on");
            let lower = row.f_value <= es.phi_star + es.xi + 1e-12;
            let upper = row.f_value - f_star <= es.lambda * (f0 - f_star) + es.xi + 1e-12;
            let env = es.xi <= bounds::xi_envelope(row.k, l, d) + 1e-12;
            let lam = (es.lambda - bounds::lambda_shifted(row.k)).abs() <= 1e-14;
            if !(lower && upper && env && lam) {
                violations += 1;
            }
        }
        s.record("estimate-sequence sandwich and lambda identity", violations == 0, format!("{violations} violations"));
        s.record("theta is the weighted gradient average", theta_dev <= 1e-10, format!("deviation {theta_dev:.3e}"));
    }

    // momentum step equals the minimizer of the regularized lower model
    {
        let mut rng = seed.derive(18).rng();
        let mut worst = 0.0_f64;
        for _ in 0..200 {
            let v = DenseVector::gaussian(5, &mut rng);
            let g = DenseVector::gaussian(5, &mut rng);
            let delta = rng.random::<f64>() * 0.9 + 0.05;
            let mu = rng.random::<f64>() * 5.0 + 0.1;
            worst = worst.max(agm_momentum_equivalence(&v, &g, delta, mu).1);
        }
        s.record("AGM momentum closed form", worst < 1e-12, format!("max residual {worst:.3e}"));
    }

    // strongly convex AGM: v_{k+1} = (1−δ)v_k + δ z_{k+1}
    {
        let f = Quadratic::diagonal(
            vec![0.5, 1.0, 2.0, 4.0],
            DenseVector::new(vec![1.0, -2.0, 0.5, 3.0]).expect("finite"),
        )
        .expect("valid");
        let mut worst = 0.0_f64;
        run_agm_sc_observed(&f, DenseVector::zeros(4), &StoppingRule::iterations(50), |st| {
            let rhs = st.v.scaled(1.0 - st.delta).add_scaled(st.delta, st.z_next);
            worst = worst.max(rhs.sub(st.v_next).norm() / st.v_next.norm().max(1.0));
        })
        .expect("strongly convex");
        s.record("AGM_sc momentum decomposition", worst <= 1e-14, format!("max relative deviation {worst:.3e}"));
    }

    // determinism: identical inputs give identical traces
    {
        let f = quadratic_objective(DenseVector::new(vec![2.0, 0.0, 0.0]).expect("finite"), 1.0).expect("valid");
        let ball = NormBall::l1(1.0).expect("valid");
        let run = || {
            run_fw(&f, &ball, DenseVector::zeros(3), &Schedule::FwClassic, &StoppingRule::iterations(50))
                .expect("feasible")
                .trace
        };
        s.record("runs are deterministic", run() == run(), String::new());
    }

    // matrix iterates stay feasible and low rank
    {
        let obs = SparseMatrix::from_dense(3, 3, &[1.0, 0.0, 2.0, 0.0, -1.0, 0.5, 3.0, 0.0, 0.0]).expect("finite");
        let mc = matcomp_objective(MatCompProblem::new(obs).expect("nonempty"));
        let ball = NuclearBall::new(1.0, 3, 3, seed.derive(19)).expect("valid");
        let mut worst_rank = 0usize;
        let x0 = FactoredMatrix::zeros(mc.mask().clone());
        run_fw_observed(&mc, &ball, x0, &Schedule::FwClassic, &StoppingRule::iterations(10), |st| {
            worst_rank = worst_rank.max(st.x_next.numerical_rank(1e-9).saturating_sub(st.k + 1));
        })
        .expect("feasible");
        s.record("matrix FW keeps rank(X_k) <= k", worst_rank == 0, format!("excess {worst_rank}"));
    }

    SelftestReport { seed: seed.0, checks: s.checks }
}

fn v1(x: f64) -> DenseVector {
    DenseVector::new(vec![x]).expect("finite")
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-15
}

fn fd_error<O: Objective<Point = DenseVector, Grad = DenseVector>>(f: &O, x: &DenseVector) -> f64 {
    let g = f.gradient(x);
    let h = 1e-6;
    (0..x.dim())
        .map(|i| {
            let e = DenseVector::basis(x.dim(), i, h);
            let fd = (f.value(&x.add_scaled(1.0, &e)) - f.value(&x.add_scaled(-1.0, &e))) / (2.0 * h);
            (fd - g[i]).abs() / g[i].abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

pub fn render_selftest(r: &SelftestReport) -> String {
    let mut out = String::new();
    for c in &r.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            let _ = writeln!(out, "{status}  {}", c.name);
        } else {
            let _ = writeln!(out, "{status}  {}  ({})", c.name, c.detail);
        }
    }
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed (seed {})", r.checks.len(), r.seed);
    out
}
