//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs as a plain binary (`harness = false`) so the report is
//! always printed.

use std::time::Instant;

use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::Rng;

use momentum_fw::data_io::synthetic_low_rank;
use momentum_fw::diagnostics::{
    agm_momentum_equivalence, bounds, dual_gap_weights, estimate_rate, weighted_dual_gap_from_terms,
};
use momentum_fw::linalg::{DenseVector, Seed, SparseMatrix};
use momentum_fw::matrix::FactoredMatrix;
use momentum_fw::objectives::{
    logistic_objective, matcomp_objective, quadratic_objective, LogisticProblem, MatCompProblem, MatrixCompletion,
    Objective, Quadratic,
};
use momentum_fw::sets::{lmo_l1, lmo_l2, lmo_lp, lmo_nuclear, NormBall, NuclearBall};
use momentum_fw::solvers::{
    run_afw, run_afw_observed, run_agm_observed, run_agm_sc_observed, run_fw, run_fw_observed, Schedule,
    SolverTrace, StoppingRule, AGM_DIST_REF, AGM_GRAD_Y_SQ, AGM_LOWER_MODEL,
};

struct Verdict {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

/// An AFW trace with diagnostics on, kept for the estimate-sequence check.
struct EsRun {
    label: String,
    trace: SolverTrace,
    f_star: f64,
    smoothness: f64,
    diameter: f64,
}

fn main() {
    let mut es_runs = Vec::new();
    let mut verdicts = vec![
        interior_bound(&mut es_runs),
        active_exponents(&mut es_runs),
        agm_constants(),
        weighted_dual_gap(),
    ];
    let matcomp = matrix_completion(&mut es_runs);
    verdicts.push(es_sandwich(&es_runs));
    verdicts.push(lmo_equivalence());
    verdicts.push(matcomp);
    verdicts.push(hand_traces());
    verdicts.push(identities());
    verdicts.push(gradient_suites());
    verdicts.sort_by_key(|v| v.id);

    println!();
    for v in &verdicts {
        println!("criterion {:>2} [{}] {}: {}", v.id, if v.passed { "PASS" } else { "FAIL" }, v.title, v.detail);
    }
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    println!("acceptance: {}/{} criteria passed", verdicts.len() - failed, verdicts.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn quadratic_fixture(dim: usize, center_norm: f64, seed: u64) -> (Quadratic, DenseVector) {
    let c = DenseVector::random_unit(dim, &mut Seed(seed).rng()).scaled(center_norm);
    (quadratic_objective(c.clone(), 1.0).unwrap(), c)
}

fn start_in_ball(dim: usize, radius: f64, seed: u64) -> DenseVector {
    let mut rng = Seed(seed).rng();
    DenseVector::random_unit(dim, &mut rng).scaled(radius * rng.random::<f64>())
}

fn interior_bound(es_runs: &mut Vec<EsRun>) -> Verdict {
    let started = Instant::now();
    let (f, c) = quadratic_fixture(20, 0.4, 11);
    let ball = NormBall::l2(1.0).unwrap();
    let x0 = start_in_ball(20, 1.0, 12);
    let (l, d, f_star) = (2.0, 2.0, f.value(&c));
    let f0 = f.value(&x0) - f_star;
    let run = run_afw(&f, &ball, x0, &Schedule::AfwShifted, &StoppingRule::iterations(10_000), true).unwrap();
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for row in &run.trace.rows {
        let bound = bounds::afw_general(row.k, f0, l, d);
        let gap = row.f_value - f_star;
        if gap > bound * (1.0 + 1e-9) {
            violations += 1;
        }
        tightest = tightest.min((bound - gap) / bound);
    }
    let secs = started.elapsed().as_secs_f64();
    es_runs.push(EsRun { label: "interior".into(), trace: run.trace, f_star, smoothness: l, diameter: d });
    Verdict {
        id: 1,
        title: "AFW general-rate bound, interior optimum",
        passed: violations == 0 && secs < 10.0,
        detail: format!("{violations} violations over k <= 10^4, min relative margin {tightest:.3e}, {secs:.2}s"),
    }
}

fn active_exponents(es_runs: &mut Vec<EsRun>) -> Verdict {
    let started = Instant::now();
    let (f, c) = quadratic_fixture(20, 2.0, 21);
    let ball = NormBall::l2(1.0).unwrap();
    let f_star = f.value(&c.scaled(0.5));
    let stop = StoppingRule::iterations(10_000);
    let mut afw_slopes = Vec::new();
    let mut fw_slopes = Vec::new();
    for s in 0..5 {
        let x0 = start_in_ball(20, 1.0, 100 + s);
        let fw = run_fw(&f, &ball, x0.clone(), &Schedule::FwClassic, &stop).unwrap();
        let afw = run_afw(&f, &ball, x0, &Schedule::AfwShifted, &stop, true).unwrap();
        fw_slopes.push(estimate_rate(&fw.trace, f_star, (100, 10_000)).unwrap().slope);
        afw_slopes.push(estimate_rate(&afw.trace, f_star, (100, 10_000)).unwrap().slope);
        es_runs.push(EsRun { label: format!("active seed {s}"), trace: afw.trace, f_star, smoothness: 2.0, diameter: 2.0 });
    }
    let secs = started.elapsed().as_secs_f64();
    let afw_ok = afw_slopes.iter().all(|s| *s <= -1.6);
    let fw_ok = fw_slopes.iter().all(|s| (-1.3..=-0.7).contains(s));
    Verdict {
        id: 2,
        title: "acceleration exponent, active constraint",
        passed: afw_ok && fw_ok && secs < 30.0,
        detail: format!(
            "AFW slopes {} (need <= -1.6: {}), FW slopes {} (need in [-1.3, -0.7]: {}), {secs:.2}s",
            fmt_list(&afw_slopes),
            ok(afw_ok),
            fmt_list(&fw_slopes),
            ok(fw_ok)
        ),
    }
}

/// 10-d diagonal quadratic with spread curvature, minimized at `c`.
fn agm_fixture() -> (Quadratic, DenseVector, DenseVector) {
    let weights: Vec<f64> = (0..10).map(|i| 0.01 * 10f64.powf(i as f64 / 3.0)).collect();
    let mut rng = Seed(31).rng();
    let c = DenseVector::gaussian(10, &mut rng);
    let x0 = DenseVector::gaussian(10, &mut rng).scaled(3.0);
    (Quadratic::diagonal(weights, c.clone()).unwrap(), c, x0)
}

fn agm_constants() -> Verdict {
    let (f, x_star, x0) = agm_fixture();
    let l = f.smoothness();
    let potential = bounds::agm_potential(f.value(&x0), l, x0.dist_sq(&x_star));
    let run = run_agm_observed(&f, None, x0, &StoppingRule::iterations(10_000), Some(&x_star), |_| {}).unwrap();
    let grad_sq = run.trace.extra_column(AGM_GRAD_Y_SQ).unwrap();
    let dist = run.trace.extra_column(AGM_DIST_REF).unwrap();
    let (mut value_v, mut grad_v, mut mom_v) = (0, 0, 0);
    for (i, row) in run.trace.rows.iter().enumerate() {
        if row.f_value > bounds::agm_value(row.k, potential) {
            value_v += 1;
        }
        // the final row has no y_k
        if grad_sq[i].is_finite() && grad_sq[i] > bounds::agm_gradient(row.k, l, potential) {
            grad_v += 1;
        }
        if dist[i].powi(2) > bounds::agm_momentum_radius(l, potential) {
            mom_v += 1;
        }
    }
    Verdict {
        id: 3,
        title: "AGM value, gradient and momentum-radius bounds",
        passed: value_v + grad_v + mom_v == 0,
        detail: format!(
            "violations: value {value_v}, gradient {grad_v}, momentum {mom_v} over k <= 10^4 (value envelope 4C/(k+2)^2)"
        ),
    }
}

fn weighted_dual_gap() -> Verdict {
    let (f, x_star, x0) = agm_fixture();
    let l = f.smoothness();
    let dist0 = x0.dist_sq(&x_star);
    let run = run_agm_observed(&f, None, x0, &StoppingRule::iterations(1_000), None, |_| {}).unwrap();
    let terms = run.trace.extra_column(AGM_LOWER_MODEL).unwrap();
    let mut ok_all = true;
    let mut parts = Vec::new();
    for k in [10, 100, 1000] {
        let gap = weighted_dual_gap_from_terms(&terms, k).unwrap();
        let bound = bounds::weighted_dual_gap(k, l, dist0);
        let ok = gap <= bound;
        ok_all &= ok;
        parts.push(format!("k={k}: {gap:.3e} <= {bound:.3e}"));
    }
    let worst_sum = (1..=100_000usize)
        .step_by(997)
        .chain([1, 10, 100, 1000, 100_000])
        .map(|k| (dual_gap_weights(k).iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    Verdict {
        id: 4,
        title: "AGM weighted dual gap",
        passed: ok_all && worst_sum <= 1e-12,
        detail: format!("{}; weights sum to 1 within {worst_sum:.1e}", parts.join(", ")),
    }
}

fn es_sandwich(runs: &[EsRun]) -> Verdict {
    let mut violations = Vec::new();
    let mut rows = 0;
    for r in runs {
        let f0 = r.trace.rows[0].f_value;
        let mut bad = 0;
        for row in &r.trace.rows {
            let es = row.es.expect("diagnostics on");
            let slack = 1e-12 * row.f_value.abs().max(1.0);
            let lower = row.f_value <= es.phi_star + es.xi + slack;
            let upper = row.f_value - r.f_star <= es.lambda * (f0 - r.f_star) + es.xi + slack;
            let envelope = es.xi <= bounds::xi_envelope(row.k, r.smoothness, r.diameter);
            if !(lower && upper && envelope) {
                bad += 1;
            }
        }
        rows += r.trace.rows.len();
        if bad > 0 {
            violations.push(format!("{}: {bad}", r.label));
        }
    }
    Verdict {
        id: 5,
        title: "estimate-sequence sandwich on every AFW run",
        passed: violations.is_empty(),
        detail: format!(
            "{} runs, {rows} rows, violations: {}",
            runs.len(),
            if violations.is_empty() { "none".to_string() } else { violations.join(", ") }
        ),
    }
}

fn lmo_equivalence() -> Verdict {
    let mut rng = Seed(61).rng();
    // ℓ1: exhaustive vertex enumeration, d ≤ 12
    let mut l1_bad = 0;
    for t in 0..1000 {
        let d = 1 + t % 12;
        let theta = DenseVector::gaussian(d, &mut rng);
        let v = lmo_l1(&theta, 1.3).unwrap();
        let best = (0..d)
            .flat_map(|i| [1.3, -1.3].map(|s| DenseVector::basis(d, i, s)))
            .map(|x| theta.dot(&x))
            .fold(f64::INFINITY, f64::min);
        if theta.dot(&v) != best {
            l1_bad += 1;
        }
    }
    // ℓ2 and ℓp: 100 directions × 100 sampled feasible points each
    let (mut l2_excess, mut lp_excess, mut p2_dev) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0_f64);
    for _ in 0..100 {
        let theta = DenseVector::gaussian(9, &mut rng);
        let v2 = lmo_l2(&theta, 2.0).unwrap();
        let p = 1.05 + 5.0 * rng.random::<f64>();
        let vp = lmo_lp(&theta, 2.0, p).unwrap();
        for _ in 0..100 {
            let x = DenseVector::random_unit(9, &mut rng).scaled(2.0 * rng.random::<f64>().powf(1.0 / 9.0));
            l2_excess = l2_excess.max(theta.dot(&v2) - theta.dot(&x));
            let u = DenseVector::gaussian(9, &mut rng);
            let x = u.scaled(2.0 * rng.random::<f64>().sqrt() / u.norm_lp(p));
            lp_excess = lp_excess.max(theta.dot(&vp) - theta.dot(&x));
        }
        p2_dev = p2_dev.max(lmo_lp(&theta, 2.0, 2.0).unwrap().sub(&v2).norm_inf());
    }
    // nuclear: 10 directions × 50 full-rank feasible points, plus the SVD value
    let (m, n, radius) = (8, 6, 1.5);
    let (mut nuc_excess, mut nuc_svd) = (f64::NEG_INFINITY, 0.0_f64);
    for _ in 0..10 {
        let g: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>() - 0.5).collect();
        let vtx = lmo_nuclear(&SparseMatrix::from_dense(m, n, &g).unwrap(), radius, 1e-12, Seed(62)).unwrap();
        let v_val: f64 = (0..m * n).map(|idx| g[idx] * vtx.scale * vtx.left[idx / n] * vtx.right[idx % n]).sum();
        let sigma_max = DMatrix::from_row_slice(m, n, &g).singular_values().max();
        nuc_svd = nuc_svd.max((v_val + radius * sigma_max).abs());
        for _ in 0..50 {
            let x: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>() - 0.5).collect();
            let nuc = DMatrix::from_row_slice(m, n, &x).singular_values().sum();
            let scale = radius * rng.random::<f64>() / nuc;
            let x_val: f64 = g.iter().zip(&x).map(|(a, b)| a * b * scale).sum();
            nuc_excess = nuc_excess.max(v_val - x_val);
        }
    }
    let passed = l1_bad == 0
        && l2_excess <= 1e-9
        && lp_excess <= 1e-9
        && nuc_excess <= 1e-6
        && nuc_svd <= 1e-6
        && p2_dev <= 1e-12;
    Verdict {
        id: 6,
        title: "LMO oracle equivalence",
        passed,
        detail: format!(
            "l1 mismatches {l1_bad}/1000; worst excess l2 {l2_excess:.2e}, lp {lp_excess:.2e}, nuclear {nuc_excess:.2e}; \
             nuclear vs SVD {nuc_svd:.1e}; lp(p=2) vs l2 {p2_dev:.1e}"
        ),
    }
}

fn matrix_completion(es_runs: &mut Vec<EsRun>) -> Verdict {
    let started = Instant::now();
    let iters = 300;
    let points = [1usize, 2, 5, 10, 20, 50, 100, 200];
    let mut rank_violations = 0;
    let mut afw_wins = 0;
    let mut counts = Vec::new();
    for s in 0..5u64 {
        let inst = synthetic_low_rank(50, 40, 3, 0.3, Seed(700 + s)).unwrap();
        let obj = matcomp_objective(MatCompProblem::new(inst.observed.clone()).unwrap());
        let radius = inst.nuclear_norm;
        let ball = || NuclearBall::new(radius, 50, 40, Seed(800 + s)).unwrap();
        let x0 = ball().aligned_vertex(obj.mask()).unwrap();
        let stop = StoppingRule::iterations(iters);

        let mut check_rank = |k: usize, x: &FactoredMatrix| {
            if points.contains(&k) {
                let mut x = x.clone();
                x.consolidate(1e-12);
                if x.numerical_rank(1e-9) > k + 1 || x.atom_count() > k + 1 {
                    rank_violations += 1;
                }
            }
        };
        let fw = run_fw_observed(&obj, &ball(), x0.clone(), &Schedule::FwClassic, &stop, |st| {
            check_rank(st.k + 1, st.x_next)
        })
        .unwrap();
        let afw = run_afw_observed(&obj, &ball(), x0, &Schedule::AfwShifted, &stop, true, |st| {
            check_rank(st.k + 1, st.x_next)
        })
        .unwrap();
        // noiseless truth inside the ball: f* = 0
        let fw_k = fw.trace.iterations_to(0.0, 1e-2);
        let afw_k = afw.trace.iterations_to(0.0, 1e-2);
        if let (Some(a), Some(f)) = (afw_k, fw_k) {
            if a <= f {
                afw_wins += 1;
            }
        } else if afw_k.is_some() {
            afw_wins += 1;
        }
        counts.push(format!("{}/{}", opt(afw_k), opt(fw_k)));
        es_runs.push(EsRun {
            label: format!("matcomp seed {s}"),
            trace: afw.trace,
            f_star: 0.0,
            smoothness: MatrixCompletion::smoothness(&obj),
            diameter: 2.0 * radius,
        });
    }
    let secs = started.elapsed().as_secs_f64();
    Verdict {
        id: 7,
        title: "matrix completion rank bound and AFW vs FW",
        passed: rank_violations == 0 && afw_wins >= 4 && secs < 60.0,
        detail: format!(
            "rank violations {rank_violations}; iterations to f <= 1e-2 (afw/fw) {}; AFW <= FW on {afw_wins}/5; {secs:.2}s",
            counts.join(" ")
        ),
    }
}

type Q = Ratio<i128>;

fn hand_traces() -> Verdict {
    let f = quadratic_objective(DenseVector::new(vec![0.0]).unwrap(), 1.0).unwrap();
    let ball = NormBall::l2(1.0).unwrap();
    let one = || DenseVector::new(vec![1.0]).unwrap();
    let mut worst = 0.0_f64;

    // FW on x² over [−1, 1] in exact arithmetic: v = −sign(x), δ = 2/(k+2)
    let mut expected = vec![Q::from_integer(1)];
    for k in 0..12i128 {
        let x = *expected.last().unwrap();
        let v = if x > Q::from_integer(0) { Q::from_integer(-1) } else { Q::from_integer(1) };
        let delta = Q::new(2, k + 2);
        expected.push((Q::from_integer(1) - delta) * x + delta * v);
    }
    let mut xs = vec![1.0];
    run_fw_observed(&f, &ball, one(), &Schedule::FwClassic, &StoppingRule::iterations(12), |st| {
        xs.push(st.x_next[0])
    })
    .unwrap();
    for (got, want) in xs.iter().zip(&expected) {
        worst = worst.max((got - to_f64(*want)).abs());
    }
    let fw_prefix = xs.len() == expected.len() && expected[1] == Q::from_integer(-1) && expected[2] == Q::new(1, 3);

    let mut afw = [f64::NAN; 4];
    run_afw_observed(&f, &ball, one(), &Schedule::AfwShifted, &StoppingRule::iterations(1), false, |st| {
        afw = [st.y[0], st.theta_next[0], st.v_next[0], st.x_next[0]];
    })
    .unwrap();
    for (got, want) in afw.iter().zip([1.0, 4.0 / 3.0, -1.0, -1.0 / 3.0]) {
        worst = worst.max((got - want).abs());
    }

    let mut agm = [f64::NAN; 3];
    run_agm_observed(&f, None, one(), &StoppingRule::iterations(1), None, |st| {
        agm = [st.x_next[0], st.v_next[0], st.mu_next];
    })
    .unwrap();
    for (got, want) in agm.iter().zip([0.0, 0.0, 4.0 / 3.0]) {
        worst = worst.max((got - want).abs());
    }
    Verdict {
        id: 8,
        title: "hand-trace replays",
        passed: fw_prefix && worst <= 1e-15,
        detail: format!(
            "FW 13 iterates vs exact rationals, AFW (y0, theta1, v1, x1) = {afw:?}, AGM (x1, v1, mu1) = {agm:?}; \
             max deviation {worst:.1e}"
        ),
    }
}

fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn identities() -> Verdict {
    // θ_{k+1} as a weighted average of ∇f(y_τ), checked at k = 100
    let (f, _) = quadratic_fixture(20, 2.0, 91);
    let ball = NormBall::l2(1.0).unwrap();
    let mut grads = Vec::new();
    let mut theta_dev = f64::NAN;
    let run = run_afw_observed(
        &f,
        &ball,
        start_in_ball(20, 1.0, 92),
        &Schedule::AfwShifted,
        &StoppingRule::iterations(150),
        true,
        |st| {
            grads.push(st.grad_y.clone());
            if st.k == 100 {
                let avg = grads
                    .iter()
                    .zip(bounds::theta_weights(100))
                    .fold(DenseVector::zeros(20), |acc, (g, w)| acc.add_scaled(w, g));
                theta_dev = avg.sub(st.theta_next).norm();
            }
        },
    )
    .unwrap();
    let lambda_dev = run
        .trace
        .rows
        .iter()
        .map(|r| (r.es.unwrap().lambda - 2.0 / ((r.k as f64 + 1.0) * (r.k as f64 + 2.0))).abs())
        .fold(0.0, f64::max);

    let mut rng = Seed(93).rng();
    let mut momentum = 0.0_f64;
    for _ in 0..1000 {
        let v = DenseVector::gaussian(10, &mut rng);
        let g = DenseVector::gaussian(10, &mut rng);
        let delta = 0.01 + 0.98 * rng.random::<f64>();
        let mu = 0.01 + 10.0 * rng.random::<f64>();
        momentum = momentum.max(agm_momentum_equivalence(&v, &g, delta, mu).1);
    }

    let (fq, _, x0) = agm_fixture();
    let mut decomposition = 0.0_f64;
    run_agm_sc_observed(&fq, x0, &StoppingRule::iterations(500), |st| {
        let rhs = st.v.scaled(1.0 - st.delta).add_scaled(st.delta, st.z_next);
        decomposition = decomposition.max(rhs.sub(st.v_next).norm() / st.v_next.norm().max(1e-300));
    })
    .unwrap();

    Verdict {
        id: 9,
        title: "identity invariants",
        passed: theta_dev <= 1e-10 && lambda_dev <= 1e-14 && momentum < 1e-12 && decomposition <= 1e-14,
        detail: format!(
            "theta average {theta_dev:.1e}, lambda {lambda_dev:.1e}, momentum residual {momentum:.1e}, \
             strongly convex momentum decomposition (relative) {decomposition:.1e}"
        ),
    }
}

fn gradient_suites() -> Verdict {
    let mut rng = Seed(101).rng();
    let quad = quadratic_objective(DenseVector::gaussian(12, &mut rng), 0.7).unwrap();
    let (fq, _, _) = agm_fixture();

    let (rows, cols) = (40, 12);
    let mut triplets = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.random::<f64>() < 0.4 {
                triplets.push((r, c, rng.random::<f64>() * 2.0 - 1.0));
            }
        }
    }
    let labels: Vec<f64> = (0..rows).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let logistic =
        logistic_objective(LogisticProblem::new(SparseMatrix::from_triplets(rows, cols, triplets).unwrap(), labels).unwrap())
            .unwrap();

    let inst = synthetic_low_rank(9, 7, 2, 0.5, Seed(102)).unwrap();
    let mc = matcomp_objective(MatCompProblem::new(inst.observed).unwrap());

    let mut report = Vec::new();
    let mut passed = true;
    for (name, fd, coco) in [
        suite("quadratic", &quad, 12, &mut rng),
        suite("diag_quadratic", &fq, 10, &mut rng),
        suite("logistic", &logistic, cols, &mut rng),
        matcomp_suite(&mc, &mut rng),
    ] {
        passed &= fd <= 1e-5 && coco <= 1e-9;
        report.push(format!("{name} fd {fd:.1e} coco {coco:.1e}"));
    }
    Verdict {
        id: 10,
        title: "finite-difference gradients and co-coercivity",
        passed,
        detail: format!("100 pairs each: {}", report.join(", ")),
    }
}

fn suite<O: Objective<Point = DenseVector, Grad = DenseVector>>(
    name: &'static str,
    f: &O,
    dim: usize,
    rng: &mut impl Rng,
) -> (&'static str, f64, f64) {
    let l = f.smoothness();
    let (mut fd, mut coco) = (0.0_f64, f64::NEG_INFINITY);
    for _ in 0..100 {
        let x = DenseVector::gaussian(dim, rng);
        let y = DenseVector::gaussian(dim, rng);
        let g = f.gradient(&x);
        let num: Vec<f64> = (0..dim)
            .map(|i| {
                let e = DenseVector::basis(dim, i, 1e-6);
                (f.value(&x.add_scaled(1.0, &e)) - f.value(&x.add_scaled(-1.0, &e))) / 2e-6
            })
            .collect();
        let err = num.iter().zip(g.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        fd = fd.max(err / g.norm().max(1e-12));
        let gy = f.gradient(&y);
        let lhs = gy.sub(&g).norm_sq() / (2.0 * l);
        let rhs = f.value(&y) - f.value(&x) - g.dot(&y.sub(&x));
        coco = coco.max(lhs - rhs);
    }
    (name, fd, coco)
}

fn matcomp_suite(f: &momentum_fw::objectives::MatrixCompletion, rng: &mut impl Rng) -> (&'static str, f64, f64) {
    let (m, n) = f.shape();
    let size = m * n;
    let (mut fd, mut coco) = (0.0_f64, f64::NEG_INFINITY);
    for _ in 0..100 {
        let x: Vec<f64> = (0..size).map(|_| rng.random::<f64>() - 0.5).collect();
        let y: Vec<f64> = (0..size).map(|_| rng.random::<f64>() - 0.5).collect();
        let g = f.gradient_flat(&x).unwrap();
        let mut err = 0.0;
        for i in 0..size {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[i] += 1e-6;
            xm[i] -= 1e-6;
            let num = (f.value_flat(&xp).unwrap() - f.value_flat(&xm).unwrap()) / 2e-6;
            err += (num - g[i]).powi(2);
        }
        let g_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        fd = fd.max(err.sqrt() / g_norm.max(1e-12));
        let gy = f.gradient_flat(&y).unwrap();
        let lhs: f64 = gy.iter().zip(&g).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / (2.0 * f.smoothness());
        let lin: f64 = g.iter().zip(y.iter().zip(&x)).map(|(gi, (yi, xi))| gi * (yi - xi)).sum();
        let rhs = f.value_flat(&y).unwrap() - f.value_flat(&x).unwrap() - lin;
        coco = coco.max(lhs - rhs);
    }
    ("matcomp", fd, coco)
}

fn fmt_list(xs: &[f64]) -> String {
    format!("[{}]", xs.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", "))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "no"
    }
}

fn opt(k: Option<usize>) -> String {
    k.map_or("-".to_string(), |k| k.to_string())
}
