//! Acceptance criteria, one line each. Runs as a plain binary so the
//! PASS/FAIL lines always reach the terminal.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use frab::operators::OperatorSpec;
use frab::{
    baseline_solve, check_sum_rule, estimate_moduli, feasible_theta2_interval, frab_solve, frab_step_with_lambda,
    frb_step, make_problem, project_solution, resolve_shifted, soft_threshold, validate_params,
    verify_norm_identities, BaselineMethod, BaselineParams, ForwardOperator, FrabParams, InitialPoints, IterState,
    LambdaSchedule, Matrix, ProblemSpec, ResolventOperator, StoppingRule, Vector,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn v(c: &[f64]) -> Vector<f64> {
    Vector::from_f64(c).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vector<f64> {
    Vector::new((0..n).map(|_| rng.gen_range(-r..=r)).collect()).unwrap()
}

// 1. anchored projection onto a box
fn anchored_projection() -> Outcome {
    let started = Instant::now();
    let f = ResolventOperator::normal_cone_box(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
    let g = ForwardOperator::zero(2);
    let mut worst = 0.0f64;
    for (anchor, target) in [([5.0, 5.0], [1.0, 1.0]), ([0.3, -0.2], [0.3, -0.2])] {
        // every iterate lies in the box, where the residual is 0 for G = 0,
        // so the run uses the full budget instead of the tolerance
        let params = FrabParams::defaults(0.0, v(&anchor))
            .with_schedule(LambdaSchedule::Harmonic)
            .with_stopping(StoppingRule::fixed_iterations(100_000));
        let t = frab_solve(&f, &g, &params, &InitialPoints::constant(Vector::zeros(2))).map_err(|e| e.to_string())?;
        ensure!(t.iterations <= 100_000, "{} iterations", t.iterations);
        let d = t.final_point.distance(&v(&target));
        ensure!(d <= 1e-3, "w* = {anchor:?}: final {:?} is {d:e} from {target:?}", t.final_point);
        worst = worst.max(d);
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("max distance {worst:.1e}, {elapsed:.2?}"))
}

// 2. skew problem, plus boundedness of the iterates
fn rotation_convergence() -> Outcome {
    let p = make_problem(&ProblemSpec::ViRotation { center: None }, 0).unwrap();
    let anchor = v(&[1.0, 1.0]);
    let start = v(&[1.0, -1.0]);
    let params = FrabParams::defaults(p.lipschitz(), anchor.clone())
        .with_gamma(0.2)
        .with_default_inertia(p.lipschitz())
        .with_stopping(StoppingRule::new(1e-8, 100_000));
    let t = frab_solve(p.f(), p.g(), &params, &InitialPoints::constant(start.clone())).map_err(|e| e.to_string())?;
    let d = t.final_point.norm();
    ensure!(d <= 1e-3, "final {:?} is {d:e} from the origin", t.final_point);
    let max_norm = t.iterate_norms.iter().copied().fold(start.norm(), f64::max);
    let bound = 10.0 * (start.norm() + anchor.norm() + 1.0);
    ensure!(max_norm <= bound, "max |u_k| = {max_norm} exceeds {bound}");
    Ok(format!("|final| = {d:.1e} after {} iterations, max |u_k| = {max_norm:.3} <= {bound:.3}", t.iterations))
}

// 3. non-monotone F
fn weakly_monotone_convergence() -> Outcome {
    let p = make_problem(&ProblemSpec::WeakPair { mu_f: -0.5, mu_g: 1.0, dim: 1 }, 0).unwrap();
    let params = FrabParams::defaults(p.lipschitz(), v(&[2.0])).with_gamma(0.4).with_default_inertia(p.lipschitz());
    let ok = validate_params(params.gamma, params.theta1, params.theta2, p.lipschitz(), p.mu_f(), p.mu_g());
    ensure!(ok.is_ok(), "γ = 0.4 rejected: {:?}", ok.violations);
    let t = frab_solve(p.f(), p.g(), &params, &InitialPoints::constant(v(&[1.5]))).map_err(|e| e.to_string())?;
    let d = t.final_point.norm();
    ensure!(d <= 1e-3, "final {:?}", t.final_point);
    let bad = validate_params(2.5, params.theta1, params.theta2, p.lipschitz(), p.mu_f(), p.mu_g());
    ensure!(bad.conditions().contains(&"resolvent_region"), "γ = 2.5 verdict {:?}", bad.conditions());
    Ok(format!("|final| = {d:.1e}; γ = 2.5 rejected by {:?}", bad.conditions()))
}

// 4. λ = 0, θ = 0 reduces to the reflected step
fn reduction_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for dim in [1usize, 2, 10] {
        let rows: Vec<Vec<f64>> = (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let g = ForwardOperator::linear(Matrix::from_rows(rows).unwrap()).unwrap();
        let fs = [
            ResolventOperator::normal_cone_box(vec![-1.0; dim], vec![1.0; dim]).unwrap(),
            ResolventOperator::subdiff_l1(dim, 0.3).unwrap(),
            ResolventOperator::zero(dim),
        ];
        let gamma = 0.9 / (2.0 * g.lipschitz());
        for i in 0..100 {
            let f = &fs[i % fs.len()];
            let pts: Vec<Vector<f64>> = (0..3).map(|_| random_vec(&mut rng, dim, 5.0)).collect();
            let init = InitialPoints::new(pts[0].clone(), pts[1].clone(), pts[2].clone());
            let state = IterState::new(&g, &init).unwrap();
            let params =
                FrabParams::defaults(g.lipschitz(), random_vec(&mut rng, dim, 5.0)).with_gamma(gamma).with_inertia(0.0, 0.0);
            let a = frab_step_with_lambda(f, &g, &params, 0.0, state.clone()).map_err(|e| e.to_string())?;
            let b = frb_step(f, &g, gamma, state).map_err(|e| e.to_string())?;
            for (x, y) in a.u_k.iter().zip(b.u_k.iter()) {
                worst = worst.max((x - y).abs());
            }
            ensure!(worst <= 1e-15, "dim {dim}, case {i}: difference {worst:e}");
            cases += 1;
        }
    }
    Ok(format!("{cases} states, max componentwise difference {worst:e}"))
}

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn q_norm_sq(x: &[BigRational]) -> BigRational {
    x.iter().fold(BigRational::zero(), |acc, c| acc + c * c)
}

fn q_lin(a: &BigRational, x: &[BigRational], b: &BigRational, y: &[BigRational]) -> Vec<BigRational> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + b * yi).collect()
}

// 5. norm identities against exact rational arithmetic
fn norm_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = BigRational::from_integer(BigInt::from(1));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let dim = rng.gen_range(1..=5);
        let (x, y, z) = (random_vec(&mut rng, dim, 10.0), random_vec(&mut rng, dim, 10.0), random_vec(&mut rng, dim, 10.0));
        let (a, b, beta) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0), rng.gen_range(0.0..=1.0));
        let r = verify_norm_identities(&x, &y, &z, a, b, beta).map_err(|e| e.to_string())?;
        ensure!(r.within(1e-10), "trial {trial}: relative residual {:e}", r.max_relative());
        worst = worst.max(r.max_relative());

        // exact evaluation of both sides of each identity
        let (qx, qy, qz): (Vec<_>, Vec<_>, Vec<_>) =
            (x.iter().map(|&c| q(c)).collect(), y.iter().map(|&c| q(c)).collect(), z.iter().map(|&c| q(c)).collect());
        let (qa, qb, qbeta) = (q(a), q(b), q(beta));
        let neg = -&one;
        let xy = q_norm_sq(&q_lin(&one, &qx, &neg, &qy));
        let xz = q_norm_sq(&q_lin(&one, &qx, &neg, &qz));
        let yz = q_norm_sq(&q_lin(&one, &qy, &neg, &qz));
        let combo = q_lin(&(&one + &qa), &qx, &-(&qa - &qb), &qy);
        let combo = q_lin(&one, &combo, &-qb.clone(), &qz);
        let lhs_a = q_norm_sq(&combo);
        let rhs_a = (&one + &qa) * q_norm_sq(&qx) - (&qa - &qb) * q_norm_sq(&qy) - &qb * q_norm_sq(&qz)
            + (&one + &qa) * (&qa - &qb) * &xy
            + &qb * (&one + &qa) * &xz
            - &qb * (&qa - &qb) * &yz;
        ensure!(lhs_a == rhs_a, "trial {trial}: identity (a) fails exactly");
        let xmz = q_lin(&one, &qx, &neg, &qz);
        let ymx = q_lin(&one, &qy, &neg, &qx);
        let lhs_b = xmz.iter().zip(&ymx).fold(BigRational::zero(), |acc, (p, s)| acc + p * s);
        let rhs_b = &half * &yz - &half * &xz - &half * &xy;
        ensure!(lhs_b == rhs_b, "trial {trial}: identity (b) fails exactly");
        let lhs_c = q_norm_sq(&q_lin(&qbeta, &qx, &(&one - &qbeta), &qy));
        let rhs_c = &qbeta * q_norm_sq(&qx) + (&one - &qbeta) * q_norm_sq(&qy) - &qbeta * (&one - &qbeta) * &xy;
        ensure!(lhs_c == rhs_c, "trial {trial}: identity (c) fails exactly");

        // the float sides track the exact values
        for (exact, scale) in [(&lhs_a, r.scale_a), (&lhs_b, r.scale_b), (&lhs_c, r.scale_c)] {
            let e = exact.abs().to_f64().unwrap();
            ensure!((e - scale).abs() <= 1e-10 * (1.0 + e), "trial {trial}: float side {scale} vs exact {e}");
        }
    }
    Ok(format!("1000 triples, max relative residual {worst:.1e}; exact sides agree"))
}

/// Minimizes a convex `phi` on a 1e-6 grid: a coarse 1e-2 pass over
/// `[x - r, x + r]`, `r = max(2, 2|x|)`, then the fine grid around the best
/// coarse node.
fn grid_argmin(x: f64, phi: impl Fn(f64) -> f64) -> f64 {
    let scan = |lo: f64, hi: f64, step: f64| {
        let n = ((hi - lo) / step).round() as i64;
        (0..=n).map(|i| lo + i as f64 * step).fold((f64::INFINITY, lo), |(best, arg), u| {
            let val = phi(u);
            if val < best {
                (val, u)
            } else {
                (best, arg)
            }
        })
    };
    let r = 2f64.max(2.0 * x.abs());
    let (_, coarse) = scan(x - r, x + r, 1e-2);
    scan(coarse - 2e-2, coarse + 2e-2, 1e-6).1
}

/// Root of the monotone inclusion `x ∈ c u + t sgn(u)` by bisection.
fn bisect_shifted_abs(x: f64, c: f64, t: f64) -> f64 {
    let h = |u: f64| c * u + t * u.signum() * (u != 0.0) as i32 as f64 - x;
    if (x.abs()) <= t {
        return 0.0;
    }
    let (mut lo, mut hi) = if x > 0.0 { (0.0, x / c + 1.0) } else { (x / c - 1.0, 0.0) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

// 6. prox and shifted resolvent against independent solvers
fn resolvent_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_prox = 0.0f64;
    for _ in 0..50 {
        let x = rng.gen_range(-5.0..5.0);
        let (gamma, tau) = (rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0));
        let l1 = ResolventOperator::subdiff_l1(1, tau).unwrap();
        let got = l1.resolve(gamma, &v(&[x])).unwrap()[0];
        ensure!(got == soft_threshold(&v(&[x]), gamma * tau)[0], "resolve and soft_threshold disagree at {x}");
        let oracle = grid_argmin(x, |u| gamma * tau * u.abs() + 0.5 * (u - x).powi(2));
        worst_prox = worst_prox.max((got - oracle).abs());
        ensure!(worst_prox <= 2e-6, "prox at x = {x}: {got} vs grid {oracle}");
    }
    let mut worst_shift = 0.0f64;
    for i in 0..50 {
        let gamma = rng.gen_range(0.1..2.0);
        // 1 + γ mu > 0
        let mu = rng.gen_range((-1.0 / gamma + 0.05)..2.0);
        if i % 2 == 0 {
            let tau = rng.gen_range(0.1..2.0);
            let x = rng.gen_range(-5.0..5.0);
            let got = resolve_shifted(&ResolventOperator::subdiff_l1(1, tau).unwrap(), mu, gamma, &v(&[x])).unwrap()[0];
            let direct = bisect_shifted_abs(x, 1.0 + gamma * mu, gamma * tau);
            worst_shift = worst_shift.max((got - direct).abs());
        } else {
            // F' u = A u with A = S + K, S positive semidefinite diagonal, K skew
            let (s1, s2, k) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(-2.0..2.0));
            let a = Matrix::from_f64_rows(&[&[s1, k], &[-k, s2]]).unwrap();
            let x = random_vec(&mut rng, 2, 5.0);
            let got = resolve_shifted(&ResolventOperator::linear(a).unwrap(), mu, gamma, &x).unwrap();
            // x = ((1 + γ mu) I + γ A) u, solved by Cramer's rule
            let c = 1.0 + gamma * mu;
            let (p, qq, r, s) = (c + gamma * s1, gamma * k, -gamma * k, c + gamma * s2);
            let det = p * s - qq * r;
            let direct = [(s * x[0] - qq * x[1]) / det, (p * x[1] - r * x[0]) / det];
            worst_shift = worst_shift.max((got[0] - direct[0]).abs()).max((got[1] - direct[1]).abs());
        }
        ensure!(worst_shift <= 1e-8, "shift formula case {i}: difference {worst_shift:e}");
    }
    Ok(format!("prox max error {worst_prox:.1e}, shift max error {worst_shift:.1e}"))
}

// 7. feasibility truth table
fn parameter_truth_table() -> Outcome {
    type Case = (&'static str, [f64; 6], &'static [&'static str]);
    let edge = (3.0 * 0.0 - 1.0 + 2.0 * 0.25 * 1.0) / (3.0 + 4.0 * 0.0);
    let cases: [Case; 12] = [
        ("feasible example", [0.2, 0.1, -0.05, 1.0, 0.0, 0.0], &[]),
        ("γ = 1/(2L)", [0.5, 0.0, 0.0, 1.0, 0.0, 0.0], &["step_size", "theta1_range", "theta2_range"]),
        ("γ <= 0", [-0.1, 0.1, -0.05, 1.0, 0.0, 0.0], &["step_size"]),
        ("θ1 at its supremum", [0.2, 0.2, -0.05, 1.0, 0.0, 0.0], &["theta1_range", "theta2_range"]),
        ("θ1 < 0", [0.2, -0.01, -0.05, 1.0, 0.0, 0.0], &["theta1_range"]),
        ("θ2 at its lower bound", [0.25, 0.0, edge, 1.0, 0.0, 0.0], &["theta2_range"]),
        ("θ2 > 0", [0.2, 0.1, 0.01, 1.0, 0.0, 0.0], &["theta2_range"]),
        ("θ2 = 0", [0.2, 0.1, 0.0, 1.0, 0.0, 0.0], &[]),
        ("weak pair, γ = 0.4", [0.4, 0.0, -0.05, 1.0, -0.5, 1.0], &[]),
        ("1 + γμ_F = 0", [0.2, 0.1, -0.05, 1.0, -5.0, 5.0], &["resolvent_region"]),
        ("μ_F + μ_G < 0", [0.2, 0.1, -0.05, 1.0, -0.5, 0.4], &["modulus_sum"]),
        ("L = 0, large γ", [10.0, 0.1, -0.05, 0.0, 0.0, 0.0], &[]),
    ];
    for (name, [g, t1, t2, l, mf, mg], expected) in cases {
        let got = validate_params(g, t1, t2, l, mf, mg);
        ensure!(got.conditions() == expected, "{name}: got {:?}, expected {expected:?}", got.conditions());
    }
    let (lo, hi) = feasible_theta2_interval(0.1, 0.2, 1.0).map_err(|e| e.to_string())?;
    ensure!((lo - (-0.3 / 3.4)).abs() <= 1e-12 && hi == 0.0, "interval ({lo}, {hi}]");
    Ok(format!("12 verdicts match; θ2 lower bound {lo:.10}"))
}

// 8. modulus estimator on linear maps and the sum rule
fn modulus_estimator() -> Outcome {
    let maps: [(ForwardOperator<f64>, f64, f64); 3] = [
        (ForwardOperator::scaled_identity(3, 2.0), 2.0, 2.0),
        (ForwardOperator::rotation(2).unwrap(), 0.0, 1.0),
        (ForwardOperator::scaled_identity(3, -0.5), -0.5, 0.5),
    ];
    for (g, mu, l) in &maps {
        let e = estimate_moduli(g, 10_000, 10.0, 8).map_err(|e| e.to_string())?;
        ensure!((e.mu_hat - mu).abs() <= 1e-12 && (e.l_hat - l).abs() <= 1e-12, "{}: {e:?}", g.label());
    }
    let m = |r: &[&[f64]]| Matrix::from_f64_rows(r).unwrap();
    let pairs: [(OperatorSpec<f64>, OperatorSpec<f64>); 5] = [
        (OperatorSpec::ScaledIdentity { dim: 2, scale: -0.5 }, OperatorSpec::ScaledIdentity { dim: 2, scale: 1.0 }),
        (OperatorSpec::Linear { matrix: m(&[&[1.0, 0.5], &[-0.5, 0.0]]) }, OperatorSpec::Rotation { dim: 2 }),
        (
            OperatorSpec::Shifted {
                inner: Box::new(OperatorSpec::Linear { matrix: m(&[&[1.0, 0.0], &[0.0, 2.0]]) }),
                modulus: -0.5,
            },
            OperatorSpec::ScaledIdentity { dim: 2, scale: -0.3 },
        ),
        (
            OperatorSpec::Affine { matrix: m(&[&[2.0, 0.0], &[0.0, 1.0]]), offset: v(&[1.0, -1.0]) },
            OperatorSpec::Affine { matrix: m(&[&[1.0, 2.0], &[-2.0, 1.0]]), offset: v(&[0.0, 3.0]) },
        ),
        (OperatorSpec::ScaledIdentity { dim: 2, scale: 0.7 }, OperatorSpec::Linear { matrix: m(&[&[0.0, 3.0], &[-3.0, -0.5]]) }),
    ];
    let mut margin = f64::INFINITY;
    for (fs, gs) in &pairs {
        let (f, g) = (fs.build_resolvent().unwrap(), gs.build_forward().unwrap());
        let c = check_sum_rule(&f, &g, 10_000, 10.0, 9).map_err(|e| e.to_string())?;
        ensure!(c.holds, "{} + {}: mu_hat {} < declared {}", f.label(), g.label(), c.mu_hat, c.declared);
        margin = margin.min(c.mu_hat - c.declared);
    }
    Ok(format!("3 linear maps exact; 5 sum-rule pairs hold (min margin {margin:.1e})"))
}

// 9. classical schemes on an affine VI
fn baseline_sanity() -> Outcome {
    let spec = ProblemSpec::ViAffine {
        matrix: Matrix::from_f64_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap(),
        offset: v(&[-1.0, -4.0]),
        set: None,
    };
    let p = make_problem(&spec, 0).unwrap();
    let solution = project_solution(&p, &Vector::zeros(2)).unwrap();
    let mut report = Vec::new();
    for method in [BaselineMethod::ForwardBackward, BaselineMethod::Tseng, BaselineMethod::Frb] {
        let params = BaselineParams::defaults(p.lipschitz(), Vector::zeros(2)).with_stopping(StoppingRule::new(1e-6, 100_000));
        let t = baseline_solve(method, p.f(), p.g(), &params, &InitialPoints::constant(Vector::zeros(2)))
            .map_err(|e| e.to_string())?;
        let r = t.last_residual().unwrap();
        let d = t.final_point.distance(&solution);
        ensure!(r <= 1e-6 && t.iterations <= 100_000, "{}: residual {r:e} after {}", method.name(), t.iterations);
        ensure!(d <= 1e-4, "{}: final {:?}", method.name(), t.final_point);
        report.push(format!("{} {}", method.name(), t.iterations));
    }
    Ok(format!("iterations: {}", report.join(", ")))
}

fn run_cli(dir: &Path, args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_frab"))
        .args(args)
        .arg("--quiet")
        .current_dir(dir)
        .stderr(std::process::Stdio::null())
        .status()
        .expect("spawn frab")
        .code()
        .unwrap_or(-1)
}

// 10. CLI determinism and exit codes
fn harness_contract() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let write = |name: &str, body: &str| std::fs::write(dir.join(name), body).unwrap();
    write(
        "box.json",
        r#"{"problem": {"kind": "composite",
                        "f": {"kind": "normal_cone_box", "lower": [-1, -1], "upper": [1, 1]},
                        "g": {"kind": "zero", "dim": 2}},
            "algorithm": {"name": "frab", "anchor": [5, 5]}, "seed": 1}"#,
    );
    write(
        "budget.json",
        r#"{"problem": {"kind": "vi_rotation"},
            "algorithm": {"name": "frab", "gamma": 0.2, "tol": 1e-16, "max_iter": 10},
            "initial": {"start": [1, -1]}}"#,
    );
    write("bad_gamma.json", r#"{"problem": {"kind": "vi_rotation"}, "algorithm": {"name": "frab", "gamma": 0.5}}"#);

    let runs = [("box.json", "a", 0), ("box.json", "b", 0), ("budget.json", "c", 2), ("budget.json", "d", 2), ("bad_gamma.json", "e", 3)];
    for (config, out, expected) in runs {
        let code = run_cli(dir, &["run", config, "--out-dir", out]);
        ensure!(code == expected, "{config}: exit {code}, expected {expected}");
    }
    for (x, y) in [("a", "b"), ("c", "d")] {
        let a = std::fs::read(dir.join(x).join("trace.csv")).unwrap();
        let b = std::fs::read(dir.join(y).join("trace.csv")).unwrap();
        ensure!(a == b, "trace.csv differs between identical runs ({x}, {y})");
        ensure!(a.starts_with(b"k,residual,iterate_norm,lambda_k\n"), "bad header");
    }
    let budget = std::fs::read_to_string(dir.join("c").join("trace.csv")).unwrap();
    ensure!(budget.lines().count() == 11, "max_iter run wrote {} lines", budget.lines().count());
    ensure!(!dir.join("e").exists(), "invalid run wrote artifacts");
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("a").join("result.json")).unwrap()).unwrap();
    ensure!(result["status"] == "converged", "status {}", result["status"]);
    Ok("byte-identical traces; exits 0 / 2 / 3 as documented".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("anchored projection onto a box", anchored_projection),
        ("monotone skew convergence and boundedness", rotation_convergence),
        ("non-monotone F convergence and validator", weakly_monotone_convergence),
        ("reduction to forward-reflected-backward", reduction_equivalence),
        ("norm identity suite", norm_identities),
        ("resolvent oracles", resolvent_oracles),
        ("parameter-region truth table", parameter_truth_table),
        ("modulus estimator and sum rule", modulus_estimator),
        ("baseline sanity", baseline_sanity),
        ("harness determinism and exit codes", harness_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} — {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} — {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
