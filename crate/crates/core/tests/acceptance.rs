//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use xasy_core::analysis::{integrated_error, relative_error_curve, uniform_grid};
use xasy_core::linear::{general_linear_assemble, linear_exact, linear_fd_oracle, linear_mae, linear_multiscale, linear_psum, linear_wkb, multiscale_coeffs};
use xasy_core::math::exp;
use xasy_core::nonlinear::{
    balance_residual, build_array, gfun_taylor, kl_coefficients, lambda_series, n_resum, negpow_correction, nonlinear_exact, nonlinear_shooting,
    nonlinear_wkb, Families,
};
use xasy_core::{Approximation, LinearProblem, OracleSolution};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn max_diff(a: &Approximation, o: &OracleSolution, eps: f64, points: usize) -> f64 {
    uniform_grid(points).into_iter().map(|x| (a.eval(x, eps).unwrap() - o.eval(x)).abs()).fold(0.0, f64::max)
}

fn rel_err(a: &Approximation, o: &OracleSolution, x: f64, eps: f64) -> f64 {
    (1.0 - a.eval(x, eps).unwrap() / o.eval(x)).abs()
}

fn linear_pairs(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))).collect()
}

fn nonlinear_pairs(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let beta = rng.random_range(1.05..3.0);
            (rng.random_range(beta - 0.95..beta + 2.0), beta)
        })
        .collect()
}

fn boundary_exactness() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (alpha, beta) in linear_pairs(50, 1) {
        let p = linear_psum(alpha, beta);
        for eps in [0.1, 0.25, 0.5, 1.0, 1.5] {
            worst = worst.max((p.eval(0.0, eps).unwrap() - alpha).abs());
            worst = worst.max((p.eval(1.0, eps).unwrap() - beta).abs());
        }
    }
    let t = start.elapsed();
    check(worst <= 1e-13 && within(t, 1.0), format!("max boundary residual {worst:.3e} (tol 1e-13), {t:.2?}"))
}

fn residual_hierarchy() -> Outcome {
    // β = 0 across the whole ε range; β ≠ 0 only where β + O(e^{−2/ε}) keeps
    // enough digits for a 1e−10 relative comparison.
    let mut cases: Vec<(f64, f64, f64)> = Vec::new();
    for alpha in [1.0, -2.5, 0.3] {
        for eps in [0.05, 0.1, 0.2, 0.25, 0.5, 1.0, 1.5, 2.0] {
            cases.push((alpha, 0.0, eps));
        }
    }
    for (alpha, beta) in linear_pairs(20, 2) {
        for eps in [0.25, 0.5, 1.0, 1.5] {
            cases.push((alpha, beta, eps));
        }
    }
    let (mut worst_mae, mut worst_wkb) = (0.0f64, 0.0f64);
    let mut ordered = true;
    for &(alpha, beta, eps) in &cases {
        let k = (alpha - 3.0 * beta).abs();
        let mae = (linear_mae(alpha, beta).eval(1.0, eps).unwrap() - beta).abs();
        let wkb = (linear_wkb(alpha, beta, 0).eval(1.0, eps).unwrap() - beta).abs();
        worst_mae = worst_mae.max((mae / (k * exp(-1.0 / eps)) - 1.0).abs());
        worst_wkb = worst_wkb.max((wkb / (k * exp(-2.0 / eps)) - 1.0).abs());
        ordered &= wkb < mae;
    }
    check(
        worst_mae <= 1e-10 && worst_wkb <= 1e-10 && ordered,
        format!("{} cases, rel dev MAE {worst_mae:.2e}, WKB {worst_wkb:.2e} (tol 1e-10), WKB < MAE: {ordered}", cases.len()),
    )
}

fn integrated_error_ordering() -> Outcome {
    let start = Instant::now();
    let (mae, wkb, psum) = (linear_mae(1.0, 0.0), linear_wkb(1.0, 0.0, 0), linear_psum(1.0, 0.0));
    let mut ok = true;
    let mut worst_ratio: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for k in 0..20 {
        let eps = 0.05 + 0.95 * k as f64 / 19.0;
        let o = linear_exact(1.0, 0.0, eps).unwrap();
        worst_oracle = worst_oracle.max(o.err_estimate);
        let dp = integrated_error(&psum, &o, eps).unwrap();
        let dw = integrated_error(&wkb, &o, eps).unwrap();
        let dm = integrated_error(&mae, &o, eps).unwrap();
        ok &= dp < dw && dp < dm;
        worst_ratio = worst_ratio.max(dp / dw.min(dm));
    }
    let t = start.elapsed();
    check(
        ok && worst_oracle <= 1e-8 && within(t, 10.0),
        format!("max Δpsum/min(ΔWKB,ΔMAE) = {worst_ratio:.3}, oracle err ≤ {worst_oracle:.1e}, {t:.2?}"),
    )
}

fn general_reduction() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for eps in [0.5, 1.0] {
        let p = LinearProblem::pedagogical(1.0, 0.0).unwrap();
        let a = general_linear_assemble(&p, eps).unwrap();
        worst = worst.max(max_diff(&a, &linear_exact(1.0, 0.0, eps).unwrap(), eps, 101));
    }
    let t = start.elapsed();
    check(worst <= 1e-7 && within(t, 5.0), format!("max-norm difference {worst:.3e} (tol 1e-7), {t:.2?}"))
}

fn nonlinear_left_boundary() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for (alpha, beta) in nonlinear_pairs(50, 4) {
        let a = n_resum(alpha, beta).unwrap();
        for _ in 0..4 {
            let eps = rng.random_range(0.05..=2.0);
            worst = worst.max((a.eval(0.0, eps).unwrap() - alpha).abs());
        }
    }
    check(worst <= 1e-13, format!("max |n_resum(0) - α| = {worst:.3e} (tol 1e-13)"))
}

fn nonlinear_x1_comparison() -> Outcome {
    let start = Instant::now();
    let (nr, wkb) = (n_resum(1.5, 2.0).unwrap(), nonlinear_wkb(1.5, 2.0).unwrap());
    let mut better_at_1 = true;
    let mut detail = String::new();
    let mut oracle_err: f64 = 0.0;
    let mut somewhere_worse = false;
    for eps in [0.1, 1.0] {
        let o = nonlinear_exact(1.5, 2.0, eps).unwrap().solution.oracle;
        oracle_err = oracle_err.max(o.err_estimate);
        let (en, ew) = (rel_err(&nr, &o, 1.0, eps), rel_err(&wkb, &o, 1.0, eps));
        better_at_1 &= en < ew;
        detail += &format!("ε={eps}: x=1 n-resum {:.3e}% vs WKB {:.3e}%; ", 100.0 * en, 100.0 * ew);
        if eps == 1.0 {
            somewhere_worse = (1..=200).map(|k| 0.2 * k as f64 / 200.0).any(|x| rel_err(&wkb, &o, x, eps) < rel_err(&nr, &o, x, eps));
        }
    }
    let t = start.elapsed();
    check(
        better_at_1 && somewhere_worse && oracle_err <= 1e-8 && within(t, 10.0),
        format!("{detail}WKB better somewhere in [0,0.2]: {somewhere_worse}, oracle err {oracle_err:.1e}, {t:.2?}"),
    )
}

fn negative_power_balances() -> Outcome {
    let (alpha, beta) = (1.5, 2.0);
    let fam = Families::new(alpha, beta, 12).unwrap();
    let arr = build_array(alpha, beta, 12, 2).unwrap();
    let left = fam.am1_n1(1).eval(0.0).abs();
    let resummed = (0..=3).map(|k| negpow_correction(alpha, beta).unwrap().eval(0.0, 0.25 * (k + 1) as f64).unwrap().abs()).fold(0.0, f64::max);
    let partial = (1..=12).map(|n| fam.am1_n1(n).eval(0.0)).sum::<f64>().abs();
    let right = (fam.am1_n1(1).eval(1.0) + fam.am1_02()).abs();
    let grid = uniform_grid(11);
    let with_neg = grid.iter().map(|&x| balance_residual(&arr, 1, 1, -1, x).abs().max(balance_residual(&arr, 1, 1, -2, x).abs())).fold(0.0, f64::max);
    let mut no_neg = arr.clone();
    no_neg.a.retain(|&(_, _, r), _| r >= 0);
    let without = grid.iter().map(|&x| balance_residual(&no_neg, 1, 1, -1, x).abs()).fold(0.0, f64::max);
    let pass = left <= 1e-13 && resummed <= 1e-13 && partial <= 1e-13 && right <= 1e-13 && without > 1e-2 && with_neg <= 1e-10;
    check(
        pass,
        format!(
            "a(1,1)(0)={left:.1e}, Σn at 0 = {partial:.1e} (closed {resummed:.1e}), x=1 pair {right:.1e}; r_min=0 residual {without:.3e} vs r_min=-1 {with_neg:.1e}"
        ),
    )
}

fn kl_dual() -> Outcome {
    let kl = kl_coefficients(20).unwrap();
    let (kg, lg) = gfun_taylor(20);
    let worst = (2..=20).map(|n| (kl.k[n] - kg[n]).abs().max((kl.l[n] - lg[n]).abs())).fold(0.0, f64::max);
    let spots = [(kl.k[2], -5.0), (kl.k[3], -29.0 / 3.0), (kl.l[2], -10.0), (kl.l[3], -29.0)];
    let spot = spots.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    check(worst <= 1e-10 && spot <= 1e-12, format!("recurrence vs generating function {worst:.2e} (tol 1e-10), spot values {spot:.1e}"))
}

fn lambda_improvement() -> Outcome {
    let start = Instant::now();
    // ũ₀ = x + β − 1 only meets u(1) = β; the stages k ≥ 1 restore u(0) = α.
    let mut ok = true;
    let mut bc_worst: f64 = 0.0;
    let mut detail = String::new();
    for eps in [0.1, 1.0] {
        let s = lambda_series(1.5, 2.0, eps, 2).unwrap();
        let o = nonlinear_exact(1.5, 2.0, eps).unwrap().solution.oracle;
        let grid = uniform_grid(201);
        let mut errs = [0.0; 3];
        for (k, e) in errs.iter_mut().enumerate() {
            let a = s.approximation(k).unwrap();
            *e = relative_error_curve(&a, &o, eps, &grid).unwrap().max();
            let right = (a.eval(1.0, eps).unwrap() - 2.0).abs();
            let bc = if k == 0 { right } else { right.max((a.eval(0.0, eps).unwrap() - 1.5).abs()) };
            bc_worst = bc_worst.max(bc);
        }
        ok &= errs[0] > errs[1] && errs[1] > errs[2];
        detail += &format!("ε={eps}: {:.3}% > {:.3}% > {:.4}%; ", errs[0], errs[1], errs[2]);
    }
    let t = start.elapsed();
    check(ok && bc_worst <= 1e-8 && within(t, 20.0), format!("{detail}boundary residual {bc_worst:.1e}, {t:.2?}"))
}

fn multiscale_consistency() -> Outcome {
    let mut agree: f64 = 0.0;
    let mut rec: f64 = 0.0;
    for (alpha, beta) in [(1.0, 0.0), (0.7, -1.3)] {
        for eps in [0.5, 1.0] {
            let (m, p) = (linear_multiscale(alpha, beta, 0), linear_psum(alpha, beta));
            for x in uniform_grid(101) {
                agree = agree.max((m.eval(x, eps).unwrap() - p.eval(x, eps).unwrap()).abs());
            }
            let c = multiscale_coeffs(alpha, beta, 2.0 / eps, 2).unwrap();
            for r in 0..=2 {
                rec = rec.max(c.recurrence_residual(alpha, beta, r, 101));
            }
        }
    }
    check(agree <= 1e-12 && rec <= 1e-10, format!("multiscale(R=0) vs psum {agree:.2e} (tol 1e-12), recurrence residual {rec:.2e} (tol 1e-10)"))
}

fn oracle_independence() -> Outcome {
    let mut lin: f64 = 0.0;
    for eps in [0.1, 0.5, 1.0] {
        let exact = linear_exact(1.0, 0.0, eps).unwrap();
        let fd = linear_fd_oracle(&LinearProblem::pedagogical(1.0, 0.0).unwrap(), eps).unwrap().oracle;
        lin = lin.max(uniform_grid(1001).into_iter().map(|x| (exact.eval(x) - fd.eval(x)).abs()).fold(0.0, f64::max));
    }
    let fd = nonlinear_exact(1.5, 2.0, 1.0).unwrap().solution.oracle;
    let sh = nonlinear_shooting(1.5, 2.0, 1.0).unwrap();
    let non = uniform_grid(1001).into_iter().map(|x| (fd.eval(x) - sh.eval(x)).abs()).fold(0.0, f64::max);
    check(lin <= 1e-7 && non <= 1e-7, format!("linear quadrature vs FD {lin:.2e}, nonlinear FD vs shooting {non:.2e} (tol 1e-7)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("boundary exactness of psum", boundary_exactness),
        ("MAE/WKB right-boundary residuals", residual_hierarchy),
        ("integrated error psum < WKB, MAE", integrated_error_ordering),
        ("general linear assembly reduces to exact", general_reduction),
        ("n-resum left boundary", nonlinear_left_boundary),
        ("n-resum vs WKB at x=1", nonlinear_x1_comparison),
        ("negative-power balances", negative_power_balances),
        ("K/L recurrence vs generating functions", kl_dual),
        ("lambda-series partial sums improve", lambda_improvement),
        ("multiple scales vs psum", multiscale_consistency),
        ("oracle independence", oracle_independence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            check(false, format!("panicked: {msg}"))
        });
        if !outcome.pass {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {} ({})", i + 1, if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
