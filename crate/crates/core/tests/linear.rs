use xasy_core::analysis::{integrated_error, uniform_grid};
use xasy_core::coeff::Coefficient;
use xasy_core::linear::{
    general_linear_assemble, ladder_coefficients, linear_exact, linear_fd_oracle, linear_ladder, linear_mae, linear_multiscale, linear_psum, linear_wkb,
    psum_ratio, wkb_coefficients,
};
use xasy_core::math::diff2;
use xasy_core::{eval_ladder, Approximation, LinearProblem};

fn residual(a: &Approximation, eps: f64) -> f64 {
    let h = 1e-3 * eps.min(0.1);
    (1..100)
        .map(|k| {
            let x = k as f64 / 100.0;
            let u = |t: f64| a.eval(t, eps).unwrap();
            let du = (u(x + h) - u(x - h)) / (2.0 * h);
            (eps * diff2(&u, x, h) + (2.0 * x + 1.0) * du + 2.0 * u(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn ladder_converges_to_psum() {
    for (alpha, beta) in [(1.0, 0.0), (0.4, 1.3)] {
        let psum = linear_psum(alpha, beta);
        let ladder = linear_ladder(alpha, beta, 0, 20);
        for eps in [0.5, 1.0] {
            let q = psum_ratio(eps);
            let bound = q.powi(21) * (alpha - 3.0 * beta).abs() / (1.0 - q) + 1e-15;
            for x in uniform_grid(41) {
                let d = (eval_ladder(&ladder, x, eps, 0, 20).unwrap() - psum.eval(x, eps).unwrap()).abs();
                assert!(d <= bound, "eps={eps} x={x}: {d:e} > {bound:e}");
            }
        }
    }
}

#[test]
fn ladder_bottom_rung_is_wkb() {
    let l = linear_ladder(1.2, -0.7, 2, 3);
    let w = linear_wkb(1.2, -0.7, 2);
    for x in uniform_grid(11) {
        let d = (eval_ladder(&l, x, 0.3, 2, 0).unwrap() - w.eval(x, 0.3).unwrap()).abs();
        assert!(d < 1e-13);
    }
    let (a, b) = wkb_coefficients(1.2, -0.7, 2);
    let t = ladder_coefficients(1.2, -0.7, 2, 0);
    for r in 0..=2 {
        assert!((t.b[0][r] - b[r]).abs() < 1e-12);
        assert!((t.a[0][r].eval(0.4) - a[r].eval(0.4)).abs() < 1e-12);
    }
}

#[test]
fn leading_order_residuals_are_first_order() {
    // The outer term leaves ε u'' = O(ε); the layer term is exact.
    for a in [linear_wkb(1.0, 0.5, 0), linear_psum(1.0, 0.5), linear_multiscale(1.0, 0.5, 0)] {
        let (r1, r2) = (residual(&a, 0.1), residual(&a, 0.05));
        let ratio = r1 / r2;
        assert!((1.7..=2.3).contains(&ratio), "{}: {r1:e} / {r2:e}", a.method);
    }
}

#[test]
fn mae_residual_is_order_one() {
    // The inner exponential e^{−x/ε} leaves (2 − 2x/ε)(α − 3β)e^{−x/ε}.
    let a = linear_mae(1.0, 0.0);
    assert!(residual(&a, 0.1) > 0.5);
    assert!(residual(&a, 0.05) > 0.5);
}

#[test]
fn psum_beats_mae_in_integrated_error_at_small_eps() {
    let o = linear_exact(1.0, 0.0, 0.05).unwrap();
    let dp = integrated_error(&linear_psum(1.0, 0.0), &o, 0.05).unwrap();
    let dm = integrated_error(&linear_mae(1.0, 0.0), &o, 0.05).unwrap();
    assert!(dp < 0.1 * dm, "{dp:e} vs {dm:e}");
}

#[test]
fn multiscale_higher_orders_improve() {
    let eps = 0.1;
    let o = linear_exact(1.0, 0.3, eps).unwrap();
    let errs: Vec<f64> = (0..=2).map(|r| integrated_error(&linear_multiscale(1.0, 0.3, r), &o, eps).unwrap()).collect();
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
}

#[test]
fn psum_warns_past_divergence() {
    let p = linear_psum(1.0, 0.0);
    let eps_c = 2.0 / 3f64.ln();
    assert!(p.validity(0.99 * eps_c).is_valid());
    assert!(!p.validity(1.01 * eps_c).is_valid());
    assert!(p.eval(0.5, 1.01 * eps_c).unwrap().is_finite());
}

#[test]
fn general_problem_matches_fd_oracle() {
    let c = Coefficient::labelled("1 + x^2", |x| 1.0 + x * x);
    let d = Coefficient::labelled("1 + x", |x| 1.0 + x);
    let p = LinearProblem::new(c, d, 0.7, 1.2).unwrap();
    for eps in [0.05, 0.2, 1.0] {
        let a = general_linear_assemble(&p, eps).unwrap();
        let o = linear_fd_oracle(&p, eps).unwrap().oracle;
        for x in uniform_grid(101) {
            assert!((a.eval(x, eps).unwrap() - o.eval(x)).abs() < 1e-7, "eps={eps} x={x}");
        }
    }
}

#[test]
fn rejects_non_positive_coefficients() {
    let c = Coefficient::from_fn(|x| x - 0.5);
    assert!(LinearProblem::new(c, Coefficient::constant(1.0), 0.0, 1.0).is_err());
}
