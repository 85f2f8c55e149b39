//! Second-order finite differences for `ε u'' + g(x, u, u') = 0`, `u(0) = α`,
//! `u(1) = β`, on a grid uniform in a stretched coordinate, solved by damped
//! Newton and checked by Richardson extrapolation over three meshes.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::mesh::{LayerMap, MappedInterpolant};
use crate::error::{Error, Result};
use crate::oracle::OracleSolution;

pub type Forcing<'a> = &'a (dyn Fn(f64, f64, f64) -> f64 + Sync);
/// Partial derivatives `(∂g/∂u, ∂g/∂u')`.
pub type ForcingJacobian<'a> = &'a (dyn Fn(f64, f64, f64) -> (f64, f64) + Sync);

#[derive(Debug, Clone, Copy)]
pub struct BvpOptions {
    pub eps: f64,
    pub alpha: f64,
    pub beta: f64,
    pub map: LayerMap,
    /// Intervals of the coarsest mesh; Richardson uses `m`, `2m`, `4m`.
    pub intervals: usize,
    /// Newton stops once the max-norm step is below `tol` relative to the solution.
    pub tol: f64,
    pub max_iter: usize,
}

impl BvpOptions {
    pub fn new(eps: f64, alpha: f64, beta: f64, map: LayerMap) -> Self {
        Self { eps, alpha, beta, map, intervals: 1024, tol: 1e-12, max_iter: 50 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NewtonTrace {
    pub iterations: usize,
    pub residual_norms: Vec<f64>,
    pub converged: bool,
    /// Whether any step was shortened by the line search.
    pub damped: bool,
}

#[derive(Debug, Clone)]
pub struct BvpSolution {
    pub oracle: OracleSolution,
    /// One trace per mesh, coarse to fine.
    pub traces: Vec<NewtonTrace>,
    /// Ratio of successive mesh differences; `None` when both sit at round-off.
    pub ratio: Option<f64>,
}

struct Stencil {
    x: Vec<f64>,
    /// `h x''/(2 x')` with `x(ξ)` the inverse map.
    a: Vec<f64>,
    /// `h² x'² / ε`.
    s: Vec<f64>,
    /// `1/(2 h x')`, turning a centred ξ-difference into `u'`.
    d: Vec<f64>,
}

impl Stencil {
    fn new(map: &LayerMap, m: usize, eps: f64) -> Self {
        let h = 1.0 / m as f64;
        let x = map.nodes(m);
        let mut a = vec![0.0; m + 1];
        let mut s = vec![0.0; m + 1];
        let mut d = vec![0.0; m + 1];
        for j in 0..=m {
            let xp = 1.0 / map.dxi(x[j]);
            let xpp = -map.d2xi(x[j]) * xp * xp * xp;
            a[j] = h * xpp / (2.0 * xp);
            s[j] = h * h * xp * xp / eps;
            d[j] = 1.0 / (2.0 * h * xp);
        }
        Self { x, a, s, d }
    }

    fn residual(&self, u: &[f64], g: Forcing<'_>, out: &mut [f64]) -> f64 {
        let m = u.len() - 1;
        let mut norm: f64 = 0.0;
        for j in 1..m {
            let p = (u[j + 1] - u[j - 1]) * self.d[j];
            let r = u[j + 1] - 2.0 * u[j] + u[j - 1] - self.a[j] * (u[j + 1] - u[j - 1])
                + self.s[j] * g(self.x[j], u[j], p);
            out[j] = r;
            norm = if r.is_nan() { f64::NAN } else { norm.max(r.abs()) };
        }
        norm
    }
}

/// Thomas algorithm; `lower[0]` and `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::NonConvergence { kernel: "damped Newton", detail: "singular Jacobian".into() });
    }
    rhs[0] /= beta;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i - 1];
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::NonConvergence { kernel: "damped Newton", detail: "singular Jacobian".into() });
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

/// Damped Newton on a single mesh of `m` intervals starting from `init`
/// (length `m + 1`, boundary entries overwritten by the boundary data).
pub fn newton_fd(
    g: Forcing<'_>,
    dg: ForcingJacobian<'_>,
    opts: &BvpOptions,
    m: usize,
    init: &[f64],
) -> Result<(Vec<f64>, NewtonTrace)> {
    if m < 6 || init.len() != m + 1 {
        return Err(Error::ContractViolation(format!("mesh of {m} intervals with {} initial values", init.len())));
    }
    let st = Stencil::new(&opts.map, m, opts.eps);
    let mut u = init.to_vec();
    u[0] = opts.alpha;
    u[m] = opts.beta;
    let mut r = vec![0.0; m + 1];
    let mut trial = vec![0.0; m + 1];
    let mut r_trial = vec![0.0; m + 1];
    let n = m - 1;
    let (mut lo, mut di, mut up, mut rhs) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut norm = st.residual(&u, g, &mut r);
    let mut trace = NewtonTrace { residual_norms: vec![norm], ..NewtonTrace::default() };
    if !norm.is_finite() {
        return Err(Error::NonConvergence { kernel: "damped Newton", detail: "non-finite initial residual".into() });
    }
    loop {
        if norm == 0.0 {
            trace.converged = true;
            return Ok((u, trace));
        }
        if trace.iterations >= opts.max_iter {
            return Err(Error::NonConvergence {
                kernel: "damped Newton",
                detail: format!("Newton step above {:e} after {} iterations (residual {norm:e})", opts.tol, trace.iterations),
            });
        }
        for j in 1..m {
            let k = j - 1;
            let p = (u[j + 1] - u[j - 1]) * st.d[j];
            let (gu, gp) = dg(st.x[j], u[j], p);
            let cp = st.s[j] * gp * st.d[j];
            lo[k] = 1.0 + st.a[j] - cp;
            di[k] = -2.0 + st.s[j] * gu;
            up[k] = 1.0 - st.a[j] + cp;
            rhs[k] = -r[j];
        }
        solve_tridiagonal(&lo, &di, &up, &mut rhs)?;
        // The residual carries an h² factor, so convergence is judged on the step.
        let step = rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let size = u.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if step <= opts.tol * size {
            for j in 1..m {
                u[j] += rhs[j - 1];
            }
            trace.residual_norms.push(st.residual(&u, g, &mut r));
            trace.converged = true;
            return Ok((u, trace));
        }
        let mut lambda = 1.0;
        loop {
            trial.copy_from_slice(&u);
            for j in 1..m {
                trial[j] += lambda * rhs[j - 1];
            }
            let t = st.residual(&trial, g, &mut r_trial);
            if t.is_finite() && t <= (1.0 - 1e-4 * lambda) * norm {
                u.copy_from_slice(&trial);
                r.copy_from_slice(&r_trial);
                norm = t;
                break;
            }
            lambda *= 0.5;
            trace.damped = true;
            if lambda < 1e-4 {
                return Err(Error::NonConvergence {
                    kernel: "damped Newton",
                    detail: format!(
                        "line search stalled at residual {norm:e} (tolerance {:e}) after {} iterations",
                        opts.tol, trace.iterations
                    ),
                });
            }
        }
        trace.iterations += 1;
        trace.residual_norms.push(norm);
    }
}

/// Refine a solution from `m` to `2m` intervals by cubic midpoint insertion.
fn prolong(u: &[f64]) -> Vec<f64> {
    let m = u.len() - 1;
    let mut out = vec![0.0; 2 * m + 1];
    for k in 0..=m {
        out[2 * k] = u[k];
    }
    for k in 0..m {
        out[2 * k + 1] = if k == 0 || k + 1 == m {
            0.5 * (u[k] + u[k + 1])
        } else {
            (-u[k - 1] + 9.0 * u[k] + 9.0 * u[k + 1] - u[k + 2]) / 16.0
        };
    }
    out
}

/// Solve on three nested meshes, verify second-order behaviour and return the
/// Richardson-extrapolated solution on the middle mesh.
pub fn solve_bvp(
    g: Forcing<'_>,
    dg: ForcingJacobian<'_>,
    init: &dyn Fn(f64) -> f64,
    opts: &BvpOptions,
) -> Result<BvpSolution> {
    let m = opts.intervals;
    let start: Vec<f64> = opts.map.nodes(m).iter().map(|&x| init(x)).collect();
    let (u1, t1) = newton_fd(g, dg, opts, m, &start)?;
    let (u2, t2) = newton_fd(g, dg, opts, 2 * m, &prolong(&u1))?;
    let (u4, t4) = newton_fd(g, dg, opts, 4 * m, &prolong(&u2))?;

    let mut d1: f64 = 0.0;
    let mut d2: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for k in 0..=m {
        d1 = d1.max((u2[2 * k] - u1[k]).abs());
        d2 = d2.max((u4[4 * k] - u2[2 * k]).abs());
        scale = scale.max(u1[k].abs());
    }
    let ratio = if d2 <= 1e-13 * scale { None } else { Some(d1 / d2) };
    if let Some(q) = ratio {
        if !(3.5..=4.5).contains(&q) {
            return Err(Error::SolverAccuracy { ratio: q });
        }
    }
    let fine: Vec<f64> = (0..=2 * m).map(|i| u4[2 * i] + (u4[2 * i] - u2[i]) / 3.0).collect();
    let mut err: f64 = 0.0;
    for k in 0..=m {
        let coarse = u2[2 * k] + (u2[2 * k] - u1[k]) / 3.0;
        err = err.max((fine[2 * k] - coarse).abs());
    }
    err = err.max(4.0 * f64::EPSILON * scale);
    let grid = opts.map.nodes(2 * m);
    let interp = MappedInterpolant::new(opts.map, fine.clone());
    let oracle = OracleSolution::new(grid, fine, err, (opts.alpha, opts.beta), opts.eps, Arc::new(move |x| interp.eval(x)));
    Ok(BvpSolution { oracle, traces: vec![t1, t2, t4], ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    #[test]
    fn tridiagonal_solve() {
        let lo = [0.0, 1.0, 1.0];
        let di = [4.0, 4.0, 4.0];
        let up = [1.0, 1.0, 0.0];
        let mut rhs = [5.0, 6.0, 5.0];
        solve_tridiagonal(&lo, &di, &up, &mut rhs).unwrap();
        for v in rhs {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_coefficient_layer() {
        // ε u'' + u' = 0, u(0)=1, u(1)=0: u = (e^{-x/ε} - e^{-1/ε})/(1 - e^{-1/ε}).
        let eps = 0.05;
        let g = |_: f64, _: f64, p: f64| p;
        let dg = |_: f64, _: f64, _: f64| (0.0, 1.0);
        let opts = BvpOptions { intervals: 256, ..BvpOptions::new(eps, 1.0, 0.0, LayerMap::for_layer(eps, 1.0)) };
        let sol = solve_bvp(&g, &dg, &|x| 1.0 - x, &opts).unwrap();
        assert!(sol.traces.iter().all(|t| t.iterations == 1 && t.converged));
        let e1 = exp(-1.0 / eps);
        let worst = (0..=200)
            .map(|k| {
                let x = k as f64 / 200.0;
                (sol.oracle.eval(x) - (exp(-x / eps) - e1) / (1.0 - e1)).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
        assert!(worst <= 10.0 * sol.oracle.err_estimate, "{worst} {}", sol.oracle.err_estimate);
        let q = sol.ratio.unwrap();
        assert!((3.5..=4.5).contains(&q));
    }

    #[test]
    fn infeasible_tolerance_fails_cleanly() {
        let g = |_: f64, u: f64, p: f64| u * p - u;
        let dg = |_: f64, u: f64, p: f64| (p - 1.0, u);
        let opts = BvpOptions { tol: 1e-20, intervals: 64, ..BvpOptions::new(1.0, 1.5, 2.0, LayerMap::uniform()) };
        let init: Vec<f64> = (0..=64).map(|j| 1.5 + 0.5 * j as f64 / 64.0).collect();
        let err = newton_fd(&g, &dg, &opts, 64, &init).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn prolongation_keeps_cubics() {
        let u: Vec<f64> = (0..=8).map(|k| (k as f64 / 8.0).powi(3)).collect();
        let v = prolong(&u);
        for i in 2..14 {
            assert!((v[i] - (i as f64 / 16.0).powi(3)).abs() < 1e-15);
        }
    }
}
