use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::exponent_poly;
use crate::error::{Error, Result};
use crate::math::decay;
use crate::numerics::bvp::{solve_bvp, BvpOptions, BvpSolution};
use crate::numerics::mesh::{LayerMap, MappedInterpolant};
use crate::numerics::quad::integrate;
use crate::oracle::OracleSolution;
use crate::problem::LinearProblem;

const INTERVALS: usize = 2048;

/// Reference solution of the pedagogical problem from its first integral
/// `ε u' + (2x+1) u = const`:
///
/// `u(x) = α e^{−F(x)/ε} + (β − α e^{−F(1)/ε}) J(x)/J(1)`,
/// `J(x) = ∫₀ˣ e^{(F(t)−F(x))/ε} dt`.
///
/// The exponential is kept in closed form; only the smooth ratio `J/J(1)` is
/// tabulated and interpolated, so tiny differences between nearby
/// approximations remain resolvable.
pub fn linear_exact(alpha: f64, beta: f64, eps: f64) -> Result<OracleSolution> {
    if !(eps > 0.0) {
        return Err(Error::ContractViolation(format!("eps={eps} must be positive")));
    }
    let f = exponent_poly();
    let map = LayerMap::for_layer(eps, 1.0);
    let grid = map.nodes(INTERVALS);
    let local = |a: f64, b: f64| -> Result<(f64, f64)> {
        let fb = f.eval(b);
        let r = integrate(|t| decay((fb - f.eval(t)) / eps), a, b, 1e-12)
            .map_err(|e| Error::OracleFailure(format!("quadrature for the first integral failed: {e}")))?;
        Ok((r.value, r.err_estimate))
    };
    let mut j = Vec::with_capacity(grid.len());
    j.push(0.0);
    let mut rel_err: f64 = 0.0;
    for k in 0..INTERVALS {
        let (a, b) = (grid[k], grid[k + 1]);
        let (v, e) = local(a, b)?;
        let carried = decay((f.eval(b) - f.eval(a)) / eps) * j[k];
        let jn = carried + v;
        rel_err = rel_err.max(e / jn);
        j.push(jn);
    }
    let j1 = j[INTERVALS];
    let ratio: Vec<f64> = j.iter().map(|v| v / j1).collect();
    let interp = MappedInterpolant::new(map, ratio.clone());

    // Spot-check the interpolant against direct evaluation between nodes.
    let mut interp_err: f64 = 0.0;
    for k in (0..INTERVALS).step_by(16) {
        let (a, b) = (grid[k], grid[k + 1]);
        let mid = map.x(0.5 * (map.xi(a) + map.xi(b)));
        let (v, _) = local(a, mid)?;
        let direct = (decay((f.eval(mid) - f.eval(a)) / eps) * j[k] + v) / j1;
        interp_err = interp_err.max((interp.eval(mid) - direct).abs());
    }
    let e1 = decay(2.0 / eps);
    let amp = beta - alpha * e1;
    let scale = alpha.abs().max(beta.abs());
    let err_estimate = amp.abs() * (interp_err + 4.0 * rel_err) + 4.0 * f64::EPSILON * scale;
    let values: Vec<f64> = grid.iter().zip(&ratio).map(|(&x, r)| alpha * decay(f.eval(x) / eps) + amp * r).collect();
    let u = move |x: f64| alpha * decay(f.eval(x) / eps) + amp * interp.eval(x);
    Ok(OracleSolution::new(grid, values, err_estimate, (alpha, beta), eps, Arc::new(u)))
}

/// Finite-difference reference for any [`LinearProblem`].
pub fn linear_fd_oracle(problem: &LinearProblem, eps: f64) -> Result<BvpSolution> {
    let (c, d) = (problem.c.clone(), problem.d.clone());
    let g = move |x: f64, u: f64, p: f64| c.value(x) * p + d.value(x) * u;
    let (c2, d2) = (problem.c.clone(), problem.d.clone());
    let dg = move |x: f64, _: f64, _: f64| (d2.value(x), c2.value(x));
    let map = LayerMap::for_layer(eps, problem.c.value(0.0));
    let opts = BvpOptions::new(eps, problem.alpha, problem.beta, map);
    let (alpha, beta) = (problem.alpha, problem.beta);
    solve_bvp(&g, &dg, &move |x| alpha + (beta - alpha) * x, &opts)
        .map_err(|e| match e {
            Error::SolverAccuracy { .. } => e,
            other => Error::OracleFailure(format!("{other}")),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        for &eps in &[0.05, 0.3, 1.0, 2.5] {
            let o = linear_exact(1.0, 0.0, eps).unwrap();
            assert_eq!(o.eval(0.0), 1.0);
            assert!(o.eval(1.0).abs() < 1e-10, "eps={eps}");
            assert!(o.err_estimate <= 1e-10, "eps={eps} err={}", o.err_estimate);
        }
    }

    #[test]
    fn satisfies_first_integral() {
        // ε u' + (2x+1) u must be constant.
        let eps = 0.2;
        let o = linear_exact(0.7, 1.3, eps).unwrap();
        let q = |x: f64| eps * crate::math::diff1(&|t| o.eval(t), x, 1e-4) + (2.0 * x + 1.0) * o.eval(x);
        let q0 = q(0.3);
        for &x in &[0.1, 0.5, 0.9] {
            assert!((q(x) - q0).abs() < 1e-8, "{x}: {} vs {q0}", q(x));
        }
    }
}
