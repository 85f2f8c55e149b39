use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::closed::nonlinear_mae;
use crate::error::{Error, Result};
use crate::math::{diff1, powf};
use crate::numerics::bvp::{solve_bvp, BvpOptions, BvpSolution};
use crate::numerics::mesh::LayerMap;
use crate::numerics::ode::{ode_ivp, DenseSolution, OdeOptions};
use crate::numerics::roots::{bisect, expand_bracket};
use crate::oracle::OracleSolution;
use crate::problem::NonlinearProblem;

/// Smallest ε the finite-difference oracle accepts.
pub const EPS_FLOOR: f64 = 1e-3;

/// Finite-difference solution together with how it was reached.
#[derive(Debug, Clone)]
pub struct NonlinearOracle {
    pub solution: BvpSolution,
    /// Intermediate ε values solved before the target (empty if Newton
    /// converged directly from the matched-expansion guess).
    pub continuation: Vec<f64>,
}

fn solve_at(problem: &NonlinearProblem, eps: f64, init: &dyn Fn(f64) -> f64) -> Result<BvpSolution> {
    let g = |_: f64, u: f64, p: f64| u * p - u;
    let dg = |_: f64, u: f64, p: f64| (p - 1.0, u);
    let opts = BvpOptions::new(eps, problem.alpha, problem.beta, LayerMap::for_layer(eps, problem.beta - 1.0));
    solve_bvp(&g, &dg, init, &opts)
}

/// Damped Newton on the finite-difference system, starting from the matched
/// expansion and falling back to continuation in ε from 1 downward.
pub fn nonlinear_exact(alpha: f64, beta: f64, eps: f64) -> Result<NonlinearOracle> {
    let problem = NonlinearProblem::new(alpha, beta)?;
    if !(eps >= EPS_FLOOR) {
        return Err(Error::ContractViolation(format!("eps={eps} below the oracle floor {EPS_FLOOR}")));
    }
    let mae = nonlinear_mae(alpha, beta)?;
    let guess = |x: f64| mae.eval(x, eps).unwrap_or(alpha + (beta - alpha) * x);
    let first = match solve_at(&problem, eps, &guess) {
        Ok(solution) => return Ok(NonlinearOracle { solution, continuation: Vec::new() }),
        Err(e @ Error::NonConvergence { .. }) => e,
        Err(e) => return Err(Error::OracleFailure(format!("{e}"))),
    };
    if eps >= 1.0 {
        return Err(Error::OracleFailure(format!("{first}")));
    }
    let mut path = Vec::new();
    let mut current = {
        let mae1 = |x: f64| mae.eval(x, 1.0).unwrap_or(alpha + (beta - alpha) * x);
        solve_at(&problem, 1.0, &mae1).map_err(|e| Error::OracleFailure(format!("continuation start: {e}")))?
    };
    path.push(1.0);
    let mut e_cur = 1.0;
    let mut ratio = 0.5;
    while e_cur > eps {
        let next = (e_cur * ratio).max(eps);
        let prev = current.oracle.clone();
        match solve_at(&problem, next, &move |x| prev.eval(x)) {
            Ok(sol) => {
                current = sol;
                e_cur = next;
                path.push(next);
            }
            Err(Error::NonConvergence { .. }) if ratio < 0.99 => ratio = powf(ratio, 0.5),
            Err(e) => {
                return Err(Error::OracleFailure(format!(
                    "continuation exhausted at eps={next} after {} steps: {e}",
                    path.len()
                )))
            }
        }
    }
    path.pop();
    Ok(NonlinearOracle { solution: current, continuation: path })
}

fn shoot(problem: &NonlinearProblem, eps: f64, slope: f64, tol: f64) -> Result<DenseSolution> {
    ode_ivp(
        |_, y, d| {
            d[0] = y[1];
            d[1] = (y[0] - y[0] * y[1]) / eps;
        },
        &[problem.alpha, slope],
        (0.0, 1.0),
        OdeOptions::with_tol(tol),
    )
}

/// Shooting from `x = 0` with bisection on `u'(0)`; an oracle independent of
/// the finite-difference machinery, practical for moderate ε.
pub fn nonlinear_shooting(alpha: f64, beta: f64, eps: f64) -> Result<OracleSolution> {
    let problem = NonlinearProblem::new(alpha, beta)?;
    let mae = nonlinear_mae(alpha, beta)?;
    let s0 = diff1(&|x| mae.eval(x.max(0.0), eps).unwrap_or(alpha), 1e-3, 1e-4);
    let miss = |s: f64| -> Result<f64> { Ok(shoot(&problem, eps, s, 1e-12)?.final_state()[0] - beta) };
    let (a, b) = expand_bracket(miss, s0 - 0.5, s0 + 0.5, 30).map_err(|e| Error::OracleFailure(format!("{e}")))?;
    let slope = bisect(miss, a, b, 1e-15, 200).map_err(|e| Error::OracleFailure(format!("{e}")))?;
    let fine = shoot(&problem, eps, slope, 1e-12)?;
    let coarse = shoot(&problem, eps, slope, 1e-10)?;
    let grid: Vec<f64> = (0..=400).map(|k| k as f64 / 400.0).collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut err: f64 = (fine.final_state()[0] - beta).abs();
    for &x in &grid {
        let v = fine.eval(x)?[0];
        err = err.max((v - coarse.eval(x)?[0]).abs());
        values.push(v);
    }
    let interp = move |x: f64| fine.eval(x.clamp(0.0, 1.0)).map_or(f64::NAN, |v| v[0]);
    Ok(OracleSolution::new(grid, values, err, (alpha, beta), eps, Arc::new(interp)))
}
