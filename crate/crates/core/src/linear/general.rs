use alloc::format;

use crate::approx::{Approximation, Truncation};
use crate::error::{Error, Result};
use crate::math::{exp_sat, sqrt};
use crate::numerics::ode::{ode_ivp, OdeOptions};
use crate::problem::LinearProblem;

const ODE_TOL: f64 = 1e-11;

fn oracle_failure(e: Error) -> Error {
    match e {
        Error::OracleFailure(_) => e,
        other => Error::OracleFailure(format!("integrating a fundamental solution: {other}")),
    }
}

/// Solve `ε u'' + c u' + d u = 0` by combining two numerically integrated
/// fundamental solutions.
///
/// * `u₂ = e^{−F/ε} v` is the layer solution. `v` solves
///   `ε v'' − c v' + (d − c') v = 0`, has a slow mode, and is integrated from
///   `x = 1` towards `x = 0` with `v(1) = 1`, `v'(1) = (d(1) − c'(1))/c(1)`.
/// * `u₁` starts at `x = 0` from data orthogonal to `u₂` in the `(u, εu')`
///   plane, so it always carries a slow component, and is integrated towards
///   `x = 1` where its fast part decays. `F = ∫c` rides along.
///
/// The result is `A u₁ + B u₂` with `A`, `B` fixed by the boundary data.
pub fn general_linear_assemble(problem: &LinearProblem, eps: f64) -> Result<Approximation> {
    if !(eps > 0.0) {
        return Err(Error::ContractViolation(format!("eps={eps} must be positive")));
    }
    let opts = OdeOptions::with_tol(ODE_TOL);
    let (c, d) = (problem.c.clone(), problem.d.clone());
    let v1 = (problem.d.value(1.0) - problem.c.derivative(1, 1.0)) / problem.c.value(1.0);
    let layer = ode_ivp(
        |x, y, dy| {
            dy[0] = y[1];
            dy[1] = (c.value(x) * y[1] - (d.value(x) - c.derivative(1, x)) * y[0]) / eps;
        },
        &[1.0, v1],
        (1.0, 0.0),
        opts,
    )
    .map_err(oracle_failure)?;
    let v_start = layer.final_state();
    // u₂(0) and ε u₂'(0).
    let (p, q) = (v_start[0], eps * v_start[1] - problem.c.value(0.0) * v_start[0]);
    let norm = sqrt(p * p + q * q);
    let (c, d) = (problem.c.clone(), problem.d.clone());
    let slow = ode_ivp(
        |x, y, dy| {
            dy[0] = y[1];
            dy[1] = -(c.value(x) * y[1] + d.value(x) * y[0]) / eps;
            dy[2] = c.value(x);
        },
        &[-q / norm, p / (norm * eps), 0.0],
        (0.0, 1.0),
        opts,
    )
    .map_err(oracle_failure)?;

    let u1_at_0 = -q / norm;
    let u1_at_1 = slow.final_state()[0];
    let f1 = slow.final_state()[2];
    let v0 = layer.final_state()[0];
    let e1 = exp_sat(-f1 / eps);
    let den = u1_at_0 * e1 - u1_at_1 * v0;
    let scale = (u1_at_0 * e1).abs().max((u1_at_1 * v0).abs());
    if den.abs() < 1e-12 * scale || den == 0.0 {
        return Err(Error::Resonance { denominator: den, scale });
    }
    let (alpha, beta) = (problem.alpha, problem.beta);
    let a = (alpha * e1 - beta * v0) / den;
    let b = (u1_at_0 * beta - alpha * u1_at_1) / den;
    Ok(Approximation::new("assemble", Truncation::default(), move |x, e| {
        if e != eps {
            return Err(Error::ContractViolation(format!("assembled at eps={eps}, evaluated at {e}")));
        }
        let s = slow.eval(x)?;
        let v = layer.eval(x)?;
        Ok(a * s[0] + b * exp_sat(-s[2] / eps) * v[0])
    })
    .with_eps_max(eps))
}
