//! Reordered expansion `u = Σ λ^k ũ_k` (λ = 1), each term meeting both
//! boundary conditions.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::approx::{Approximation, Truncation};
use crate::error::{Error, Result};
use crate::math::{decay, sqrt};
use crate::numerics::bvp::{solve_bvp, BvpOptions};
use crate::numerics::mesh::LayerMap;
use crate::numerics::special::erfcx;
use crate::problem::NonlinearProblem;

const FRAC_2_SQRT_PI: f64 = core::f64::consts::FRAC_2_SQRT_PI;

/// Intervals of the coarsest mesh used for terms solved numerically.
pub const LAMBDA_INTERVALS: usize = 4096;

type Term = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Terms `ũ_k` and their derivatives for one fixed ε.
#[derive(Clone)]
pub struct LambdaSeries {
    pub problem: NonlinearProblem,
    pub eps: f64,
    terms: Vec<Term>,
    derivs: Vec<Term>,
    /// Error estimates of numerically solved terms (zero for closed forms).
    pub term_errors: Vec<f64>,
}

impl core::fmt::Debug for LambdaSeries {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("LambdaSeries")
            .field("problem", &self.problem)
            .field("eps", &self.eps)
            .field("k_max", &self.k_max())
            .field("term_errors", &self.term_errors)
            .finish()
    }
}

impl LambdaSeries {
    pub fn k_max(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, k: usize, x: f64) -> f64 {
        (self.terms[k])(x)
    }

    pub fn term_derivative(&self, k: usize, x: f64) -> f64 {
        (self.derivs[k])(x)
    }

    pub fn partial_sum(&self, k: usize, x: f64) -> f64 {
        (0..=k).map(|j| self.term(j, x)).sum()
    }

    /// Partial sum through `k` as an approximation tied to this ε.
    pub fn approximation(&self, k: usize) -> Result<Approximation> {
        if k > self.k_max() {
            return Err(Error::ContractViolation(format!("term {k} beyond k_max={}", self.k_max())));
        }
        let me = self.clone();
        let eps0 = self.eps;
        Ok(Approximation::new("lambda", Truncation { k_max: Some(k), ..Truncation::default() }, move |x, eps| {
            if eps != eps0 {
                return Err(Error::ContractViolation(format!("lambda series built at eps={eps0}, evaluated at {eps}")));
            }
            Ok(me.partial_sum(k, x))
        })
        .with_eps_max(eps0))
    }

    /// Right-hand side of the linear problem for `ũ_k`, `k ≥ 2`:
    /// `ε ũ_k'' + ũ₀ ũ_k' + (ũ₀' − 1) ũ_k = −Σ_{i=1}^{k−1} ũ_i ũ'_{k−i}`,
    /// read off from the `O(λ^k)` balance of `ε u'' + u u' − u = 0`.
    pub fn forcing(&self, k: usize, x: f64) -> f64 {
        -(1..k).map(|i| self.term(i, x) * self.term_derivative(k - i, x)).sum::<f64>()
    }
}

/// Build `ũ₀ … ũ_{k_max}` (`k_max ≤ 2`) at fixed ε.
///
/// `ũ₀ = x + β − 1`; `ũ₁` is the error-function solution of
/// `ε ũ₁'' + ũ₀ ũ₁' = 0`; `ũ₂` is solved by finite differences.
pub fn lambda_series(alpha: f64, beta: f64, eps: f64, k_max: usize) -> Result<LambdaSeries> {
    let problem = NonlinearProblem::new(alpha, beta)?;
    if k_max > 2 {
        return Err(Error::ContractViolation(format!("k_max={k_max} above 2 is not supported")));
    }
    if !(eps > 0.0) {
        return Err(Error::ContractViolation(format!("eps={eps} must be positive")));
    }
    let mut series = LambdaSeries {
        problem,
        eps,
        terms: Vec::new(),
        derivs: Vec::new(),
        term_errors: Vec::new(),
    };
    let p = problem;
    series.terms.push(Arc::new(move |x| p.outer(x)));
    series.derivs.push(Arc::new(|_| 1.0));
    series.term_errors.push(0.0);
    if k_max == 0 {
        return Ok(series);
    }

    // erf(a) − erf(b) = erfc(b) − erfc(a), scaled by e^{(β−1)²/2ε}:
    // e^{−(A² − (β−1)²)/2ε} = e^{−F(x)/ε}.
    let s = sqrt(2.0 * eps);
    let e1 = decay(p.exponent(1.0) / eps);
    let tail = erfcx(beta / s) * e1;
    let den = erfcx((beta - 1.0) / s) - tail;
    let amp = alpha - beta + 1.0;
    series.terms.push(Arc::new(move |x| {
        if x >= 1.0 {
            return 0.0;
        }
        amp * (erfcx(p.outer(x) / s) * decay(p.exponent(x) / eps) - tail) / den
    }));
    series.derivs.push(Arc::new(move |x| -amp * FRAC_2_SQRT_PI / s * decay(p.exponent(x) / eps) / den));
    series.term_errors.push(0.0);

    for k in 2..=k_max {
        let snapshot = series.clone();
        let forcing = move |x: f64| snapshot.forcing(k, x);
        let slope = series.derivs[0].clone();
        let slope2 = slope.clone();
        let g = move |x: f64, u: f64, d: f64| p.outer(x) * d + (slope(x) - 1.0) * u - forcing(x);
        let dg = move |x: f64, _u: f64, _d: f64| (slope2(x) - 1.0, p.outer(x));
        let mut opts = BvpOptions::new(eps, 0.0, 0.0, LayerMap::for_layer(eps, beta - 1.0));
        opts.intervals = LAMBDA_INTERVALS;
        let sol = solve_bvp(&g, &dg, &|_| 0.0, &opts)?;
        let oracle = sol.oracle;
        series.term_errors.push(oracle.err_estimate);
        let o2 = oracle.clone();
        series.terms.push(Arc::new(move |x| oracle.eval(x)));
        series.derivs.push(Arc::new(move |x| {
            let h = 1e-4;
            let (a, b) = ((x - h).max(0.0), (x + h).min(1.0));
            (o2.eval(b) - o2.eval(a)) / (b - a)
        }));
    }
    Ok(series)
}
