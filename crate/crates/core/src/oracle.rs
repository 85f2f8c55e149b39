use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Dense numeric reference solution on `[0, 1]`.
#[derive(Clone)]
pub struct OracleSolution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Estimated max absolute error of [`OracleSolution::eval`].
    pub err_estimate: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    interpolant: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl OracleSolution {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<f64>,
        err_estimate: f64,
        (alpha, beta): (f64, f64),
        eps: f64,
        interpolant: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Self {
        Self { grid, values, err_estimate, alpha, beta, eps, interpolant }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.interpolant)(x)
    }

    /// Larger of the two boundary mismatches `|u(0) − α|`, `|u(1) − β|`.
    pub fn boundary_mismatch(&self) -> f64 {
        (self.eval(0.0) - self.alpha).abs().max((self.eval(1.0) - self.beta).abs())
    }
}

impl fmt::Debug for OracleSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleSolution")
            .field("points", &self.grid.len())
            .field("err_estimate", &self.err_estimate)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("eps", &self.eps)
            .finish()
    }
}
