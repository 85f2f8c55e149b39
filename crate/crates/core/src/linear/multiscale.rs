use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{exponent_poly, s_monomial, F1};
use crate::approx::{Approximation, Truncation};
use crate::error::{Error, Result};
use crate::math::{decay, diff1, FD_STEP};
use crate::poly::LaurentPoly;

/// Multiple-scales tables with `X = F(1)/ε` frozen as a parameter.
#[derive(Debug, Clone)]
pub struct MultiscaleCoeffs {
    pub w: Vec<LaurentPoly>,
    pub v: Vec<f64>,
    pub x_scaled: f64,
}

pub fn multiscale_coeffs(alpha: f64, beta: f64, x_scaled: f64, r_max: usize) -> Result<MultiscaleCoeffs> {
    let e = decay(x_scaled);
    let den = 1.0 - 3.0 * e;
    if den == 0.0 {
        return Err(Error::SingularParameter(format!("1 - 3e^(-X) = 0 at X={x_scaled}")));
    }
    let mut w = vec![s_monomial(3.0 * (beta - alpha * e) / den, -1)];
    let mut v = vec![(alpha - 3.0 * beta) / den];
    for _ in 1..=r_max {
        let dp = w.last().unwrap().derivative();
        let (d0, d1) = (dp.eval(0.0), dp.eval(1.0));
        let c = (d1 - 3.0 * e * d0) / den;
        w.push((&LaurentPoly::constant(c, 2.0, 1.0) - &dp).shift_power(-1));
        v.push((d0 - d1) / den);
    }
    Ok(MultiscaleCoeffs { w, v, x_scaled })
}

impl MultiscaleCoeffs {
    /// Largest violation of `(2x+1)W_r + W'_{r−1} = const`, `V_r` constant and
    /// the modified boundary data, over `points` uniform samples. Derivatives
    /// of `W_{r−1}` are taken by differences, independently of the recurrence.
    pub fn recurrence_residual(&self, alpha: f64, beta: f64, r: usize, points: usize) -> f64 {
        let e = decay(self.x_scaled);
        let w = &self.w[r];
        let dprev = |x: f64| if r == 0 { 0.0 } else { diff1(&|t| self.w[r - 1].eval(t), x, FD_STEP) };
        let c0 = w.eval(0.0) + dprev(0.0);
        let mut worst: f64 = 0.0;
        for k in 0..points {
            let x = k as f64 / (points - 1) as f64;
            worst = worst.max(((2.0 * x + 1.0) * w.eval(x) + dprev(x) - c0).abs());
        }
        let corner = if r == 0 { (alpha, beta) } else { (0.0, 0.0) };
        worst = worst.max((w.eval(0.0) + self.v[r] - corner.0).abs());
        worst.max((w.eval(1.0) + e * self.v[r] - corner.1).abs())
    }
}

/// Multiple-scales expansion `Σ W_r ε^r + e^{−F(x)/ε} Σ V_r ε^r` with `X = 2/ε`.
pub fn linear_multiscale(alpha: f64, beta: f64, r: usize) -> Approximation {
    let f = exponent_poly();
    Approximation::new("multiscale", Truncation::r(r), move |x, eps| {
        let c = multiscale_coeffs(alpha, beta, F1 / eps, r)?;
        let e = decay(f.eval(x) / eps);
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (w, v) in c.w.iter().zip(&c.v) {
            sum += pow * (w.eval(x) + e * v);
            pow *= eps;
        }
        Ok(sum)
    })
}
