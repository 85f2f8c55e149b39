use alloc::format;

use crate::approx::{Approximation, Truncation, Validity};
use crate::error::{Error, Result};
use crate::math::{decay, tanh};
use crate::problem::NonlinearProblem;

/// Composite matched expansion with a `tanh` inner solution.
pub fn nonlinear_mae(alpha: f64, beta: f64) -> Result<Approximation> {
    NonlinearProblem::new(alpha, beta)?;
    let k = beta - 1.0;
    Ok(Approximation::new("mae", Truncation::r(0), move |x, eps| {
        let t = tanh(k * x / (2.0 * eps));
        Ok(x + k * (k * t + alpha) / (k + alpha * t))
    }))
}

/// Outer solution plus one exponential with the WKB amplitude.
pub fn nonlinear_wkb(alpha: f64, beta: f64) -> Result<Approximation> {
    let p = NonlinearProblem::new(alpha, beta)?;
    Ok(Approximation::new("wkb", Truncation::r(0), move |x, eps| {
        let a = p.outer(x);
        Ok(a + (1.0 + alpha - beta) * (beta - 1.0) / a * decay(p.exponent(x) / eps))
    }))
}

/// Denominator `2a₀^(0,0) − a₀^(1,0) e^{−F/ε}` of the n-resummation.
fn resum_denominator(p: &NonlinearProblem, x: f64, eps: f64) -> f64 {
    let a = p.outer(x);
    2.0 * a - p.amplitude() / a * decay(p.exponent(x) / eps)
}

/// Geometric resummation over `n` of the `p = 0` row:
/// `A + 2AB e^{−F/ε} / (2A − B e^{−F/ε})`, `A = x+β−1`, `B = C/A`.
pub fn n_resum(alpha: f64, beta: f64) -> Result<Approximation> {
    let p = NonlinearProblem::new(alpha, beta)?;
    let c = p.amplitude();
    Ok(Approximation::new("n-resum", Truncation { r: Some(0), p: Some(0), ..Truncation::default() }, move |x, eps| {
        let a = p.outer(x);
        let b = c / a;
        let e = decay(p.exponent(x) / eps);
        let den = 2.0 * a - b * e;
        if den == 0.0 {
            return Err(Error::Pole { x });
        }
        Ok(a + 2.0 * a * b * e / den)
    })
    .with_validity(move |eps| {
        let d0 = resum_denominator(&p, 0.0, eps);
        for k in 1..=200 {
            let x = k as f64 / 200.0;
            let d = resum_denominator(&p, x, eps);
            if d.signum() != d0.signum() || d == 0.0 {
                return Validity::Warning(format!("resummation denominator changes sign near x={x}"));
            }
        }
        Validity::Valid
    }))
}

/// Sum over `n` of the `1/ε` terms `a₋₁^(n,1) e^{−(nF(x)+F(1))/ε}/ε`:
/// `4 M A² e^{−(F(x)+F(1))/ε} / (ε (2A − B e^{−F/ε})²)`, `M = a₋₁^(1,1)`.
pub fn negpow_correction(alpha: f64, beta: f64) -> Result<Approximation> {
    let p = NonlinearProblem::new(alpha, beta)?;
    let c = p.amplitude();
    Ok(Approximation::new("negpow-correction", Truncation { r: Some(0), p: Some(1), ..Truncation::default() }, move |x, eps| {
        let a = p.outer(x);
        let b = c / a;
        let m = c * c * x / (beta * a);
        let e = decay(p.exponent(x) / eps);
        let den = 2.0 * a - b * e;
        if den == 0.0 {
            return Err(Error::Pole { x });
        }
        let e_both = decay((p.exponent(x) + p.exponent(1.0)) / eps);
        Ok(4.0 * m * a * a * e_both / (eps * den * den))
    }))
}

/// Direct partial sum of the same family through `n_max`, for checking the
/// closed form.
pub fn negpow_family_sum(alpha: f64, beta: f64, x: f64, eps: f64, n_max: usize) -> Result<f64> {
    let p = NonlinearProblem::new(alpha, beta)?;
    let c = p.amplitude();
    let a = p.outer(x);
    let q = c / (2.0 * a * a);
    let m = c * c * x / (beta * a);
    let e = decay(p.exponent(x) / eps);
    let e1 = decay(p.exponent(1.0) / eps);
    let mut sum = 0.0;
    let mut qe = 1.0;
    for n in 1..=n_max {
        sum += n as f64 * qe * e * m / eps * e1;
        qe *= q * e;
    }
    Ok(sum)
}

/// n-resummation plus the `1/ε` correction.
pub fn negpow(alpha: f64, beta: f64) -> Result<Approximation> {
    let base = n_resum(alpha, beta)?;
    let corr = negpow_correction(alpha, beta)?;
    let mut s = base.plus(&corr, "negpow");
    s.order = Truncation { r: Some(0), p: Some(1), ..Truncation::default() };
    Ok(s)
}
