use alloc::format;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::numerics::quad::integrate;
use crate::poly::LaurentPoly;

/// `ε u'' + c(x) u' + d(x) u = 0` on `[0, 1]`, `u(0) = α`, `u(1) = β`.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    pub c: Coefficient,
    pub d: Coefficient,
    pub alpha: f64,
    pub beta: f64,
}

/// Points used to check sign conditions on the coefficients.
pub const VALIDATION_POINTS: usize = 1001;

impl LinearProblem {
    /// Validates `c > 0` and `d > 0` on a uniform grid.
    pub fn new(c: Coefficient, d: Coefficient, alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidProblem(format!("non-finite boundary data ({alpha}, {beta})")));
        }
        for k in 0..VALIDATION_POINTS {
            let x = k as f64 / (VALIDATION_POINTS - 1) as f64;
            let (cv, dv) = (c.value(x), d.value(x));
            if !(cv > 0.0) {
                return Err(Error::InvalidProblem(format!("c({x}) = {cv} is not positive")));
            }
            if !(dv > 0.0) {
                return Err(Error::InvalidProblem(format!("d({x}) = {dv} is not positive")));
            }
        }
        Ok(Self { c, d, alpha, beta })
    }

    /// `c = 2x + 1`, `d = 2`.
    pub fn pedagogical(alpha: f64, beta: f64) -> Result<Self> {
        let c = LaurentPoly::monomial(1.0, 1, 2.0, 1.0);
        let d = LaurentPoly::constant(2.0, 2.0, 1.0);
        Self::new(c.into(), d.into(), alpha, beta)
    }

    /// `F(x) = ∫₀ˣ c`.
    pub fn exponent(&self, x: f64) -> Result<f64> {
        let c = self.c.clone();
        Ok(integrate(move |t| c.value(t), 0.0, x, 1e-13)?.value)
    }
}

/// `ε u'' + u u' − u = 0` with `u(0) = α`, `u(1) = β`, `1 < β < α + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearProblem {
    pub alpha: f64,
    pub beta: f64,
}

impl NonlinearProblem {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && 1.0 < beta && beta < alpha + 1.0) {
            return Err(Error::Inadmissible { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Outer solution `x + β − 1`, also the exponent slope `F'`.
    pub fn outer(&self, x: f64) -> f64 {
        x + self.beta - 1.0
    }

    /// `F(x) = x²/2 + (β − 1)x`.
    pub fn exponent(&self, x: f64) -> f64 {
        0.5 * x * x + (self.beta - 1.0) * x
    }

    /// Amplitude `C = 2(α−β+1)(β−1)²/(α+β−1)` of the first exponential family.
    pub fn amplitude(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        2.0 * (a - b + 1.0) * (b - 1.0) * (b - 1.0) / (a + b - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pedagogical_exponent() {
        let p = LinearProblem::pedagogical(1.0, 0.0).unwrap();
        assert!((p.exponent(1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((p.exponent(0.5).unwrap() - 0.75).abs() < 1e-14);
    }

    #[test]
    fn sign_conditions_enforced() {
        let bad = Coefficient::from_fn(|x| x - 0.5);
        let e = LinearProblem::new(bad, Coefficient::constant(1.0), 0.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::InvalidProblem(_)));
        assert!(LinearProblem::new(Coefficient::constant(1.0), Coefficient::constant(0.0), 0.0, 0.0).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(NonlinearProblem::new(1.5, 2.0).is_ok());
        assert!(NonlinearProblem::new(1.5, 1.0).is_err());
        assert!(NonlinearProblem::new(1.5, 2.5).is_err());
        let p = NonlinearProblem::new(1.5, 2.0).unwrap();
        assert!((p.amplitude() - 0.4).abs() < 1e-15);
        assert_eq!(p.exponent(1.0), 1.5);
    }
}
