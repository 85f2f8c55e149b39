//! Evaluable coefficient functions of `x`.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::math::{diff1, diff2, FD_STEP};
use crate::poly::LaurentPoly;

pub trait CoefficientFn: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// `order`-th derivative; defaults to five-point central differences.
    fn derivative(&self, order: usize, x: f64) -> f64 {
        let f = |t: f64| self.value(t);
        match order {
            0 => self.value(x),
            1 => diff1(&f, x, FD_STEP),
            2 => diff2(&f, x, 1e-3),
            _ => {
                let g = |t: f64| self.derivative(order - 1, t);
                diff1(&g, x, 1e-3)
            }
        }
    }

    fn has_analytic_derivative(&self) -> bool {
        false
    }

    fn closed_form(&self) -> Option<String> {
        None
    }
}

impl CoefficientFn for LaurentPoly {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }

    fn derivative(&self, order: usize, x: f64) -> f64 {
        self.nth_derivative(order).eval(x)
    }

    fn has_analytic_derivative(&self) -> bool {
        true
    }

    fn closed_form(&self) -> Option<String> {
        Some(self.describe())
    }
}

struct Closure<F> {
    f: F,
    label: Option<String>,
}

impl<F: Fn(f64) -> f64 + Send + Sync> CoefficientFn for Closure<F> {
    fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn closed_form(&self) -> Option<String> {
        self.label.clone()
    }
}

struct Scaled {
    inner: Coefficient,
    factor: f64,
}

impl CoefficientFn for Scaled {
    fn value(&self, x: f64) -> f64 {
        self.factor * self.inner.value(x)
    }

    fn derivative(&self, order: usize, x: f64) -> f64 {
        self.factor * self.inner.derivative(order, x)
    }

    fn has_analytic_derivative(&self) -> bool {
        self.inner.has_analytic_derivative()
    }
}

/// Shared handle to a coefficient function.
#[derive(Clone)]
pub struct Coefficient(Arc<dyn CoefficientFn>);

impl Coefficient {
    pub fn new(f: impl CoefficientFn + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(Closure { f, label: None })
    }

    pub fn labelled(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(Closure { f, label: Some(label.into()) })
    }

    pub fn constant(c: f64) -> Self {
        Self::new(LaurentPoly::constant(c, 1.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.0.value(x)
    }

    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        self.0.derivative(order, x)
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.0.has_analytic_derivative()
    }

    pub fn closed_form(&self) -> Option<String> {
        self.0.closed_form()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(Scaled { inner: self.clone(), factor })
    }
}

impl From<LaurentPoly> for Coefficient {
    fn from(p: LaurentPoly) -> Self {
        Self::new(p)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.closed_form() {
            Some(s) => write!(f, "Coefficient({s})"),
            None => f.write_str("Coefficient(<fn>)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_derivatives_by_differences() {
        let c = Coefficient::from_fn(|x| 3.0 / (2.0 * x + 1.0));
        assert!(!c.has_analytic_derivative());
        let exact = -6.0 / (1.6f64).powi(2);
        assert!((c.derivative(1, 0.3) - exact).abs() < 1e-10);
        let exact2 = 24.0 / (1.6f64).powi(3);
        assert!((c.derivative(2, 0.3) - exact2).abs() < 1e-7);
    }

    #[test]
    fn laurent_coefficient_is_analytic() {
        let c: Coefficient = LaurentPoly::monomial(3.0, -1, 2.0, 1.0).into();
        assert!(c.has_analytic_derivative());
        assert_eq!(c.derivative(1, 0.5), -1.5);
        assert!(c.closed_form().unwrap().contains("t^-1"));
        assert_eq!(c.scaled(2.0).value(0.5), 3.0);
    }
}
