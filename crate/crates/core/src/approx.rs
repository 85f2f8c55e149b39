use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use crate::error::{Error, Result};
use crate::oracle::OracleSolution;

/// Truncation metadata: which indices a scheme was cut at.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Truncation {
    pub r: Option<usize>,
    pub p: Option<usize>,
    pub n: Option<usize>,
    pub k_max: Option<usize>,
}

impl Truncation {
    pub fn r(r: usize) -> Self {
        Self { r: Some(r), ..Self::default() }
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, v) in [("R", self.r), ("P", self.p), ("N", self.n), ("kmax", self.k_max)] {
            if let Some(v) = v {
                if !first {
                    f.write_str(",")?;
                }
                write!(f, "{name}={v}")?;
                first = false;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Warning(String),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

type EvalFn = dyn Fn(f64, f64) -> Result<f64> + Send + Sync;
type ValidityFn = dyn Fn(f64) -> Validity + Send + Sync;

/// An evaluable approximation `(x, ε) ↦ u(x; ε)` with its provenance.
#[derive(Clone)]
pub struct Approximation {
    pub method: String,
    pub order: Truncation,
    /// Largest ε at which `eval` is guaranteed to be finite.
    pub eps_max: f64,
    eval: Arc<EvalFn>,
    validity: Arc<ValidityFn>,
}

impl Approximation {
    pub fn new(
        method: impl Into<String>,
        order: Truncation,
        eval: impl Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            method: method.into(),
            order,
            eps_max: f64::INFINITY,
            eval: Arc::new(eval),
            validity: Arc::new(|_| Validity::Valid),
        }
    }

    pub fn with_validity(mut self, v: impl Fn(f64) -> Validity + Send + Sync + 'static) -> Self {
        self.validity = Arc::new(v);
        self
    }

    pub fn with_eps_max(mut self, eps_max: f64) -> Self {
        self.eps_max = eps_max;
        self
    }

    /// Evaluate at `x ∈ [0, 1]`, `0 < ε ≤ eps_max`.
    pub fn eval(&self, x: f64, eps: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::ContractViolation(format!("{}: x={x} outside [0, 1]", self.method)));
        }
        if !(eps > 0.0 && eps <= self.eps_max) {
            return Err(Error::ContractViolation(format!(
                "{}: eps={eps} outside (0, {}]",
                self.method, self.eps_max
            )));
        }
        (self.eval)(x, eps)
    }

    pub fn validity(&self, eps: f64) -> Validity {
        (self.validity)(eps)
    }

    /// Pointwise sum, e.g. a resummation plus its correction.
    pub fn plus(&self, other: &Approximation, method: impl Into<String>) -> Approximation {
        let (a, b) = (self.clone(), other.clone());
        let (va, vb) = (self.validity.clone(), other.validity.clone());
        Approximation::new(method, self.order, move |x, eps| Ok(a.eval(x, eps)? + b.eval(x, eps)?))
            .with_eps_max(self.eps_max.min(other.eps_max))
            .with_validity(move |eps| match va(eps) {
                Validity::Valid => vb(eps),
                w => w,
            })
    }

    /// The oracle's interpolant viewed as an approximation at its own ε.
    pub fn from_oracle(oracle: &OracleSolution) -> Approximation {
        let o = oracle.clone();
        let eps0 = oracle.eps;
        Approximation::new("oracle", Truncation::default(), move |x, eps| {
            if eps != eps0 {
                return Err(Error::ContractViolation(format!("oracle built at eps={eps0}, evaluated at {eps}")));
            }
            Ok(o.eval(x))
        })
    }
}

impl fmt::Debug for Approximation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Approximation")
            .field("method", &self.method)
            .field("order", &self.order)
            .field("eps_max", &self.eps_max)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_checks_domain() {
        let a = Approximation::new("id", Truncation::default(), |x, _| Ok(x)).with_eps_max(2.0);
        assert_eq!(a.eval(0.5, 1.0).unwrap(), 0.5);
        assert!(a.eval(1.5, 1.0).is_err());
        assert!(a.eval(0.5, 0.0).is_err());
        assert!(a.eval(0.5, 3.0).is_err());
    }

    #[test]
    fn sum_combines_validity() {
        let a = Approximation::new("a", Truncation::r(0), |x, _| Ok(x));
        let b = Approximation::new("b", Truncation::r(0), |_, _| Ok(1.0))
            .with_validity(|e| if e > 1.0 { Validity::Warning("big".into()) } else { Validity::Valid });
        let s = a.plus(&b, "a+b");
        assert_eq!(s.eval(0.25, 2.0).unwrap(), 1.25);
        assert!(!s.validity(2.0).is_valid());
        assert!(s.validity(0.5).is_valid());
        assert_eq!(format!("{}", Truncation { r: Some(1), p: Some(4), ..Truncation::default() }), "R=1,P=4");
    }
}
