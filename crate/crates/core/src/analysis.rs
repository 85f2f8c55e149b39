//! Error metrics and experiment drivers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::approx::{Approximation, Truncation, Validity};
use crate::error::{Error, Result};
use crate::linear::{general_linear_assemble, linear_exact, linear_fd_oracle, linear_ladder, linear_mae, linear_multiscale, linear_psum, linear_wkb, psum_ratio};
use crate::nonlinear::{build_array, lambda_series, n_resum, negpow, nonlinear_exact, nonlinear_mae, nonlinear_wkb, ARRAY_R_MAX};
use crate::numerics::quad::{try_integrate, QuadOptions};
use crate::oracle::OracleSolution;
use crate::problem::{LinearProblem, NonlinearProblem};
use crate::transseries::{eval_array, eval_ladder};

/// Integrated error `∫₀¹ |u_exact − u_approx| dx`.
///
/// The interval is pre-split at multiples of ε so the boundary layer is
/// resolved even when the absolute floor stops refinement early.
pub fn integrated_error(approx: &Approximation, oracle: &OracleSolution, eps: f64) -> Result<f64> {
    if oracle.eps != eps {
        return Err(Error::ContractViolation(format!("oracle built at eps={}, compared at {eps}", oracle.eps)));
    }
    let mut cuts: Vec<f64> = alloc::vec![0.0];
    for k in [0.125, 0.5, 2.0, 8.0] {
        if k * eps < 1.0 {
            cuts.push(k * eps);
        }
    }
    cuts.push(1.0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let opts = QuadOptions { rel_tol: 1e-8, abs_tol: 1e-12 * (w[1] - w[0]), ..QuadOptions::default() };
        total += try_integrate(|x| Ok((oracle.eval(x) - approx.eval(x, eps)?).abs()), w[0], w[1], opts)?.value;
    }
    Ok(total)
}

/// Percentage relative errors `100|1 − u_approx/u_exact|` on a grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ErrorCurve {
    pub points: Vec<(f64, f64)>,
    /// Abscissae skipped because `|u_exact| < 1e−12`.
    pub excluded: Vec<f64>,
}

impl ErrorCurve {
    pub fn max(&self) -> f64 {
        self.points.iter().fold(0.0, |m, &(_, e)| m.max(e))
    }

    pub fn at(&self, x: f64) -> Option<f64> {
        self.points.iter().find(|p| p.0 == x).map(|p| p.1)
    }
}

pub fn relative_error_curve(approx: &Approximation, oracle: &OracleSolution, eps: f64, grid: &[f64]) -> Result<ErrorCurve> {
    let mut curve = ErrorCurve::default();
    for &x in grid {
        let u = oracle.eval(x);
        if u.abs() < 1e-12 {
            curve.excluded.push(x);
            continue;
        }
        curve.points.push((x, 100.0 * (1.0 - approx.eval(x, eps)? / u).abs()));
    }
    Ok(curve)
}

pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![0.0],
        _ => (0..points).map(|k| if k + 1 == points { 1.0 } else { k as f64 / (points - 1) as f64 }).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub eps: f64,
    pub method: String,
    pub delta: f64,
    pub boundary_residual_0: f64,
    pub boundary_residual_1: f64,
    pub pointwise: ErrorCurve,
    pub validity: Validity,
    pub oracle_err_estimate: f64,
}

pub fn error_report(approx: &Approximation, oracle: &OracleSolution, eps: f64, grid: &[f64]) -> Result<ErrorReport> {
    Ok(ErrorReport {
        eps,
        method: approx.method.clone(),
        delta: integrated_error(approx, oracle, eps)?,
        boundary_residual_0: (approx.eval(0.0, eps)? - oracle.alpha).abs(),
        boundary_residual_1: (approx.eval(1.0, eps)? - oracle.beta).abs(),
        pointwise: relative_error_curve(approx, oracle, eps, grid)?,
        validity: approx.validity(eps),
        oracle_err_estimate: oracle.err_estimate,
    })
}

#[derive(Debug, Clone)]
pub enum ProblemKind {
    Linear { alpha: f64, beta: f64 },
    Nonlinear(NonlinearProblem),
    GeneralLinear(LinearProblem),
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Linear { .. } => "linear",
            ProblemKind::Nonlinear(_) => "nonlinear",
            ProblemKind::GeneralLinear(_) => "general-linear",
        }
    }

    pub fn boundary(&self) -> (f64, f64) {
        match self {
            ProblemKind::Linear { alpha, beta } => (*alpha, *beta),
            ProblemKind::Nonlinear(p) => (p.alpha, p.beta),
            ProblemKind::GeneralLinear(p) => (p.alpha, p.beta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mae,
    Wkb,
    Ladder,
    Psum,
    Multiscale,
    NResum,
    Negpow,
    Lambda,
    Assemble,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Mae,
        Method::Wkb,
        Method::Ladder,
        Method::Psum,
        Method::Multiscale,
        Method::NResum,
        Method::Negpow,
        Method::Lambda,
        Method::Assemble,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mae => "mae",
            Method::Wkb => "wkb",
            Method::Ladder => "ladder",
            Method::Psum => "psum",
            Method::Multiscale => "multiscale",
            Method::NResum => "n-resum",
            Method::Negpow => "negpow",
            Method::Lambda => "lambda",
            Method::Assemble => "assemble",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| Error::ContractViolation(format!("unknown method '{s}'; valid methods: {}", Self::valid_names())))
    }
}

/// Truncation parameters shared by all schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodParams {
    pub r: usize,
    pub p: usize,
    pub n: usize,
    pub k_max: usize,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self { r: 1, p: 4, n: 12, k_max: 2 }
    }
}

fn unavailable(method: Method, problem: &ProblemKind) -> Error {
    Error::ContractViolation(format!("method '{method}' is not available for the {} problem", problem.name()))
}

/// Build one approximation. Schemes that are solved numerically (λ-series,
/// two-solution assembly) are tied to `eps`.
pub fn build_approximation(problem: &ProblemKind, method: Method, params: MethodParams, eps: f64) -> Result<Approximation> {
    match problem {
        ProblemKind::Linear { alpha, beta } => {
            let (alpha, beta) = (*alpha, *beta);
            match method {
                Method::Mae => Ok(linear_mae(alpha, beta)),
                Method::Wkb => Ok(linear_wkb(alpha, beta, params.r)),
                Method::Psum => Ok(linear_psum(alpha, beta)),
                Method::Multiscale => Ok(linear_multiscale(alpha, beta, params.r)),
                Method::Ladder => {
                    let ladder = linear_ladder(alpha, beta, params.r, params.p);
                    let (r, p) = (params.r, params.p);
                    Ok(Approximation::new("ladder", Truncation { r: Some(r), p: Some(p), ..Truncation::default() }, move |x, e| {
                        eval_ladder(&ladder, x, e, r, p)
                    })
                    .with_validity(|e| {
                        let q = psum_ratio(e);
                        if q >= 1.0 {
                            Validity::Warning(format!("ladder ratio 3e^(-2/eps) = {q:.4} >= 1: p-series diverges"))
                        } else {
                            Validity::Valid
                        }
                    }))
                }
                Method::Assemble => general_linear_assemble(&LinearProblem::pedagogical(alpha, beta)?, eps),
                _ => Err(unavailable(method, problem)),
            }
        }
        ProblemKind::Nonlinear(p) => {
            let (alpha, beta) = (p.alpha, p.beta);
            match method {
                Method::Mae => nonlinear_mae(alpha, beta),
                Method::Wkb => nonlinear_wkb(alpha, beta),
                Method::NResum => n_resum(alpha, beta),
                Method::Negpow => negpow(alpha, beta),
                Method::Lambda => lambda_series(alpha, beta, eps, params.k_max)?.approximation(params.k_max),
                Method::Ladder => {
                    if params.r as i32 > ARRAY_R_MAX {
                        return Err(Error::ContractViolation(format!("array truncation R={} exceeds stored R={ARRAY_R_MAX}", params.r)));
                    }
                    let arr = build_array(alpha, beta, params.n, params.p)?;
                    let (r, n, pp) = (params.r as i32, params.n, params.p);
                    // Surface missing coefficients at build time.
                    eval_array(&arr, 0.5, eps, r, n, pp)?;
                    Ok(Approximation::new("ladder", Truncation { r: Some(params.r), p: Some(pp), n: Some(n), k_max: None }, move |x, e| {
                        eval_array(&arr, x, e, r, n, pp)
                    }))
                }
                _ => Err(unavailable(method, problem)),
            }
        }
        ProblemKind::GeneralLinear(lp) => match method {
            Method::Assemble => general_linear_assemble(lp, eps),
            _ => Err(unavailable(method, problem)),
        },
    }
}

pub fn build_oracle(problem: &ProblemKind, eps: f64) -> Result<OracleSolution> {
    match problem {
        ProblemKind::Linear { alpha, beta } => linear_exact(*alpha, *beta, eps),
        ProblemKind::Nonlinear(p) => Ok(nonlinear_exact(p.alpha, p.beta, eps)?.solution.oracle),
        ProblemKind::GeneralLinear(lp) => Ok(linear_fd_oracle(lp, eps)?.oracle),
    }
}

/// All method reports at one ε, sharing one oracle.
pub fn sweep_point(problem: &ProblemKind, methods: &[Method], params: MethodParams, eps: f64, grid_points: usize) -> Result<Vec<ErrorReport>> {
    if methods.is_empty() {
        return Ok(Vec::new());
    }
    let oracle = build_oracle(problem, eps).map_err(|e| match e {
        Error::OracleFailure(_) => e,
        other => Error::OracleFailure(other.to_string()),
    })?;
    let grid = uniform_grid(grid_points);
    methods
        .iter()
        .map(|&m| error_report(&build_approximation(problem, m, params, eps)?, &oracle, eps, &grid))
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub eps: f64,
    /// Reports in method order, or the reason the entry failed.
    pub outcome: core::result::Result<Vec<ErrorReport>, Error>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub eps_grid: Vec<f64>,
    pub methods: Vec<Method>,
    pub entries: Vec<SweepEntry>,
}

/// Sequential sweep; a failure at one ε marks that entry and the sweep
/// continues.
pub fn eps_sweep(problem: &ProblemKind, methods: &[Method], params: MethodParams, eps_grid: &[f64], grid_points: usize) -> SweepResult {
    let entries = if methods.is_empty() {
        Vec::new()
    } else {
        eps_grid
            .iter()
            .map(|&eps| SweepEntry { eps, outcome: sweep_point(problem, methods, params, eps, grid_points) })
            .collect()
    };
    SweepResult { eps_grid: eps_grid.to_vec(), methods: methods.to_vec(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        let e = "bogus".parse::<Method>().unwrap_err().to_string();
        assert!(e.contains("n-resum") && e.contains("psum"));
    }

    #[test]
    fn self_comparison_is_within_oracle_error() {
        let o = linear_exact(1.0, 0.0, 0.5).unwrap();
        let a = Approximation::from_oracle(&o);
        assert!(integrated_error(&a, &o, 0.5).unwrap() <= o.err_estimate);
        let c = relative_error_curve(&a, &o, 0.5, &uniform_grid(11)).unwrap();
        assert!(c.max() == 0.0);
    }

    #[test]
    fn zero_function_measures_solution_size() {
        let o = linear_exact(1.0, 0.0, 1.0).unwrap();
        let z = Approximation::new("zero", Truncation::default(), |_, _| Ok(0.0));
        let d = integrated_error(&z, &o, 1.0).unwrap();
        assert!(d > 0.0);
        let neg = Approximation::new("neg", Truncation::default(), {
            let o = o.clone();
            move |x, _| Ok(2.0 * o.eval(x))
        });
        assert!((integrated_error(&neg, &o, 1.0).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn empty_methods_give_empty_sweep() {
        let s = eps_sweep(&ProblemKind::Linear { alpha: 1.0, beta: 0.0 }, &[], MethodParams::default(), &[0.5], 11);
        assert!(s.entries.is_empty());
    }

    #[test]
    fn unavailable_methods_rejected() {
        let p = ProblemKind::Linear { alpha: 1.0, beta: 0.0 };
        assert!(build_approximation(&p, Method::NResum, MethodParams::default(), 0.5).is_err());
        let q = ProblemKind::Nonlinear(NonlinearProblem::new(1.5, 2.0).unwrap());
        let e = build_approximation(&q, Method::Ladder, MethodParams::default(), 0.5).unwrap_err();
        assert!(matches!(e, Error::MissingCoefficient { .. }), "{e}");
        let ok = MethodParams { r: 0, p: 1, ..MethodParams::default() };
        assert!(build_approximation(&q, Method::Ladder, ok, 0.5).is_ok());
    }
}
