use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A caller broke a documented precondition (index bounds, argument range).
    ContractViolation(String),
    /// A transseries coefficient inside the requested truncation is not known.
    MissingCoefficient { n: usize, p: usize, r: i32 },
    /// Nonlinear boundary data outside `1 < β < α + 1`.
    Inadmissible { alpha: f64, beta: f64 },
    /// Linear problem data failing validation (e.g. `c(x) <= 0`).
    InvalidProblem(String),
    /// A parameter value at which a closed form divides by zero.
    SingularParameter(String),
    /// Vanishing Wronskian-type denominator when assembling two solutions.
    Resonance { denominator: f64, scale: f64 },
    /// Zero denominator of a resummed expression at an evaluation point.
    Pole { x: f64 },
    /// Special-function argument outside its supported domain.
    Domain { function: &'static str, value: f64 },
    /// An iterative kernel did not meet its tolerance.
    NonConvergence { kernel: &'static str, detail: String },
    /// Explicit integrator step size collapsed.
    Stiffness { t: f64, step: f64 },
    /// Mesh refinement did not behave like a second-order scheme.
    SolverAccuracy { ratio: f64 },
    /// The numeric reference solution could not be produced.
    OracleFailure(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ContractViolation(msg) => write!(f, "contract violation: {msg}"),
            Error::MissingCoefficient { n, p, r } => {
                write!(f, "coefficient a_{r}^({n},{p}) is not available in this array")
            }
            Error::Inadmissible { alpha, beta } => write!(
                f,
                "boundary data alpha={alpha}, beta={beta} violate 1 < beta < alpha + 1"
            ),
            Error::InvalidProblem(msg) => write!(f, "invalid problem: {msg}"),
            Error::SingularParameter(msg) => write!(f, "singular parameter: {msg}"),
            Error::Resonance { denominator, scale } => write!(
                f,
                "resonant boundary value problem: denominator {denominator:e} at scale {scale:e}"
            ),
            Error::Pole { x } => write!(f, "resummation denominator vanishes at x={x}"),
            Error::Domain { function, value } => {
                write!(f, "{function} argument {value} outside supported domain")
            }
            Error::NonConvergence { kernel, detail } => {
                write!(f, "{kernel} did not converge: {detail}")
            }
            Error::Stiffness { t, step } => {
                write!(f, "step size underflow (h={step:e}) at t={t}; problem too stiff")
            }
            Error::SolverAccuracy { ratio } => write!(
                f,
                "mesh refinement ratio {ratio:.3} outside [3.5, 4.5]; discretization not in asymptotic regime"
            ),
            Error::OracleFailure(msg) => write!(f, "oracle failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
