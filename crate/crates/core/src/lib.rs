//! Exponential-asymptotic (transseries) approximations for singularly
//! perturbed two-point boundary value problems on `[0, 1]`, together with the
//! numeric oracles used to judge them.
//!
//! Two model problems are covered:
//!
//! * the linear problem `ε u'' + (2x+1) u' + 2u = 0` and the general linear
//!   family `ε u'' + c(x) u' + d(x) u = 0` ([`linear`]);
//! * the nonlinear problem `ε u'' + u u' − u = 0` with `1 < β < α + 1`
//!   ([`nonlinear`]).
//!
//! Every scheme produces an [`Approximation`]. Ground truth comes from an
//! [`OracleSolution`], and [`analysis`] turns the two into error reports.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod approx;
pub mod coeff;
pub mod error;
pub mod linear;
pub mod math;
pub mod nonlinear;
pub mod numerics;
pub mod oracle;
pub mod poly;
pub mod problem;
pub mod transseries;

pub use approx::{Approximation, Truncation, Validity};
pub use coeff::Coefficient;
pub use error::{Error, Result};
pub use oracle::OracleSolution;
pub use poly::LaurentPoly;
pub use problem::{LinearProblem, NonlinearProblem};
pub use transseries::{eval_array, eval_ladder, rmin, TransseriesArray, TransseriesLadder};
