//! Numeric kernels shared by the approximation schemes and the oracles.

pub mod bvp;
pub mod mesh;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod special;

pub use bvp::{solve_bvp, BvpOptions, BvpSolution, NewtonTrace};
pub use mesh::LayerMap;
pub use ode::{ode_ivp, DenseSolution, OdeOptions};
pub use quad::{integrate, integrate_with, try_integrate, QuadOptions, QuadratureResult};
pub use special::{dilog, erf, erfc, erfcx};
