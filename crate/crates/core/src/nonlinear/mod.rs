//! Schemes for `ε u'' + u u' − u = 0`, `u(0) = α`, `u(1) = β`, `1 < β < α + 1`.

mod array;
mod closed;
mod exact;
mod kl;
mod lambda;

pub use array::{
    a0_n0_by_products, balance_residual, build_array, build_array_for, Families, ARRAY_R_MAX,
};
pub use closed::{negpow, negpow_correction, negpow_family_sum, n_resum, nonlinear_mae, nonlinear_wkb};
pub use exact::{nonlinear_exact, nonlinear_shooting, NonlinearOracle, EPS_FLOOR};
pub use kl::{g_gfun, gfun_taylor, h_gfun, kl_close, kl_coefficients, ClosedFamilies, KLCoefficients};
pub use lambda::{lambda_series, LambdaSeries};
