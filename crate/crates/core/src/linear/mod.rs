//! Schemes for `ε u'' + (2x+1) u' + 2u = 0` and the general linear family.

mod closed;
mod exact;
mod general;
mod ladder;
mod multiscale;

pub use closed::{linear_mae, linear_psum, linear_wkb, psum_ratio, wkb_coefficients, wkb_coefficients_fd};
pub use exact::{linear_exact, linear_fd_oracle};
pub use general::general_linear_assemble;
pub use ladder::{ladder_coefficients, linear_ladder, LadderCoefficients};
pub use multiscale::{linear_multiscale, multiscale_coeffs, MultiscaleCoeffs};

use crate::poly::LaurentPoly;

/// `s = 2x + 1`, the natural variable of the pedagogical problem.
pub(crate) fn s_monomial(c: f64, power: i32) -> LaurentPoly {
    LaurentPoly::monomial(c, power, 2.0, 1.0)
}

/// `F(x) = x² + x`.
pub(crate) fn exponent_poly() -> LaurentPoly {
    LaurentPoly { scale: 1.0, shift: 0.0, low: 1, coeffs: alloc::vec![1.0, 1.0] }
}

pub(crate) const F1: f64 = 2.0;
