//! Error functions and the real dilogarithm.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::{exp, ln, ln_1p};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `e^{x²} erfc(x)`.
///
/// Finite for every `x > -26`; below that `e^{x²}` overflows and the result
/// saturates to `f64::MAX`.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        if x < -26.0 {
            return f64::MAX;
        }
        return 2.0 * exp(x * x) - erfcx(-x);
    }
    if x < 5.0 {
        return exp(x * x) * erfc(x);
    }
    // Continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))), evaluated bottom-up.
    let mut tail = x;
    for k in (1..=60).rev() {
        tail = x + (k as f64 * 0.5) / tail;
    }
    FRAC_1_SQRT_PI / tail
}

fn dilog_series(t: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = t;
    for k in 1..400 {
        let kf = k as f64;
        let term = pow / (kf * kf);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        pow *= t;
    }
    sum
}

/// Real dilogarithm `Li₂(t) = Σ t^k / k²` on `(-1, 1)`.
///
/// Direct series on `|t| ≤ 1/2`, Euler reflection above, Landen's identity
/// below.
pub fn dilog(t: f64) -> Result<f64> {
    if !(t > -1.0 && t < 1.0) {
        return Err(Error::Domain { function: "dilog", value: t });
    }
    if t.abs() <= 0.5 {
        Ok(dilog_series(t))
    } else if t > 0.5 {
        Ok(PI * PI / 6.0 - ln(t) * ln_1p(-t) - dilog_series(1.0 - t))
    } else {
        let l = ln_1p(-t);
        Ok(-dilog_series(t / (t - 1.0)) - 0.5 * l * l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_limits() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(10.0) - 1.0).abs() <= 1e-15);
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-15);
    }

    #[test]
    fn erfcx_continuity_and_asymptotics() {
        let lo = exp(25.0) * erfc(5.0);
        let hi = erfcx(5.0);
        assert!(((lo - hi) / hi).abs() < 1e-13, "{lo} {hi}");
        let x: f64 = 40.0;
        let asym = FRAC_1_SQRT_PI / x * (1.0 - 0.5 / (x * x) + 0.75 / x.powi(4));
        assert!(((erfcx(x) - asym) / asym).abs() < 1e-8);
        assert!((erfcx(-1.0) - exp(1.0) * erfc(-1.0)).abs() < 1e-14);
    }

    #[test]
    fn dilog_reference_values() {
        let ln2 = core::f64::consts::LN_2;
        assert!((dilog(0.5).unwrap() - (PI * PI / 12.0 - ln2 * ln2 / 2.0)).abs() < 1e-15);
        let t: f64 = 1e-3;
        assert!((dilog(t).unwrap() - (t + t * t / 4.0 + t * t * t / 9.0)).abs() < 1e-12);
        // Values either side of the branch switches.
        assert!((dilog(-0.5).unwrap() - (-0.448_414_206_923_646_2)).abs() < 1e-14);
        assert!((dilog(0.9).unwrap() - 1.299_714_723_004_958_9).abs() < 1e-13);
        assert!((dilog(-0.9).unwrap() - (-0.752_163_179_217_261_6)).abs() < 1e-13);
    }

    #[test]
    fn dilog_domain() {
        assert!(matches!(dilog(1.0), Err(Error::Domain { .. })));
        assert!(dilog(-1.5).is_err());
        assert!(dilog(f64::NAN).is_err());
    }
}
