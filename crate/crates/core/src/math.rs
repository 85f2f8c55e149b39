//! Thin `libm` wrappers plus the saturating exponential used everywhere an
//! exponent may be extreme.

/// Largest magnitude of exponent passed to the hardware exponential.
pub const EXP_LIMIT: f64 = 745.0;

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `e^z` with saturation: exactly `0.0` below `-EXP_LIMIT`, `f64::MAX` where the
/// result would overflow. Never produces an infinity or raises underflow.
#[inline]
pub fn exp_sat(z: f64) -> f64 {
    if z < -EXP_LIMIT {
        0.0
    } else if z > 709.0 {
        if z > 709.78 {
            f64::MAX
        } else {
            libm::exp(z)
        }
    } else {
        libm::exp(z)
    }
}

/// `e^{-a}` for `a >= 0` with the same flush-to-zero rule as [`exp_sat`].
#[inline]
pub fn decay(a: f64) -> f64 {
    exp_sat(-a)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if abs(v) > m { abs(v) } else { m })
}

/// Default step for first derivatives by central differences.
pub const FD_STEP: f64 = 1e-4;

/// Five-point central first derivative, error `O(h^4)`.
pub fn diff1(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Five-point central second derivative, error `O(h^4)`.
///
/// Round-off scales like `1e-16 / h^2`, so callers use a larger step than for
/// [`diff1`].
pub fn diff2(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
        / (12.0 * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturating_exponential_never_overflows() {
        assert_eq!(exp_sat(-750.0), 0.0);
        assert_eq!(exp_sat(-1e300), 0.0);
        assert_eq!(exp_sat(800.0), f64::MAX);
        assert!(exp_sat(709.5).is_finite());
        assert_eq!(decay(0.0), 1.0);
    }

    #[test]
    fn finite_differences_on_exponential() {
        let f = |x: f64| exp(x);
        assert!((diff1(&f, 0.3, FD_STEP) - exp(0.3)).abs() < 1e-11);
        assert!((diff2(&f, 0.3, 1e-3) - exp(0.3)).abs() < 1e-9);
    }
}
