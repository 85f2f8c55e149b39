//! Bracketed scalar root finding.

use alloc::format;

use crate::error::{Error, Result};

/// Bisection on a sign-changing bracket `[a, b]`.
///
/// Stops when the bracket is shorter than `xtol` or an exact zero is hit.
pub fn bisect(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::ContractViolation(format!(
            "bisection bracket [{a}, {b}] has no sign change ({fa:e}, {fb:e})"
        )));
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Err(Error::NonConvergence {
        kernel: "bisection",
        detail: format!("bracket [{a}, {b}] still wider than {xtol:e} after {max_iter} halvings"),
    })
}

/// Grow `[a, b]` geometrically about its midpoint until `f` changes sign.
pub fn expand_bracket(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tries: usize) -> Result<(f64, f64)> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    for _ in 0..tries {
        if fa.signum() != fb.signum() {
            return Ok((a, b));
        }
        let w = b - a;
        a -= w;
        b += w;
        fa = f(a)?;
        fb = f(b)?;
    }
    Err(Error::NonConvergence { kernel: "bracket search", detail: format!("no sign change found in [{a}, {b}]") })
}
