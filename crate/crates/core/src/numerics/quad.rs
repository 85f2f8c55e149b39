//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use alloc::collections::BinaryHeap;
use alloc::format;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math::abs;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any single panel.
    pub max_depth: u32,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 0.0, max_depth: 60, max_panels: 20_000 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<E>(f: &mut impl FnMut(f64) -> core::result::Result<f64, E>, a: f64, b: f64) -> core::result::Result<(f64, f64), E> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = abs(kron);
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        kron += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (abs(f1) + abs(f2));
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * h;
    let mut err = abs((kron - gauss) * h);
    let floor = 50.0 * f64::EPSILON * abs(resabs * h);
    if err < floor {
        err = floor;
    }
    Ok((value, err))
}

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_with(f, a, b, QuadOptions { rel_tol, ..QuadOptions::default() })
}

pub fn integrate_with(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<QuadratureResult> {
    try_integrate(|x| Ok(f(x)), a, b, opts)
}

/// Like [`integrate_with`] for integrands that can fail; the first error is
/// returned unchanged.
pub fn try_integrate(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<QuadratureResult> {
    if !(a <= b) {
        return Err(Error::ContractViolation(format!("integration bounds a={a} > b={b}")));
    }
    if !(opts.rel_tol >= 1e-14) && opts.abs_tol <= 0.0 {
        return Err(Error::ContractViolation(format!("rel_tol {} below 1e-14", opts.rel_tol)));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, err_estimate: 0.0, evaluations: 0 });
    }
    let mut evaluations = 15;
    let (v, e) = gk15(&mut f, a, b)?;
    let mut total = v;
    let mut total_err = e;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, err: e, depth: 0 });
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * abs(total));
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= opts.max_depth || heap.len() >= opts.max_panels {
            return Err(Error::NonConvergence {
                kernel: "adaptive quadrature",
                detail: format!(
                    "subdivision limit reached near [{}, {}]; estimate {total:e} with error {total_err:e}",
                    worst.a, worst.b
                ),
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&mut f, worst.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, worst.b)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { a: worst.a, b: mid, value: v1, err: e1, depth: worst.depth + 1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, err: e2, depth: worst.depth + 1 });
    }
    // Re-sum to shed drift from the running updates.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.err).sum();
    if !value.is_finite() {
        return Err(Error::NonConvergence { kernel: "adaptive quadrature", detail: format!("non-finite value {value}") });
    }
    Ok(QuadratureResult { value, err_estimate: err, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    #[test]
    fn linear_integrand() {
        let r = integrate(|t| 2.0 * t + 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-14);
        let z = integrate(|_| 0.0, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn gaussian_like_against_simpson() {
        let f = |t: f64| exp(t * t + t);
        let r = integrate(f, 0.0, 1.0, 1e-12).unwrap();
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s *= h / 3.0;
        assert!((r.value - s).abs() < 1e-10, "{} vs {}", r.value, s);
    }

    #[test]
    fn gauss_degree_exactness() {
        // The 7-point Gauss rule is exact through degree 13.
        for k in 0..=13 {
            let r = integrate(|t| crate::math::powi(t, k), 0.0, 1.0, 1e-12).unwrap();
            assert!((r.value - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn error_estimate_bounds_truth() {
        let r = integrate(|t| 1.0 / (1e-3 + t), 0.0, 1.0, 1e-9).unwrap();
        let truth = crate::math::ln(1.001 / 1e-3);
        assert!((r.value - truth).abs() <= 10.0 * r.err_estimate.max(1e-15));
    }

    #[test]
    fn subdivision_limit_reports_nonconvergence() {
        let opts = QuadOptions { rel_tol: 1e-14, max_depth: 3, ..QuadOptions::default() };
        let e = integrate_with(|t| if t < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, opts).unwrap_err();
        assert!(matches!(e, Error::NonConvergence { .. }));
    }

    #[test]
    fn reversed_bounds_rejected() {
        assert!(integrate(|t| t, 1.0, 0.0, 1e-10).is_err());
    }
}
