//! Dormand–Prince 5(4) with the 4th-order continuous extension.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, powf, powi, sqrt};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Largest allowed |h|; `0` means the span length.
    pub h_max: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_max: 0.0, max_steps: 200_000 }
    }
}

/// Accepted steps with their interpolation coefficients.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    dim: usize,
    /// Five coefficient vectors per step, flattened.
    cont: Vec<f64>,
    pub rejected: usize,
}

impl DenseSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn final_state(&self) -> &[f64] {
        self.y.last().expect("solution always holds the initial state")
    }

    /// Interpolated state at `t`, which must lie within the integrated span.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let n = self.t.len();
        let t0 = self.t[0];
        let t1 = self.t[n - 1];
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        if !(t >= lo && t <= hi) {
            return Err(Error::ContractViolation(format!("dense output at {t} outside [{lo}, {hi}]")));
        }
        if n == 1 {
            return Ok(self.y[0].clone());
        }
        let forward = t1 >= t0;
        // Index of the step containing t.
        let k = {
            let (mut a, mut b) = (0usize, n - 1);
            while b - a > 1 {
                let m = (a + b) / 2;
                let ahead = if forward { self.t[m] <= t } else { self.t[m] >= t };
                if ahead {
                    a = m;
                } else {
                    b = m;
                }
            }
            a
        };
        let h = self.t[k + 1] - self.t[k];
        let s = (t - self.t[k]) / h;
        let s1 = 1.0 - s;
        let d = self.dim;
        let base = k * 5 * d;
        let c = &self.cont[base..base + 5 * d];
        Ok((0..d)
            .map(|i| c[i] + s * (c[d + i] + s1 * (c[2 * d + i] + s * (c[3 * d + i] + s1 * c[4 * d + i]))))
            .collect())
    }
}

/// Integrate `y' = f(t, y)` from `span.0` to `span.1` (either direction).
pub fn ode_ivp(
    f: impl Fn(f64, &[f64], &mut [f64]),
    y0: &[f64],
    span: (f64, f64),
    opts: OdeOptions,
) -> Result<DenseSolution> {
    if !(opts.rtol >= 1e-13) {
        return Err(Error::ContractViolation(format!("ode tolerance {} below 1e-13", opts.rtol)));
    }
    let (t0, tend) = span;
    let dim = y0.len();
    let mut sol = DenseSolution { t: vec![t0], y: vec![y0.to_vec()], dim, cont: Vec::new(), rejected: 0 };
    if t0 == tend || dim == 0 {
        return Ok(sol);
    }
    let dir = if tend > t0 { 1.0 } else { -1.0 };
    let length = abs(tend - t0);
    let h_max = if opts.h_max > 0.0 { opts.h_max } else { length };

    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| vec![0.0; dim]);
    let mut y = y0.to_vec();
    let mut ystage = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];
    let mut t = t0;
    f(t, &y, &mut k[0]);

    // Initial step from the Hairer–Wanner heuristic.
    let sc = |yy: &[f64], i: usize| opts.atol + opts.rtol * abs(yy[i]);
    let norm = |v: &[f64], yy: &[f64]| sqrt(v.iter().enumerate().map(|(i, x)| powi(x / sc(yy, i), 2)).sum::<f64>() / dim as f64);
    let d0 = norm(&y, &y);
    let d1 = norm(&k[0], &y);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(h_max);
    for i in 0..dim {
        ystage[i] = y[i] + dir * h * k[0][i];
    }
    f(t + dir * h, &ystage, &mut k[1]);
    let d2 = {
        let diff: Vec<f64> = (0..dim).map(|i| k[1][i] - k[0][i]).collect();
        norm(&diff, &y) / h
    };
    let h1 = if d1.max(d2) <= 1e-15 { (h * 1e-3).max(1e-6) } else { powf(0.01 / d1.max(d2), 0.2) };
    h = (100.0 * h).min(h1).min(h_max);

    let mut facold: f64 = 1e-4;
    let mut steps = 0usize;
    let h_min_rel = 16.0 * f64::EPSILON;
    loop {
        let remaining = abs(tend - t);
        if remaining <= h_min_rel * abs(tend).max(1.0) {
            break;
        }
        if h >= remaining {
            h = remaining;
        }
        if h < h_min_rel * abs(t).max(1.0) {
            return Err(Error::Stiffness { t, step: h });
        }
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::NonConvergence {
                kernel: "Dormand-Prince integrator",
                detail: format!("more than {} steps before reaching t={tend} (at t={t})", opts.max_steps),
            });
        }
        let hs = dir * h;
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for j in 0..s {
                    acc += hs * A[s][j] * k[j][i];
                }
                ystage[i] = acc;
            }
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            f(t + C[s] * hs, &ystage, &mut tail[0]);
            if s == 6 {
                ynew.copy_from_slice(&ystage);
            }
        }
        let mut err = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for j in 0..7 {
                e += E[j] * k[j][i];
            }
            let scale = opts.atol + opts.rtol * abs(y[i]).max(abs(ynew[i]));
            err += powi(hs * e / scale, 2);
        }
        err = sqrt(err / dim as f64);
        if !err.is_finite() {
            h *= 0.1;
            sol.rejected += 1;
            continue;
        }
        let fac11 = powf(err, 0.2 - 0.04 * 0.75);
        let fac = (fac11 / powf(facold, 0.04)) / 0.9;
        let fac = fac.clamp(0.1, 5.0);
        if err <= 1.0 {
            facold = err.max(1e-4);
            // Continuous extension coefficients.
            let base = sol.cont.len();
            sol.cont.resize(base + 5 * dim, 0.0);
            for i in 0..dim {
                let ydiff = ynew[i] - y[i];
                let bspl = hs * k[0][i] - ydiff;
                let mut dsum = 0.0;
                for j in 0..7 {
                    dsum += D[j] * k[j][i];
                }
                sol.cont[base + i] = y[i];
                sol.cont[base + dim + i] = ydiff;
                sol.cont[base + 2 * dim + i] = bspl;
                sol.cont[base + 3 * dim + i] = ydiff - hs * k[6][i] - bspl;
                sol.cont[base + 4 * dim + i] = hs * dsum;
            }
            t += hs;
            if abs(tend - t) <= h_min_rel * abs(tend).max(1.0) {
                t = tend;
            }
            y.copy_from_slice(&ynew);
            let last = k[6].clone();
            k[0] = last;
            sol.t.push(t);
            sol.y.push(y.clone());
            h = (h / fac).min(h_max);
        } else {
            sol.rejected += 1;
            h /= (fac11 / 0.9).min(10.0);
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    #[test]
    fn exponential_growth() {
        let s = ode_ivp(|_, y, d| d[0] = y[0], &[1.0], (0.0, 1.0), OdeOptions::with_tol(1e-12)).unwrap();
        assert!((s.final_state()[0] - core::f64::consts::E).abs() < 1e-10);
        for &t in &[0.1, 0.37, 0.5, 0.999] {
            let v = s.eval(t).unwrap()[0];
            assert!((v - exp(t)).abs() < 1e-9, "t={t} {v}");
        }
    }

    #[test]
    fn backward_integration() {
        let s = ode_ivp(|_, y, d| d[0] = y[0], &[1.0], (1.0, 0.0), OdeOptions::with_tol(1e-12)).unwrap();
        assert!((s.final_state()[0] - exp(-1.0)).abs() < 1e-10);
        assert!((s.eval(0.5).unwrap()[0] - exp(-0.5)).abs() < 1e-9);
    }

    #[test]
    fn zero_field_constant() {
        let s = ode_ivp(|_, _, d| d.fill(0.0), &[3.0, -2.0], (0.0, 1.0), OdeOptions::default()).unwrap();
        assert_eq!(s.final_state(), &[3.0, -2.0]);
    }

    #[test]
    fn harmonic_oscillator() {
        let s = ode_ivp(
            |_, y, d| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            &[0.0, 1.0],
            (0.0, 3.0),
            OdeOptions::with_tol(1e-11),
        )
        .unwrap();
        assert!((s.final_state()[0] - libm::sin(3.0)).abs() < 1e-9);
        assert!((s.eval(1.3).unwrap()[1] - libm::cos(1.3)).abs() < 1e-8);
    }

    #[test]
    fn convergence_order_on_exponential() {
        // Error should fall roughly like tol^(5/5) .. tol; check a consistent trend.
        let mut errs = alloc::vec::Vec::new();
        for &tol in &[1e-6, 1e-8, 1e-10] {
            let s = ode_ivp(|_, y, d| d[0] = y[0], &[1.0], (0.0, 1.0), OdeOptions::with_tol(tol)).unwrap();
            errs.push((s.final_state()[0] - core::f64::consts::E).abs());
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn stiffness_detected() {
        // Finite-time blow-up forces the step to collapse.
        let r = ode_ivp(|_, y, d| d[0] = y[0] * y[0], &[1.0], (0.0, 2.0), OdeOptions::with_tol(1e-10));
        assert!(matches!(r, Err(Error::Stiffness { .. }) | Err(Error::NonConvergence { .. })), "{r:?}");
    }

    #[test]
    fn tolerance_floor() {
        assert!(ode_ivp(|_, y, d| d[0] = y[0], &[1.0], (0.0, 1.0), OdeOptions::with_tol(1e-14)).is_err());
    }
}
