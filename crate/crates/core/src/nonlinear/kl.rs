//! Scalar sequences `K_n`, `L_n`, their generating functions, and the
//! boundary sums at `x = 0` that fix `a₁^(1,0)` and `a₀^(1,1)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::math::{ln_1p, powi};
use crate::numerics::quad::integrate;
use crate::numerics::special::dilog;
use crate::poly::LaurentPoly;
use crate::problem::NonlinearProblem;

/// `k[n]`, `l[n]` for `n = 0..=n_max`; entries below 2 are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct KLCoefficients {
    pub k: Vec<f64>,
    pub l: Vec<f64>,
}

impl KLCoefficients {
    pub fn n_max(&self) -> usize {
        self.k.len() - 1
    }

    /// Largest violation of either defining recurrence.
    pub fn recurrence_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 2..=self.n_max() {
            let nf = n as f64;
            let sk: f64 = self.k[2..n].iter().sum();
            let sl: f64 = self.l[2..n].iter().sum();
            let cross: f64 = (2..n).map(|m| (n - m) as f64 * self.k[m]).sum();
            let rk = (nf - 1.0) * self.k[n] / 2.0 - (sk - (2.0 * nf + 1.0) * (nf - 1.0) / nf);
            let rl = (nf - 1.0) * self.l[n] / 2.0 - (sl + cross - (2.0 * nf + 1.0) * (nf - 1.0));
            worst = worst.max(rk.abs()).max(rl.abs());
        }
        worst
    }
}

/// Forward recurrence in double precision.
pub fn kl_coefficients(n_max: usize) -> Result<KLCoefficients> {
    if n_max < 2 {
        return Err(Error::ContractViolation(format!("n_max={n_max} must be at least 2")));
    }
    let mut k = vec![0.0; n_max + 1];
    let mut l = vec![0.0; n_max + 1];
    let (mut sk, mut sl) = (0.0, 0.0);
    for n in 2..=n_max {
        let nf = n as f64;
        let cross: f64 = (2..n).map(|m| (n - m) as f64 * k[m]).sum();
        k[n] = 2.0 / (nf - 1.0) * (sk - (2.0 * nf + 1.0) * (nf - 1.0) / nf);
        l[n] = 2.0 / (nf - 1.0) * (sl + cross - (2.0 * nf + 1.0) * (nf - 1.0));
        sk += k[n];
        sl += l[n];
    }
    Ok(KLCoefficients { k, l })
}

/// `H(t) = Σ K_n tⁿ = 2t(1 − 2Li₂(t))/(1−t)² + 2(1+t)ln(1−t)/(1−t)`.
pub fn h_gfun(t: f64) -> Result<f64> {
    let li = dilog(t)?;
    let u = 1.0 - t;
    Ok(2.0 * t * (1.0 - 2.0 * li) / (u * u) + 2.0 * (1.0 + t) * ln_1p(-t) / u)
}

/// `G(t) = Σ L_n tⁿ = 2t(1+t)(t − 2Li₂(t))/(1−t)³ + 8t ln(1−t)/(1−t)²`.
pub fn g_gfun(t: f64) -> Result<f64> {
    let li = dilog(t)?;
    let u = 1.0 - t;
    Ok(2.0 * t * (1.0 + t) * (t - 2.0 * li) / (u * u * u) + 8.0 * t * ln_1p(-t) / (u * u))
}

fn series_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// Taylor coefficients of `H` and `G` through `t^{n_max}`, from truncated
/// power-series arithmetic on the closed forms.
pub fn gfun_taylor(n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let n = n_max + 1;
    let mono = |c: &[(usize, f64)]| {
        let mut v = vec![0.0; n];
        for &(k, x) in c {
            if k < n {
                v[k] += x;
            }
        }
        v
    };
    let li2: Vec<f64> = (0..n).map(|k| if k == 0 { 0.0 } else { 1.0 / (k * k) as f64 }).collect();
    let log1m: Vec<f64> = (0..n).map(|k| if k == 0 { 0.0 } else { -1.0 / k as f64 }).collect();
    // 1/(1−t)^m coefficients: binomial(k+m−1, m−1).
    let inv = |m: usize| -> Vec<f64> {
        (0..n)
            .map(|k| match m {
                1 => 1.0,
                2 => (k + 1) as f64,
                3 => ((k + 1) * (k + 2)) as f64 / 2.0,
                _ => unreachable!(),
            })
            .collect()
    };
    let one_minus_2li: Vec<f64> = li2.iter().enumerate().map(|(k, v)| if k == 0 { 1.0 } else { -2.0 * v }).collect();
    let h1 = series_mul(&series_mul(&mono(&[(1, 2.0)]), &one_minus_2li), &inv(2));
    let h2 = series_mul(&series_mul(&mono(&[(0, 2.0), (1, 2.0)]), &log1m), &inv(1));
    let h: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();

    let t_minus_2li: Vec<f64> = li2.iter().enumerate().map(|(k, v)| if k == 1 { 1.0 - 2.0 * v } else { -2.0 * v }).collect();
    let g1 = series_mul(&series_mul(&mono(&[(1, 2.0), (2, 2.0)]), &t_minus_2li), &inv(3));
    let g2 = series_mul(&series_mul(&mono(&[(1, 8.0)]), &log1m), &inv(2));
    let g: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a + b).collect();
    (h, g)
}

/// `a₁^(1,0)` and `a₀^(1,1)` after their integration constants are fixed by
/// the `x = 0` boundary sums.
#[derive(Debug, Clone)]
pub struct ClosedFamilies {
    pub problem: NonlinearProblem,
    /// Laurent in `t = x + β − 1`: `−C t^{−3} + K₁ t^{−1}`.
    pub a1_10: LaurentPoly,
    /// `(C²(β−1)/β) t^{−3} − (D₀K₁ + D₁C) + K₂ t^{−1}`.
    pub a0_11: LaurentPoly,
    pub k1: f64,
    pub k2: f64,
    /// `q = a₀^(1,0)(0) / 2a₀^(0,0)(0)`.
    pub q0: f64,
    /// `a₀^(0,1) = −a₀^(1,0)(1)`.
    pub d0: f64,
    /// `a₁^(0,1) = −a₁^(1,0)(1)`.
    pub d1: f64,
    pub kl: KLCoefficients,
}

impl ClosedFamilies {
    pub fn a1_10_coefficient(&self) -> Coefficient {
        self.a1_10.clone().into()
    }

    pub fn a0_11_coefficient(&self) -> Coefficient {
        self.a0_11.clone().into()
    }

    /// `a₁^(1,0)(x)` from its ODE `A a' + a = (a₀^(1,0))''` with the
    /// integrating factor `A`, the forcing integrated numerically.
    pub fn a1_10_by_quadrature(&self, x: f64) -> Result<f64> {
        let c = self.problem.amplitude();
        let b = self.problem.beta - 1.0;
        let forcing = integrate(|s| 2.0 * c / powi(s + b, 3), 0.0, x, 1e-10)?;
        Ok((b * self.a1_10.eval(0.0) + forcing.value) / (x + b))
    }
}

/// Close the `a₁^(n,0)` and `a₀^(n,1)` families at `x = 0`.
///
/// `n_max` bounds the tabulated `K_n`, `L_n`; the boundary sums themselves
/// use the closed generating functions.
pub fn kl_close(alpha: f64, beta: f64, n_max: usize) -> Result<ClosedFamilies> {
    let problem = NonlinearProblem::new(alpha, beta)?;
    let kl = kl_coefficients(n_max.max(2))?;
    let c = problem.amplitude();
    let a0 = beta - 1.0;
    let b0 = c / a0;
    let q0 = b0 / (2.0 * a0);
    if !(q0.abs() < 1.0) {
        return Err(Error::Domain { function: "generating function", value: q0 });
    }
    let h = h_gfun(q0)?;
    let g = g_gfun(q0)?;
    let om = 1.0 - q0;
    let t = |coef: f64, pow: i32| LaurentPoly::monomial(coef, pow, 1.0, a0);

    // Σ_n a₁^(n,0)(0) = a₁^(1,0)(0)/(1−q)² + H(q)/A(0) = 0.
    let a1_at0 = -om * om * h / a0;
    let k1 = a0 * a1_at0 + c / (a0 * a0);
    let a1_10 = &t(-c, -3) + &t(k1, -1);

    let d0 = -c / beta;
    let d1 = -a1_10.eval(1.0);
    let m = &t(c * c / beta, 0) + &t(-c * c * a0 / beta, -1);
    let m0 = m.eval(0.0);
    // D₀ + Σ_n a₀^(n,1)(0) = 0 with the family sums in closed form.
    let n0 = om * om * (-d0 - a1_at0 * m0 / (a0 * om * om * om) - m0 * g / (a0 * b0) + 2.0 * d0 * q0 * q0 / (om * om));
    let k2 = a0 * (n0 - c * c * a0 / (beta * a0 * a0 * a0) + d0 * k1 + d1 * c);
    let a0_11 = &(&t(c * c * a0 / beta, -3) + &t(-(d0 * k1 + d1 * c), 0)) + &t(k2, -1);
    Ok(ClosedFamilies { problem, a1_10, a0_11, k1, k2, q0, d0, d1, kl })
}
