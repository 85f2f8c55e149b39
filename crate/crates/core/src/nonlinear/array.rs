//! Closed-form families of the `(n, p)` array and the generic balance check.

use alloc::vec;
use alloc::vec::Vec;

use super::kl::{kl_close, ClosedFamilies};
use crate::coeff::Coefficient;
use crate::error::Result;
use crate::math::powi;
use crate::poly::LaurentPoly;
use crate::problem::NonlinearProblem;
use crate::transseries::TransseriesArray;

/// Highest power of ε stored for any `(n, p)`.
pub const ARRAY_R_MAX: i32 = 1;

/// Every coefficient family is a Laurent polynomial in `t = x + β − 1`.
#[derive(Debug, Clone)]
pub struct Families {
    pub closed: ClosedFamilies,
    /// `C = 2(α−β+1)(β−1)²/(α+β−1)`.
    pub c: f64,
    /// `a₋₁^(1,1) = (C²/β) x / (x+β−1)`.
    pub m: LaurentPoly,
    pub exponent: LaurentPoly,
}

impl Families {
    pub fn new(alpha: f64, beta: f64, n_max: usize) -> Result<Self> {
        let closed = kl_close(alpha, beta, n_max)?;
        let c = closed.problem.amplitude();
        let b = beta - 1.0;
        let m = &LaurentPoly::constant(c * c / beta, 1.0, b) + &LaurentPoly::monomial(-c * c * b / beta, -1, 1.0, b);
        let exponent = LaurentPoly { scale: 1.0, shift: b, low: 0, coeffs: vec![-0.5 * b * b, 0.0, 0.5] };
        Ok(Self { closed, c, m, exponent })
    }

    pub fn problem(&self) -> NonlinearProblem {
        self.closed.problem
    }

    fn mono(&self, coef: f64, power: i32) -> LaurentPoly {
        LaurentPoly::monomial(coef, power, 1.0, self.problem().beta - 1.0)
    }

    /// `qⁿ = (a₀^(1,0)/2a₀^(0,0))ⁿ = (C/2)ⁿ t^{−2n}`.
    fn q_pow(&self, n: usize) -> LaurentPoly {
        self.mono(powi(self.c / 2.0, n as i32), -2 * n as i32)
    }

    fn k(&self, n: usize) -> f64 {
        if n < 2 {
            0.0
        } else {
            self.closed.kl.k[n]
        }
    }

    fn l(&self, n: usize) -> f64 {
        if n < 2 {
            0.0
        } else {
            self.closed.kl.l[n]
        }
    }

    pub fn a0_n0(&self, n: usize) -> LaurentPoly {
        if n == 0 {
            self.mono(1.0, 1)
        } else {
            self.q_pow(n).shift_power(1).scaled(2.0)
        }
    }

    pub fn a1_n0(&self, n: usize) -> LaurentPoly {
        if n == 0 {
            return self.mono(0.0, 0);
        }
        let lead = &self.q_pow(n - 1).scaled(n as f64) * &self.closed.a1_10;
        &lead + &self.q_pow(n).shift_power(-1).scaled(self.k(n))
    }

    pub fn am1_n1(&self, n: usize) -> LaurentPoly {
        &self.q_pow(n - 1).scaled(n as f64) * &self.m
    }

    pub fn a0_n1(&self, n: usize) -> LaurentPoly {
        if n == 0 {
            return self.mono(self.closed.d0, 0);
        }
        let nf = n as f64;
        let c = self.c;
        let mut out = &self.q_pow(n - 1).scaled(nf) * &self.closed.a0_11;
        if n >= 2 {
            let w = self.mono(nf * (nf - 1.0) * powi(c, n as i32 - 2) / powi(2.0, n as i32 - 1), 3 - 2 * n as i32);
            out = &out + &(&(&w * &self.closed.a1_10) * &self.m);
        }
        out = &out + &self.q_pow(n).scaled(-2.0 * (nf - 1.0) * self.closed.d0);
        let w = self.mono(2.0 * self.l(n) * powi(c, n as i32 - 1) / powi(2.0, n as i32 + 1), -2 * n as i32);
        &out + &(&w * &self.m)
    }

    /// `a₋₁^(0,2) = −a₋₁^(1,1)(1)`, from the `x = 1` balance at order `e^{−2F(1)/ε}/ε`.
    pub fn am1_02(&self) -> f64 {
        -self.m.eval(1.0)
    }

    /// `a₀^(0,2) = −a₀^(1,1)(1) − a₀^(2,0)(1)`.
    pub fn a0_02(&self) -> f64 {
        -self.closed.a0_11.eval(1.0) - self.a0_n0(2).eval(1.0)
    }
}

/// Populate the array for `n ≤ n_max`, `p ≤ min(p_max, 2)`:
///
/// * `p = 0`: `a₀^(n,0)`, `a₁^(n,0)`;
/// * `p = 1`: `a₀^(0,1)`, `a₁^(0,1)`, and `a₋₁^(n,1)`, `a₀^(n,1)` for `n ≥ 1`;
/// * `p = 2`: `a₋₁^(0,2)`, `a₀^(0,2)`.
pub fn build_array(alpha: f64, beta: f64, n_max: usize, p_max: usize) -> Result<TransseriesArray> {
    let fam = Families::new(alpha, beta, n_max)?;
    build_array_for(&fam, n_max, p_max)
}

pub fn build_array_for(fam: &Families, n_max: usize, p_max: usize) -> Result<TransseriesArray> {
    let mut arr = TransseriesArray::new(fam.exponent.clone().into());
    arr.insert(0, 0, 0, fam.a0_n0(0).into())?;
    arr.insert(0, 0, 1, Coefficient::zero())?;
    for n in 1..=n_max {
        arr.insert(n, 0, 0, fam.a0_n0(n).into())?;
        arr.insert(n, 0, 1, fam.a1_n0(n).into())?;
    }
    if p_max >= 1 {
        arr.insert(0, 1, 0, Coefficient::constant(fam.closed.d0))?;
        arr.insert(0, 1, 1, Coefficient::constant(fam.closed.d1))?;
        for n in 1..=n_max {
            arr.insert(n, 1, -1, fam.am1_n1(n).into())?;
            arr.insert(n, 1, 0, fam.a0_n1(n).into())?;
        }
    }
    if p_max >= 2 {
        arr.insert(0, 2, -1, Coefficient::constant(fam.am1_02()))?;
        arr.insert(0, 2, 0, Coefficient::constant(fam.a0_02()))?;
    }
    Ok(arr)
}

/// `a₀^(n,0)(x)`, `n = 0..=n_max`, from the product recursion
/// `n(n−1) a₀^(0,0) a₀^(n,0) = Σ_{m=1}^{n−1} (n−m) a₀^(m,0) a₀^(n−m,0)`.
pub fn a0_n0_by_products(problem: &NonlinearProblem, n_max: usize, x: f64) -> Vec<f64> {
    let a = problem.outer(x);
    let mut v = vec![a, problem.amplitude() / a];
    for n in 2..=n_max {
        let s: f64 = (1..n).map(|m| (n - m) as f64 * v[m] * v[n - m]).sum();
        v.push(s / ((n * (n - 1)) as f64 * a));
    }
    v.truncate(n_max + 1);
    v
}

/// Residual of the `(n, p)` equation at order `ε^k` at `x`, using whatever
/// coefficients the array holds (absent entries count as zero).
///
/// Contributions: from `ε u''`,
/// `a''_{k−1} − (2nF'a'_k + nF''a_k) + n²F'² a_{k+1}`; from `u u'`,
/// `Σ a_s^(m,q) [(a_{k−s}^(n−m,p−q))' − (n−m)F' a_{k+1−s}^(n−m,p−q)]`; from
/// `−u`, `−a_k`.
pub fn balance_residual(array: &TransseriesArray, n: usize, p: usize, k: i32, x: f64) -> f64 {
    let fp = array.exponent.derivative(1, x);
    let fpp = array.exponent.derivative(2, x);
    let nf = n as f64;
    let val = |n: usize, p: usize, r: i32| array.value_or_zero(n, p, r, x);
    let der = |n: usize, p: usize, r: i32, order: usize| array.a.get(&(n, p, r)).map_or(0.0, |c| c.derivative(order, x));
    let mut res = der(n, p, k - 1, 2) - (2.0 * nf * fp * der(n, p, k, 1) + nf * fpp * val(n, p, k))
        + nf * nf * fp * fp * val(n, p, k + 1);
    for (&(m, q, s), coef) in array.a.iter() {
        if m > n || q > p {
            continue;
        }
        let (dn, dp) = (n - m, p - q);
        let a = coef.value(x);
        res += a * (der(dn, dp, k - s, 1) - dn as f64 * fp * val(dn, dp, k + 1 - s));
    }
    res - val(n, p, k)
}
