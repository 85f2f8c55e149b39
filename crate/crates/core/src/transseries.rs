//! Coefficient tables for the two transseries templates and their evaluators.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::math::{exp_sat, powi};

/// Linear template: `Σ_p e^{−pF(1)/ε} Σ_r a_r^(p) ε^r + Σ_p e^{−(F(x)+pF(1))/ε} Σ_r b_r^(p) ε^r`.
#[derive(Debug, Clone)]
pub struct TransseriesLadder {
    /// `a[p][r]`.
    pub a: Vec<Vec<Coefficient>>,
    /// `b[p][r]`.
    pub b: Vec<Vec<Coefficient>>,
    pub exponent: Coefficient,
}

impl TransseriesLadder {
    pub fn p_max(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn r_max(&self) -> usize {
        self.a.first().map_or(0, |row| row.len().saturating_sub(1))
    }

    pub fn scaled(&self, k: f64) -> Self {
        let scale = |t: &Vec<Vec<Coefficient>>| t.iter().map(|row| row.iter().map(|c| c.scaled(k)).collect()).collect();
        Self { a: scale(&self.a), b: scale(&self.b), exponent: self.exponent.clone() }
    }
}

fn eps_powers(eps: f64, lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|r| powi(eps, r)).collect()
}

pub fn eval_ladder(ladder: &TransseriesLadder, x: f64, eps: f64, r: usize, p: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(eps > 0.0) {
        return Err(Error::ContractViolation(format!("ladder evaluated at x={x}, eps={eps}")));
    }
    if p > ladder.p_max() || r > ladder.r_max() || ladder.a.is_empty() {
        return Err(Error::ContractViolation(format!(
            "truncation R={r}, P={p} exceeds table R={}, P={}",
            ladder.r_max(),
            ladder.p_max()
        )));
    }
    let fx = ladder.exponent.value(x);
    let f1 = ladder.exponent.value(1.0);
    let pow = eps_powers(eps, 0, r as i32);
    let mut total = 0.0;
    for pp in 0..=p {
        let outer = exp_sat(-(pp as f64) * f1 / eps);
        let inner = exp_sat(-(fx + pp as f64 * f1) / eps);
        let mut sa = 0.0;
        let mut sb = 0.0;
        for rr in 0..=r {
            if outer != 0.0 {
                sa += ladder.a[pp][rr].value(x) * pow[rr];
            }
            if inner != 0.0 {
                sb += ladder.b[pp][rr].value(x) * pow[rr];
            }
        }
        total += outer * sa + inner * sb;
    }
    Ok(total)
}

/// Lowest power of ε in the `(n, p)` series.
pub fn rmin(n: usize, p: usize) -> i32 {
    if n == 0 && p == 0 {
        0
    } else if n > p {
        -(p as i32)
    } else {
        -(((n + p) / 2) as i32)
    }
}

/// Nonlinear template: `Σ_{n,p} e^{−(nF(x)+pF(1))/ε} Σ_{r ≥ rmin(n,p)} a_r^(n,p) ε^r`.
#[derive(Debug, Clone)]
pub struct TransseriesArray {
    pub a: BTreeMap<(usize, usize, i32), Coefficient>,
    pub exponent: Coefficient,
    pub rmin: fn(usize, usize) -> i32,
}

impl TransseriesArray {
    pub fn new(exponent: Coefficient) -> Self {
        Self { a: BTreeMap::new(), exponent, rmin }
    }

    pub fn insert(&mut self, n: usize, p: usize, r: i32, c: Coefficient) -> Result<()> {
        if r < (self.rmin)(n, p) {
            return Err(Error::ContractViolation(format!(
                "a_{r}^({n},{p}) below r_min = {}",
                (self.rmin)(n, p)
            )));
        }
        self.a.insert((n, p, r), c);
        Ok(())
    }

    pub fn get(&self, n: usize, p: usize, r: i32) -> Result<&Coefficient> {
        self.a.get(&(n, p, r)).ok_or(Error::MissingCoefficient { n, p, r })
    }

    /// Value of `a_r^(n,p)`, zero when absent.
    pub fn value_or_zero(&self, n: usize, p: usize, r: i32, x: f64) -> f64 {
        self.a.get(&(n, p, r)).map_or(0.0, |c| c.value(x))
    }

    pub fn n_max(&self) -> usize {
        self.a.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            a: self.a.iter().map(|(key, c)| (*key, c.scaled(k))).collect(),
            exponent: self.exponent.clone(),
            rmin: self.rmin,
        }
    }

    /// A single term `a_r^(n,p)(x) ε^r e^{−(nF(x)+pF(1))/ε}`.
    pub fn term(&self, n: usize, p: usize, r: i32, x: f64, eps: f64) -> Result<f64> {
        let c = self.get(n, p, r)?;
        let z = (n as f64 * self.exponent.value(x) + p as f64 * self.exponent.value(1.0)) / eps;
        let e = exp_sat(-z);
        Ok(if e == 0.0 { 0.0 } else { c.value(x) * powi(eps, r) * e })
    }
}

/// Sum the array through `n ≤ N`, `p ≤ P`, `rmin(n,p) ≤ r ≤ R`.
///
/// Every coefficient inside that range must be present; a gap is an error
/// rather than a silent zero.
pub fn eval_array(array: &TransseriesArray, x: f64, eps: f64, r: i32, n: usize, p: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(eps > 0.0) {
        return Err(Error::ContractViolation(format!("array evaluated at x={x}, eps={eps}")));
    }
    let fx = array.exponent.value(x);
    let f1 = array.exponent.value(1.0);
    let lo = (0..=n).flat_map(|nn| (0..=p).map(move |pp| (nn, pp))).map(|(nn, pp)| (array.rmin)(nn, pp)).min().unwrap_or(0);
    let pow = eps_powers(eps, lo.min(0), r.max(0));
    let mut total = 0.0;
    for nn in 0..=n {
        for pp in 0..=p {
            let rlo = (array.rmin)(nn, pp);
            let e = exp_sat(-(nn as f64 * fx + pp as f64 * f1) / eps);
            let mut s = 0.0;
            for rr in rlo..=r {
                let c = array.get(nn, pp, rr)?;
                if e != 0.0 {
                    s += c.value(x) * pow[(rr - lo.min(0)) as usize];
                }
            }
            total += e * s;
        }
    }
    Ok(total)
}
