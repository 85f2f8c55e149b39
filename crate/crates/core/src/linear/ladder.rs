use alloc::vec::Vec;

use super::exponent_poly;
use crate::coeff::Coefficient;
use crate::poly::LaurentPoly;
use crate::transseries::TransseriesLadder;

/// Exact ladder tables: `a[p][r]` as Laurent polynomials in `2x+1`, `b[p][r]`
/// constants.
#[derive(Debug, Clone)]
pub struct LadderCoefficients {
    pub a: Vec<Vec<LaurentPoly>>,
    pub b: Vec<Vec<f64>>,
}

pub fn ladder_coefficients(alpha: f64, beta: f64, r_max: usize, p_max: usize) -> LadderCoefficients {
    let mut a: Vec<Vec<LaurentPoly>> = Vec::with_capacity(p_max + 1);
    let mut b: Vec<Vec<f64>> = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let mut ap: Vec<LaurentPoly> = Vec::with_capacity(r_max + 1);
        let mut bp = Vec::with_capacity(r_max + 1);
        for r in 0..=r_max {
            let corner = r == 0 && p == 0;
            // Value demanded at x = 1 by the right boundary condition.
            let right = if corner { beta } else { 0.0 } - if p > 0 { b[p - 1][r] } else { 0.0 };
            let dprev = if r > 0 { ap[r - 1].derivative() } else { LaurentPoly::zero(2.0, 1.0) };
            // (2x+1) a_r = c − a'_{r−1}, with c fixed by a_r(1).
            let c = 3.0 * right + dprev.eval(1.0);
            let ar = (&LaurentPoly::constant(c, 2.0, 1.0) - &dprev).shift_power(-1);
            let br = if corner { alpha } else { 0.0 } - ar.eval(0.0);
            ap.push(ar);
            bp.push(br);
        }
        a.push(ap);
        b.push(bp);
    }
    LadderCoefficients { a, b }
}

/// Ladder transseries tables for the pedagogical problem.
pub fn linear_ladder(alpha: f64, beta: f64, r_max: usize, p_max: usize) -> TransseriesLadder {
    let t = ladder_coefficients(alpha, beta, r_max, p_max);
    TransseriesLadder {
        a: t.a.into_iter().map(|row| row.into_iter().map(Coefficient::from).collect()).collect(),
        b: t.b.into_iter().map(|row| row.into_iter().map(Coefficient::constant).collect()).collect(),
        exponent: exponent_poly().into(),
    }
}
