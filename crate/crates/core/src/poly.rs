//! Finite Laurent polynomials in an affine variable `t = scale·x + shift`.
//!
//! Every transseries coefficient with a closed form in this crate is such a
//! polynomial, so the recurrences can be run exactly (up to rounding) instead
//! of by nested finite differences.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;
use core::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    pub scale: f64,
    pub shift: f64,
    /// Power of `t` carried by `coeffs[0]`.
    pub low: i32,
    pub coeffs: Vec<f64>,
}

impl LaurentPoly {
    pub fn zero(scale: f64, shift: f64) -> Self {
        Self { scale, shift, low: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: f64, scale: f64, shift: f64) -> Self {
        Self { scale, shift, low: 0, coeffs: vec![c] }
    }

    /// `c · t^power`.
    pub fn monomial(c: f64, power: i32, scale: f64, shift: f64) -> Self {
        Self { scale, shift, low: power, coeffs: vec![c] }
    }

    pub fn t(&self, x: f64) -> f64 {
        self.scale * x + self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i32) -> f64 {
        let i = k - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            0.0
        } else {
            self.coeffs[i as usize]
        }
    }

    fn same_variable(&self, other: &Self) {
        debug_assert!(
            self.scale == other.scale && self.shift == other.shift,
            "Laurent polynomials in different variables"
        );
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let t = self.t(x);
        // Horner in t, then the t^low factor.
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc * libm::pow(t, self.low as f64)
    }

    /// `d/dx` (note the chain-rule factor `scale`).
    pub fn derivative(&self) -> Self {
        let mut out = Self { scale: self.scale, shift: self.shift, low: self.low - 1, coeffs: Vec::with_capacity(self.coeffs.len()) };
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i32;
            out.coeffs.push(c * k as f64 * self.scale);
        }
        out.trimmed()
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    /// Multiply by `t^k`.
    pub fn shift_power(&self, k: i32) -> Self {
        let mut out = self.clone();
        out.low += k;
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| *v *= c);
        out.trimmed()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(1.0, self.scale, self.shift);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Human-readable form, e.g. `3·t^-1 with t = 2x+1`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            let k = self.low + i as i32;
            match k {
                0 => write!(s, "{c}"),
                1 => write!(s, "{c}·t"),
                _ => write!(s, "{c}·t^{k}"),
            }
            .ok();
        }
        if s.is_empty() {
            s.push('0');
        }
        write!(s, " with t = {}x+{}", self.scale, self.shift).ok();
        s
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if rhs.coeffs.is_empty() {
            return self.clone();
        }
        if self.coeffs.is_empty() {
            return rhs.clone();
        }
        self.same_variable(rhs);
        let low = self.low.min(rhs.low);
        let high = self.high().max(rhs.high());
        let coeffs = (low..=high).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        LaurentPoly { scale: self.scale, shift: self.shift, low, coeffs }.trimmed()
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scaled(-1.0)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return LaurentPoly::zero(self.scale, self.shift);
        }
        self.same_variable(rhs);
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly { scale: self.scale, shift: self.shift, low: self.low + rhs.low, coeffs }.trimmed()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> LaurentPoly {
        LaurentPoly::monomial(1.0, 1, 2.0, 1.0)
    }

    #[test]
    fn evaluation_and_derivative() {
        // 3/(2x+1)
        let p = LaurentPoly::monomial(3.0, -1, 2.0, 1.0);
        assert!((p.eval(0.5) - 1.5).abs() < 1e-15);
        // d/dx 3/(2x+1) = -6/(2x+1)^2
        assert!((p.derivative().eval(0.5) + 1.5).abs() < 1e-15);
        assert!((p.nth_derivative(2).eval(0.0) - 24.0).abs() < 1e-13);
    }

    #[test]
    fn arithmetic() {
        let a = &s() + &LaurentPoly::constant(-1.0, 2.0, 1.0); // 2x
        assert!((a.eval(0.3) - 0.6).abs() < 1e-15);
        let b = &a * &LaurentPoly::monomial(1.0, -1, 2.0, 1.0); // 2x/(2x+1)
        assert!((b.eval(0.5) - 0.5).abs() < 1e-15);
        let z = &b - &b;
        assert!(z.is_zero());
        assert_eq!(s().powi(3).eval(1.0), 27.0);
    }

    #[test]
    fn describes_terms() {
        let p = LaurentPoly::monomial(3.0, -1, 2.0, 1.0);
        assert_eq!(p.describe(), "3·t^-1 with t = 2x+1");
    }
}
