use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{exponent_poly, s_monomial, F1};
use crate::approx::{Approximation, Truncation, Validity};
use crate::coeff::Coefficient;
use crate::error::Error;
use crate::math::{decay, diff1, FD_STEP};
use crate::poly::LaurentPoly;

/// Composite matched expansion `3β/(1+2x) + (α−3β)e^{−x/ε}`.
pub fn linear_mae(alpha: f64, beta: f64) -> Approximation {
    Approximation::new("mae", Truncation::r(0), move |x, eps| {
        Ok(3.0 * beta / (1.0 + 2.0 * x) + (alpha - 3.0 * beta) * decay(x / eps))
    })
}

/// Outer coefficients `a_r` (Laurent in `2x+1`) and constants `b_r` of the
/// single-exponential ansatz.
pub fn wkb_coefficients(alpha: f64, beta: f64, r_max: usize) -> (Vec<LaurentPoly>, Vec<f64>) {
    let mut a = vec![s_monomial(3.0 * beta, -1)];
    let mut b = vec![alpha - 3.0 * beta];
    for _ in 1..=r_max {
        let dprev = a.last().unwrap().derivative();
        let c = dprev.eval(1.0);
        let ar = (&LaurentPoly::constant(c, 2.0, 1.0) - &dprev).shift_power(-1);
        b.push(-ar.eval(0.0));
        a.push(ar);
    }
    (a, b)
}

/// The same recurrence built from opaque closures whose derivatives come from
/// five-point differences. Independent route for cross-checking
/// [`wkb_coefficients`].
pub fn wkb_coefficients_fd(alpha: f64, beta: f64, r_max: usize) -> (Vec<Coefficient>, Vec<f64>) {
    let mut a = vec![Coefficient::from_fn(move |x| 3.0 * beta / (2.0 * x + 1.0))];
    let mut b = vec![alpha - 3.0 * beta];
    for _ in 1..=r_max {
        let prev = a.last().unwrap().clone();
        let d = move |x: f64| diff1(&|t| prev.value(t), x, FD_STEP);
        let d1 = d(1.0);
        let ar = Coefficient::from_fn(move |x| (d1 - d(x)) / (2.0 * x + 1.0));
        b.push(-ar.value(0.0));
        a.push(ar);
    }
    (a, b)
}

pub fn linear_wkb(alpha: f64, beta: f64, r: usize) -> Approximation {
    let (a, b) = wkb_coefficients(alpha, beta, r);
    let f = exponent_poly();
    Approximation::new("wkb", Truncation::r(r), move |x, eps| {
        let e = decay(f.eval(x) / eps);
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (ar, br) in a.iter().zip(&b) {
            sum += pow * (ar.eval(x) + br * e);
            pow *= eps;
        }
        Ok(sum)
    })
}

/// Geometric ratio `3e^{−F(1)/ε}` of the p-ladder.
pub fn psum_ratio(eps: f64) -> f64 {
    3.0 * decay(F1 / eps)
}

/// Closed-form resummation of the p-ladder at leading order in ε.
pub fn linear_psum(alpha: f64, beta: f64) -> Approximation {
    let f = exponent_poly();
    Approximation::new("psum", Truncation::r(0), move |x, eps| {
        let e1 = decay(F1 / eps);
        let den = 1.0 - 3.0 * e1;
        if den == 0.0 {
            return Err(Error::SingularParameter(format!("1 - 3e^(-2/eps) = 0 at eps={eps}")));
        }
        Ok(3.0 / (2.0 * x + 1.0) * (beta - alpha * e1) / den + (alpha - 3.0 * beta) / den * decay(f.eval(x) / eps))
    })
    .with_validity(|eps| {
        let q = psum_ratio(eps);
        if q >= 1.0 {
            Validity::Warning(format!(
                "p-sum ratio 3e^(-2/eps) = {q:.4} >= 1: underlying series diverges, closed form is its continuation"
            ))
        } else {
            Validity::Valid
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    #[test]
    fn mae_values() {
        let m = linear_mae(1.0, 0.0);
        assert_eq!(m.eval(0.0, 0.3).unwrap(), 1.0);
        assert!((m.eval(1.0, 1.0).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert!((m.eval(0.5, 1.0).unwrap() - 0.606_530_659_712_633_4).abs() < 1e-15);
    }

    #[test]
    fn wkb_values() {
        let w = linear_wkb(1.0, 0.0, 0);
        assert!((w.eval(1.0, 1.0).unwrap() - exp(-2.0)).abs() < 1e-15);
        assert_eq!(w.eval(0.0, 0.7).unwrap(), 1.0);
        let (_, b) = wkb_coefficients(2.0, 0.5, 0);
        assert_eq!(b[0], 2.0 - 1.5);
    }

    #[test]
    fn wkb_higher_orders_vanish_on_boundaries() {
        let (a, b) = wkb_coefficients(1.3, -0.4, 4);
        for r in 1..=4 {
            assert!(a[r].eval(1.0).abs() < 1e-13);
            assert!((a[r].eval(0.0) + b[r]).abs() < 1e-13);
        }
        // (2x+1) a_1' + 2 a_1 + a_0'' = 0
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            let res = (2.0 * x + 1.0) * a[1].derivative().eval(x) + 2.0 * a[1].eval(x) + a[0].nth_derivative(2).eval(x);
            assert!(res.abs() < 1e-12);
        }
    }

    #[test]
    fn exact_and_fd_routes_agree() {
        let (a, b) = wkb_coefficients(1.0, 0.7, 2);
        let (af, bf) = wkb_coefficients_fd(1.0, 0.7, 2);
        // Nested differencing loses about eps_mach/h^2 per order.
        for (r, tol) in [(0, 1e-12), (1, 1e-8), (2, 1e-5)] {
            let scale = b[r].abs().max(1.0);
            assert!((b[r] - bf[r]).abs() < tol * scale, "b_{r}");
            for k in 0..=20 {
                let x = k as f64 / 20.0;
                assert!((a[r].eval(x) - af[r].value(x)).abs() < tol * scale, "a_{r}({x})");
            }
        }
    }

    #[test]
    fn psum_reference_point() {
        let p = linear_psum(1.0, 0.0);
        assert!((p.eval(0.5, 1.0).unwrap() - 0.453_478_586_875_836).abs() < 1e-14);
        assert!(p.validity(1.0).is_valid());
        assert!(!p.validity(2.0).is_valid());
        let tail = p.eval(0.5, 0.01).unwrap();
        assert!((tail - crate::math::exp(-75.0)).abs() < 1e-14 * crate::math::exp(-75.0));
    }
}
