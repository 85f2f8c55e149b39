//! Boundary-layer coordinate map and interpolation on the mapped grid.

use alloc::vec::Vec;

use crate::math::decay;

/// Smooth stretching `ξ(x) = (x + L(1 − e^{−x/δ})) / (1 + L(1 − e^{−1/δ}))`.
///
/// A uniform grid in `ξ` puts roughly `L/(1+L)` of its points inside the layer
/// of width `δ` at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerMap {
    pub delta: f64,
    pub weight: f64,
    norm: f64,
}

impl LayerMap {
    pub fn new(delta: f64, weight: f64) -> Self {
        let norm = 1.0 + weight * (1.0 - decay(1.0 / delta));
        Self { delta, weight, norm }
    }

    /// Layer of width `ε / rate` with equal point share inside and outside.
    pub fn for_layer(eps: f64, rate: f64) -> Self {
        Self::new(eps / rate, 1.0)
    }

    pub fn uniform() -> Self {
        Self::new(1.0, 0.0)
    }

    pub fn xi(&self, x: f64) -> f64 {
        (x + self.weight * (1.0 - decay(x / self.delta))) / self.norm
    }

    pub fn dxi(&self, x: f64) -> f64 {
        (1.0 + self.weight / self.delta * decay(x / self.delta)) / self.norm
    }

    pub fn d2xi(&self, x: f64) -> f64 {
        -self.weight / (self.delta * self.delta) * decay(x / self.delta) / self.norm
    }

    /// Inverse map. `ξ` is increasing and concave, so Newton from `x = 0`
    /// approaches the root monotonically from below.
    pub fn x(&self, xi: f64) -> f64 {
        if xi <= 0.0 {
            return 0.0;
        }
        if xi >= 1.0 {
            return 1.0;
        }
        let mut x = 0.0;
        for _ in 0..200 {
            let step = (self.xi(x) - xi) / self.dxi(x);
            let next = (x - step).clamp(0.0, 1.0);
            if (next - x).abs() <= 1e-16 * next.max(1e-300) {
                return next;
            }
            x = next;
        }
        x
    }

    /// Nodes `x_j = x(j/m)` for `j = 0..=m`.
    pub fn nodes(&self, m: usize) -> Vec<f64> {
        (0..=m).map(|j| if j == m { 1.0 } else { self.x(j as f64 / m as f64) }).collect()
    }
}

/// Six-point Lagrange interpolation of samples taken at uniform `ξ`.
#[derive(Debug, Clone)]
pub struct MappedInterpolant {
    pub map: LayerMap,
    pub values: Vec<f64>,
}

impl MappedInterpolant {
    pub fn new(map: LayerMap, values: Vec<f64>) -> Self {
        Self { map, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = self.values.len() - 1;
        let s = self.map.xi(x.clamp(0.0, 1.0)) * m as f64;
        let j = libm::floor(s) as isize;
        let start = (j - 2).clamp(0, m as isize - 5) as usize;
        let mut sum = 0.0;
        for i in 0..6 {
            let xi = (start + i) as f64;
            if s == xi {
                return self.values[start + i];
            }
            let mut w = 1.0;
            for k in 0..6 {
                if k != i {
                    let xk = (start + k) as f64;
                    w *= (s - xk) / (xi - xk);
                }
            }
            sum += w * self.values[start + i];
        }
        sum
    }
}
