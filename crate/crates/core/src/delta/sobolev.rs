use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridfn::{inverse_fourier_transform, Grid, GridFunction, DEFAULT_MAX_ORDER};
use crate::numeric::quad::{integrate, integrate_to_infinity, Tolerance};
use crate::numeric::sum::NeumaierSum;

/// Largest derivative order for [`uniform_derivative_bound`].
pub const MAX_UNIFORM_ORDER: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevBound {
    /// `∫ (2π|ξ|)^j |φ̂(ξ)| dξ` on the grid.
    pub bound: f64,
    /// `sup |φ^{(j)}|` on the grid.
    pub observed: f64,
    /// `observed ≤ bound·(1 + 10⁻⁶)`.
    pub holds: bool,
}

/// Fourier-inversion bound for `sup|φ^{(j)}|` next to the observed value.
/// `phi_hat` lives on the frequency grid.
pub fn sobolev_sup_bound(phi_hat: &GridFunction, j: usize) -> Result<SobolevBound> {
    if j > DEFAULT_MAX_ORDER {
        return Err(Error::OrderTooHigh {
            order: j,
            max: DEFAULT_MAX_ORDER,
        });
    }
    let r = phi_hat.grid();
    let odd = j % 2 == 1;
    let i_pow = Complex64::new(0.0, 1.0).powi(j as i32);
    let mut bound = NeumaierSum::new();
    let mut spectrum = Vec::with_capacity(r.len());
    for (m, (xi, v)) in phi_hat.iter().enumerate() {
        let w = (2.0 * PI * xi.abs()).powi(j as i32);
        bound.add(w * v.norm());
        if odd && m == 0 {
            spectrum.push(Complex64::new(0.0, 0.0));
        } else {
            spectrum.push(v * i_pow * (2.0 * PI * xi).powi(j as i32));
        }
    }
    let bound = bound.value() * r.spacing();
    let d = inverse_fourier_transform(&GridFunction::new(r, spectrum)?);
    let observed = d.max_abs();
    Ok(SobolevBound {
        bound,
        observed,
        holds: observed <= bound * (1.0 + 1e-6),
    })
}

fn comparison(j: usize) -> impl Fn(f64) -> f64 {
    move |xi: f64| {
        let mut v = (2.0 * PI * xi.abs()).powi(j as i32);
        for m in 1..=j + 2 {
            v /= 1.0 + xi * xi / (m * m) as f64;
        }
        v
    }
}

/// `c_j = ∫ (2π|ξ|)^j / ∏_{m≤j+2}(1 + ξ²/m²) dξ`.
///
/// The integral is split at the grid's largest frequency: the grid range by
/// Gauss–Kronrod, the rest by the same rule after mapping to a finite
/// interval. `c_j` bounds `sup|ψ^{(j)}|` whenever
/// `|ψ̂(ξ)| ≤ 1/∏_{m≤j+2}(1 + ξ²/m²)`, which holds when `a_m ≤ m` for
/// `m ≤ j + 2`.
pub fn uniform_derivative_bound(j: usize, grid: Grid) -> Result<f64> {
    if j > MAX_UNIFORM_ORDER {
        return Err(Error::InvalidArgument(format!(
            "uniform bound needs j ≤ {MAX_UNIFORM_ORDER}, got {j}"
        )));
    }
    let g = comparison(j);
    let xi_max = grid.reciprocal().half_width();
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-13,
        max_intervals: 4000,
    };
    let head = integrate(&g, 0.0, xi_max, tol).value;
    let tail = integrate_to_infinity(&g, xi_max, tol).value;
    Ok(2.0 * (head + tail))
}

/// Analytic bound for the part of `c_j` beyond `ξ_max`:
/// `2 (2π)^j ∏m² ξ_max^{−j−3} / (j + 3)`.
pub fn uniform_tail_bound(j: usize, xi_max: f64) -> f64 {
    let prod: f64 = (1..=j + 2).map(|m| (m * m) as f64).product();
    2.0 * (2.0 * PI).powi(j as i32) * prod * xi_max.powi(-(j as i32) - 3) / (j + 3) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfn::{fourier_transform, GridFunction};

    #[test]
    fn gaussian_bounds() {
        let g = Grid::new(16.0, 1024).unwrap();
        let phi = GridFunction::sample(g, |x| (-PI * x * x).exp()).unwrap();
        let fh = fourier_transform(&phi);
        let s0 = sobolev_sup_bound(&fh, 0).unwrap();
        assert!((s0.bound - 1.0).abs() < 1e-12 && (s0.observed - 1.0).abs() < 1e-12);
        let s1 = sobolev_sup_bound(&fh, 1).unwrap();
        // the Riemann sum of 2π|ξ|e^{−πξ²} is off by −2π dξ²/6 + O(dξ⁴) at the kink
        let dxi = g.reciprocal().spacing();
        let expected = 2.0 - 2.0 * PI * dxi * dxi / 6.0;
        assert!((s1.bound - expected).abs() < 1e-6, "{}", s1.bound);
        let exact = 2.0 * PI * (2.0 * PI * std::f64::consts::E).powf(-0.5);
        // the grid misses the maximum by at most Δx/2
        assert!((s1.observed - exact).abs() < 3e-3, "{}", s1.observed);
        assert!(s1.holds);
    }

    #[test]
    fn reference_integrals() {
        let g = Grid::new(32.0, 4096).unwrap();
        let c0 = uniform_derivative_bound(0, g).unwrap();
        // 4/((1+ξ²)(4+ξ²)) = (4/3)(1/(1+ξ²) − 1/(4+ξ²))
        assert!((c0 - 2.0 * PI / 3.0).abs() < 1e-10, "{c0}");
        let single = integrate_to_infinity(|x| 1.0 / (1.0 + x * x / 4.0), 0.0, Tolerance::default());
        assert!((2.0 * single.value - 2.0 * PI).abs() < 1e-9);
        assert!(uniform_derivative_bound(11, g).is_err());
    }

    #[test]
    fn tail_bound_dominates_the_tail() {
        let g = Grid::new(4.0, 64).unwrap();
        let xi_max = g.reciprocal().half_width();
        for j in 0..=6 {
            let tail = integrate_to_infinity(comparison(j), xi_max, Tolerance::default()).value;
            assert!(2.0 * tail <= uniform_tail_bound(j, xi_max));
        }
    }
}
