//! Transform of algebraically decaying samples.
//!
//! A function like `1/(x² + a²)` is far from negligible at `±L`, and the
//! plain transform misses its tails (error of order `1/L`). Here each tail is
//! fitted by `Σ_p c_p (L/x)^p` on the outer part of the grid, and the model
//! is summed over the whole lattice `−L + kΔx, k ∈ ℤ` by folding it onto the
//! periodic samples with Hurwitz zeta values. One FFT then returns the
//! trapezoid sum over the full line.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::fourier::forward_raw;
use super::grid::GridFunction;
use crate::error::{Error, Result};
use crate::numeric::special::hurwitz_zeta;

/// Tail model: powers of `1/x` and the fraction of each half-grid used for
/// the fit.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicTail {
    pub powers: Vec<u32>,
    pub window_fraction: f64,
}

impl Default for AlgebraicTail {
    fn default() -> Self {
        Self {
            powers: vec![2, 3, 4, 5, 6],
            window_fraction: 0.25,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TailCorrectedTransform {
    pub spectrum: GridFunction,
    /// Largest misfit of the tail model on its window, relative to the
    /// largest sample there.
    pub fit_residual: f64,
}

struct SideFit {
    // coefficients of (L/|x|)^p, complex
    coeffs: Vec<Complex64>,
    residual: f64,
}

fn fit_side(samples: &[(f64, Complex64)], half_width: f64, powers: &[u32]) -> Result<SideFit> {
    let rows = samples.len();
    let cols = powers.len();
    if rows < 2 * cols {
        return Err(Error::WindowTooShort {
            found: rows,
            required: 2 * cols,
        });
    }
    let design = DMatrix::from_fn(rows, cols, |i, j| {
        (half_width / samples[i].0.abs()).powi(powers[j] as i32)
    });
    let svd = design.clone().svd(true, true);
    let solve = |rhs: DVector<f64>| -> Result<DVector<f64>> {
        svd.solve(&rhs, 1e-14)
            .map_err(|e| Error::InvalidArgument(format!("tail fit failed: {e}")))
    };
    let re = solve(DVector::from_iterator(rows, samples.iter().map(|s| s.1.re)))?;
    let im = solve(DVector::from_iterator(rows, samples.iter().map(|s| s.1.im)))?;
    let coeffs: Vec<Complex64> = (0..cols).map(|j| Complex64::new(re[j], im[j])).collect();
    let scale = samples.iter().fold(0.0f64, |m, s| m.max(s.1.norm()));
    let mut worst = 0.0f64;
    for (i, s) in samples.iter().enumerate() {
        let model: Complex64 = (0..cols).map(|j| coeffs[j] * design[(i, j)]).sum();
        worst = worst.max((model - s.1).norm());
    }
    Ok(SideFit {
        coeffs,
        residual: if scale > 0.0 { worst / scale } else { 0.0 },
    })
}

/// Transform with the algebraic tails of `f` summed analytically.
pub fn fourier_transform_with_tail(f: &GridFunction, tail: &AlgebraicTail) -> Result<TailCorrectedTransform> {
    if tail.powers.is_empty() || tail.powers.iter().any(|&p| p < 2) {
        return Err(Error::InvalidArgument("tail powers must be at least 2".into()));
    }
    if !(tail.window_fraction > 0.0 && tail.window_fraction < 1.0) {
        return Err(Error::InvalidArgument(
            "tail window fraction must lie in (0, 1)".into(),
        ));
    }
    let g = f.grid();
    let l = g.half_width();
    let n = g.len();
    let edge = (1.0 - tail.window_fraction) * l;
    let right: Vec<(f64, Complex64)> = f.iter().filter(|(x, _)| *x >= edge).collect();
    let left: Vec<(f64, Complex64)> = f.iter().filter(|(x, _)| *x <= -edge).collect();
    let rf = fit_side(&right, l, &tail.powers)?;
    let lf = fit_side(&left, l, &tail.powers)?;

    // Right tail x = L + (k' + bN)Δx, b ≥ 0, folds onto index k'.
    // Left tail x = −L − (i + bN)Δx, i = 1..=N, folds onto index N − i.
    let mut folded = f.values().to_vec();
    let nf = n as f64;
    for k in 0..n {
        let mut add = Complex64::new(0.0, 0.0);
        for (j, &p) in tail.powers.iter().enumerate() {
            // c (L/x)^p = c L^p x^{−p};  Σ_b (2L)^{−p} (1/2 + k/N + b)^{−p}
            let factor = 0.5f64.powi(p as i32);
            add += rf.coeffs[j] * factor * hurwitz_zeta(p, 0.5 + k as f64 / nf);
        }
        folded[k] += add;
    }
    for i in 1..=n {
        let mut add = Complex64::new(0.0, 0.0);
        for (j, &p) in tail.powers.iter().enumerate() {
            let factor = 0.5f64.powi(p as i32);
            add += lf.coeffs[j] * factor * hurwitz_zeta(p, 0.5 + i as f64 / nf);
        }
        folded[(n - i) % n] += add;
    }
    let spectrum = GridFunction::new(g.reciprocal(), forward_raw(&folded, g.spacing()))?;
    Ok(TailCorrectedTransform {
        spectrum,
        fit_residual: rf.residual.max(lf.residual),
    })
}
