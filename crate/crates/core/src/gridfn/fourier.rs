//! Continuous-normalization Fourier transform `f̂(ξ) = ∫ f(x) e^{−2πiξx} dx`
//! realised as a phase-corrected FFT.
//!
//! With `x_k = −L + kΔx` and `ξ_m = (m − N/2)/(2L)` the trapezoid sum becomes
//! `f̂_m = Δx (−1)^{m−N/2} DFT[(−1)^k f_k]_m`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{GridFunction, BOUNDARY_TOLERANCE};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

#[inline]
fn alternate(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Forward transform on raw samples; `scale` multiplies the result.
pub(crate) fn forward_raw(values: &[Complex64], scale: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().enumerate().map(|(k, v)| v * alternate(k)).collect();
    plan(n, false).process(&mut buf);
    // (−1)^{N/2} = 1 for N ≥ 8
    for (m, v) in buf.iter_mut().enumerate() {
        *v *= scale * alternate(m);
    }
    buf
}

fn inverse_raw(values: &[Complex64], scale: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().enumerate().map(|(m, v)| v * alternate(m)).collect();
    plan(n, true).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= scale * alternate(k);
    }
    buf
}

/// Samples of `f̂` on the reciprocal grid.
pub fn fourier_transform(f: &GridFunction) -> GridFunction {
    let g = f.grid();
    GridFunction::from_parts(g.reciprocal(), forward_raw(f.values(), g.spacing()))
}

/// Inverse transform `f(x) = ∫ f̂(ξ) e^{2πiξx} dξ`; maps the reciprocal grid
/// back to the original one.
pub fn inverse_fourier_transform(spectrum: &GridFunction) -> GridFunction {
    let g = spectrum.grid();
    GridFunction::from_parts(g.reciprocal(), inverse_raw(spectrum.values(), g.spacing()))
}

/// Transform together with the boundary diagnostic of its input.
#[derive(Clone, Debug)]
pub struct CheckedTransform {
    pub spectrum: GridFunction,
    /// Largest `|f|` on the outer 5% of samples.
    pub boundary_mass: f64,
    /// `boundary_mass` below the tolerance; otherwise the transform carries
    /// truncation error of that order.
    pub boundary_negligible: bool,
}

pub fn fourier_transform_checked(f: &GridFunction, tolerance: Option<f64>) -> CheckedTransform {
    let tol = tolerance.unwrap_or(BOUNDARY_TOLERANCE);
    let mass = f.boundary_mass();
    CheckedTransform {
        spectrum: fourier_transform(f),
        boundary_mass: mass,
        boundary_negligible: mass < tol,
    }
}
