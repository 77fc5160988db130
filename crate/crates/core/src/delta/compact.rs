//! Compactly supported flavor: `f = ω·ψ` with a smooth cutoff `ω`, and the
//! residual `h` with `Σ(−1)^j b_j f^{(2j)} = δ + h`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::approximant::{
    build_schwartz_approximant, partial_fractions, BoundSequence, DeltaApproximant, Flavor,
};
use super::jet::Jet;
use super::sobolev::{uniform_derivative_bound, MAX_UNIFORM_ORDER};
use crate::error::{Error, Result};
use crate::gridfn::{Grid, GridFunction};

/// Largest partial-sum increment on the annulus accepted as converged.
pub const CAUCHY_TOLERANCE: f64 = 1e-10;

/// Pieces specific to the compact flavor.
#[derive(Clone, Debug, Serialize)]
pub struct CompactParts {
    pub sigma: f64,
    /// Bounds after the shrink step, `B'_j`.
    pub shrunk_bounds: BoundSequence,
    /// `c_k` for `k ≤ 10`.
    pub derivative_bounds: Vec<f64>,
    /// Indices `k > 10` for which `c_10` stood in for `c_k`.
    pub reused_bounds: Vec<usize>,
    #[serde(skip)]
    pub cutoff: Option<GridFunction>,
    /// The Schwartz kernel `ψ` on the grid.
    #[serde(skip)]
    pub kernel: Option<GridFunction>,
    #[serde(skip)]
    pub h: GridFunction,
    /// Largest last increment `|b_N f^{(2N)}|` on the annulus.
    pub last_increment: f64,
    /// Largest `|Σ(−1)^j b_j f^{(2j)}|` over `0 < |x| < σ`, where it vanishes
    /// in exact arithmetic.
    pub interior_residual: f64,
}

/// Smooth step `S(t) = g(t)/(g(t) + g(1 − t))`, `g(t) = e^{−1/t}` for `t > 0`.
fn step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        // S = 1/(1 + e^u), u = 1/t − 1/(1 − t)
        let u = 1.0 / t - 1.0 / (1.0 - t);
        if u > 0.0 {
            let e = (-u).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + u.exp())
        }
    }
}

/// Cutoff `ω(x) = S((2σ − |x|)/σ)`: even, 1 on `[−σ, σ]`, 0 outside
/// `(−2σ, 2σ)`.
pub fn cutoff(x: f64, sigma: f64) -> f64 {
    step((2.0 * sigma - x.abs()) / sigma)
}

/// Taylor jet of `ω` at `x₀`.
pub fn cutoff_jet(x0: f64, sigma: f64, degree: usize) -> Jet {
    let t0 = (2.0 * sigma - x0.abs()) / sigma;
    if t0 >= 1.0 {
        return Jet::constant(1.0, degree);
    }
    if t0 <= 0.0 {
        return Jet::constant(0.0, degree);
    }
    let t = Jet::linear(t0, -x0.signum() / sigma, degree);
    let one_minus = Jet::linear(1.0 - t0, x0.signum() / sigma, degree);
    let u = &t.recip() - &one_minus.recip();
    let one = Jet::constant(1.0, degree);
    if u.value() > 0.0 {
        let e = (-&u).exp();
        &e * &(&one + &e).recip()
    } else {
        (&one + &u.exp()).recip()
    }
}

/// Taylor jet of `ψ(x) = Σ_n A_n π a_n e^{−2π a_n |x|}` at `x₀ ≠ 0`.
fn kernel_jet(fractions: &[(f64, f64)], x0: f64, degree: usize) -> Jet {
    let mut c = vec![0.0; degree + 1];
    for &(a, coef) in fractions {
        let rate = -2.0 * PI * a * x0.signum();
        let mut term = coef * PI * a * (-2.0 * PI * a * x0.abs()).exp();
        for (k, ck) in c.iter_mut().enumerate() {
            *ck += term;
            term *= rate / (k + 1) as f64;
        }
    }
    Jet::from_coefficients(c)
}

/// `Σ_{j≤n} (−1)^j b_j f^{(2j)}(x)` for every `n ≤ N`, from the jet of `f`.
fn partial_sums(b: &[f64], f: &Jet) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(b.len());
    for (j, bj) in b.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * bj * f.derivative(2 * j);
        out.push(acc);
    }
    out
}

/// Builds `f = ω·ψ_λ` and `h`.
///
/// Shrink step: with `c_k` from [`uniform_derivative_bound`] the bounds
/// become `B'_j = min(B_j, 1/(j² c_{2j}), …, 1/(j² c_{3j}))`, and the
/// Schwartz approximant is built under `B'`. Indices past 10 reuse `c_10`.
pub fn build_compact_approximant(
    bounds: &BoundSequence,
    terms: usize,
    factors: usize,
    grid: Grid,
    sigma: f64,
) -> Result<DeltaApproximant> {
    if !(sigma > 0.0 && 2.0 * sigma < grid.half_width() / 4.0) {
        return Err(Error::InvalidArgument(format!(
            "σ = {sigma} needs 0 < 2σ < L/4 = {}",
            grid.half_width() / 4.0
        )));
    }
    let c: Vec<f64> = (0..=MAX_UNIFORM_ORDER)
        .map(|k| uniform_derivative_bound(k, grid))
        .collect::<Result<_>>()?;
    let mut reused = Vec::new();
    let mut shrunk = bounds.values().to_vec();
    for (j, bj) in shrunk.iter_mut().enumerate().skip(1) {
        for k in 2 * j..=3 * j {
            let ck = if k <= MAX_UNIFORM_ORDER {
                c[k]
            } else {
                if !reused.contains(&k) {
                    reused.push(k);
                }
                c[MAX_UNIFORM_ORDER]
            };
            *bj = bj.min(1.0 / ((j * j) as f64 * ck));
        }
    }
    let shrunk = BoundSequence::new(shrunk)?;
    let schwartz = build_schwartz_approximant(&shrunk, terms, factors, grid)?;
    let fractions = partial_fractions(&schwartz.zeros.values());
    let degree = 2 * factors;
    let b = schwartz.b.clone();

    let omega = GridFunction::sample(grid, |x| cutoff(x, sigma))?;
    let f = GridFunction::sample(grid, |x| {
        let w = cutoff(x, sigma);
        if w == 0.0 {
            0.0
        } else {
            w * kernel_jet(&fractions, x, 0).value()
        }
    })?;
    let mut h = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut last = 0.0f64;
    let mut interior = 0.0f64;
    for (k, hk) in h.iter_mut().enumerate() {
        let x = grid.abscissa(k);
        let ax = x.abs();
        if ax == 0.0 || ax > 2.0 * sigma {
            continue;
        }
        let fj = &cutoff_jet(x, sigma, degree) * &kernel_jet(&fractions, x, degree);
        let sums = partial_sums(&b, &fj);
        let total = *sums.last().expect("b is nonempty");
        if ax < sigma {
            interior = interior.max(total.abs());
        } else {
            *hk = Complex64::new(total, 0.0);
            let n = sums.len();
            if n >= 2 {
                last = last.max((sums[n - 1] - sums[n - 2]).abs());
            }
        }
    }
    if last > CAUCHY_TOLERANCE {
        return Err(Error::ConvergenceStall { increment: last });
    }
    let h = GridFunction::new(grid, h)?;
    let kernel = schwartz.psi.clone();
    Ok(DeltaApproximant {
        flavor: Flavor::Compact,
        b,
        zeros: schwartz.zeros,
        scale: schwartz.scale,
        terms,
        grid,
        psi: f,
        compact: Some(CompactParts {
            sigma,
            shrunk_bounds: shrunk,
            derivative_bounds: c,
            reused_bounds: reused,
            cutoff: Some(omega),
            kernel: Some(kernel),
            h,
            last_increment: last,
            interior_residual: interior,
        }),
    })
}
