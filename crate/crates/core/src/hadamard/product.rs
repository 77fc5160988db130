use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::zeros::ZeroSequence;
use crate::error::Result;
use crate::gridfn::{Grid, GridFunction};
use crate::numeric::special::ln_1p_complex;
use crate::numeric::sum::{ComplexSum, NeumaierSum};

/// Magnitude above which values are reported in log form.
pub const OVERFLOW_THRESHOLD: f64 = 1e300;

/// A complex value, or its logarithm when the magnitude would overflow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ProductValue {
    Direct(Complex64),
    Log { log_magnitude: f64, phase: f64 },
}

impl ProductValue {
    pub fn from_log(log: Complex64) -> Self {
        if log.re > OVERFLOW_THRESHOLD.ln() {
            ProductValue::Log {
                log_magnitude: log.re,
                phase: log.im,
            }
        } else {
            ProductValue::Direct(log.exp())
        }
    }

    pub fn direct(&self) -> Option<Complex64> {
        match *self {
            ProductValue::Direct(v) => Some(v),
            ProductValue::Log { .. } => None,
        }
    }

    pub fn log_magnitude(&self) -> f64 {
        match *self {
            ProductValue::Direct(v) => v.norm().ln(),
            ProductValue::Log { log_magnitude, .. } => log_magnitude,
        }
    }
}

/// Truncated product together with its tail information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEval {
    /// `Σ_{n ≤ count} ln(1 + z²/a_n²)`.
    pub log_truncated: Complex64,
    /// `ln ∏_{n > count}(1 + z²/a_n²)`, from the tail power sums.
    pub log_tail: Complex64,
    /// `Σ_{n > count} 1/a_n²` bound.
    pub tail_bound: f64,
    pub z: Complex64,
}

impl ProductEval {
    pub fn truncated(&self) -> ProductValue {
        ProductValue::from_log(self.log_truncated)
    }

    /// Truncated product times the estimated tail factor.
    pub fn corrected(&self) -> ProductValue {
        ProductValue::from_log(self.log_truncated + self.log_tail)
    }

    /// Estimated tail factor `∏_{n > count}(1 + z²/a_n²)`.
    pub fn tail_factor(&self) -> Complex64 {
        self.log_tail.exp()
    }

    /// Companion bound `exp(z² · tail_bound)`; for real `z` it dominates the
    /// tail factor.
    pub fn companion_factor(&self) -> Complex64 {
        (self.z * self.z * self.tail_bound).exp()
    }
}

fn log_truncated_real(zeros: &[f64], x: f64) -> f64 {
    let x2 = x * x;
    zeros
        .iter()
        .map(|a| (x2 / (a * a)).ln_1p())
        .collect::<NeumaierSum>()
        .value()
}

fn log_truncated_complex(zeros: &[f64], z: Complex64) -> Complex64 {
    let z2 = z * z;
    zeros
        .iter()
        .map(|a| ln_1p_complex(z2 / (a * a)))
        .collect::<ComplexSum>()
        .value()
}

/// `ln ∏_{n>count}(1 + w/a_n²)` with `w = z²`.
fn log_tail(zeros: &ZeroSequence, w: Complex64) -> Complex64 {
    if !zeros.has_tail() {
        return Complex64::new(0.0, 0.0);
    }
    if let super::zeros::ZeroKind::Explicit(all) = zeros.kind() {
        return all[zeros.count()..]
            .iter()
            .map(|a| ln_1p_complex(w / (a * a)))
            .collect::<ComplexSum>()
            .value();
    }
    // ln(1+u) = u − u²/2 + u³/3 − …, summed over the tail
    let mut acc = ComplexSum::new();
    let mut wk = Complex64::new(1.0, 0.0);
    for k in 1..=6u32 {
        wk *= w;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc.add(wk * (sign * zeros.tail_power_sum(k) / k as f64));
    }
    acc.value()
}

/// Evaluates `∏_{n ≤ count}(1 + z²/a_n²)` with its tail information.
pub fn product_eval(zeros: &ZeroSequence, z: Complex64) -> ProductEval {
    let values = zeros.values();
    let log_truncated = if z.im == 0.0 {
        Complex64::new(log_truncated_real(&values, z.re), 0.0)
    } else {
        log_truncated_complex(&values, z)
    };
    let w = z * z;
    let mut tail = log_tail(zeros, w);
    if z.im == 0.0 {
        tail.im = 0.0;
    }
    ProductEval {
        log_truncated,
        log_tail: tail,
        tail_bound: zeros.tail_sum_bound(),
        z,
    }
}

/// `1/∏(1 + x²/a_n²)` including the tail estimate, for real `x`.
pub fn reciprocal_product_at(zeros: &ZeroSequence, x: f64) -> f64 {
    reciprocal_with(&zeros.values(), zeros, x)
}

fn reciprocal_with(values: &[f64], zeros: &ZeroSequence, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let log = log_truncated_real(values, x) + log_tail(zeros, Complex64::new(x * x, 0.0)).re;
    (-log).exp()
}

/// Samples `1/∏(1 + x²/a_n²)` on `[−L, L)` with `N` points.
///
/// Values lie in `(0, 1]`, equal 1 at the origin and are exactly even:
/// each value is computed once from `|x|` and mirrored.
pub fn reciprocal_product_grid(zeros: &ZeroSequence, half_width: f64, n: usize) -> Result<GridFunction> {
    let grid = Grid::new(half_width, n)?;
    let values = zeros.values();
    let dx = grid.spacing();
    // index N/2 ± j sits at |x| = j·Δx; j = N/2 is the sample at −L
    let half: Vec<f64> = (0..=n / 2)
        .into_par_iter()
        .map(|j| reciprocal_with(&values, zeros, j as f64 * dx))
        .collect();
    let samples: Vec<Complex64> = (0..n)
        .map(|k| {
            let j = k.abs_diff(n / 2);
            Complex64::new(half[j], 0.0)
        })
        .collect();
    GridFunction::new(grid, samples)
}
