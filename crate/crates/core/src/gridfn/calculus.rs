use num_complex::Complex64;
use std::f64::consts::PI;

use super::fourier::{fourier_transform, inverse_fourier_transform};
use super::grid::GridFunction;
use crate::error::{Error, Result};
use crate::numeric::sum::{ComplexSum, NeumaierSum};

/// Default cap on the derivative order.
pub const DEFAULT_MAX_ORDER: usize = 24;

/// `(f ∗ g)(x) = ∫ f(x − y) g(y) dy` by transform, multiply, invert.
///
/// The result is the periodic convolution on `[−L, L)`; it agrees with the
/// convolution on the line when both inputs are boundary-negligible.
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.check_same_grid(g)?;
    let fh = fourier_transform(f);
    let gh = fourier_transform(g);
    Ok(inverse_fourier_transform(&fh.mul(&gh)?))
}

/// Multiplies the transform of `f` by `symbol(ξ)` and transforms back.
pub fn apply_symbol<S: Fn(f64) -> Complex64>(f: &GridFunction, symbol: S) -> GridFunction {
    let fh = fourier_transform(f);
    let values = fh.iter().map(|(xi, v)| v * symbol(xi)).collect();
    inverse_fourier_transform(&GridFunction::from_parts(fh.grid(), values))
}

/// Trapezoid estimate of `∫ f(x) τ(x) dx`.
pub fn pair(f: &GridFunction, tau: &GridFunction) -> Result<Complex64> {
    f.check_same_grid(tau)?;
    let s: ComplexSum = f.values().iter().zip(tau.values()).map(|(a, b)| a * b).collect();
    Ok(s.value() * f.grid().spacing())
}

/// Knobs of the spectral derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeOptions {
    pub max_order: usize,
    /// Result flagged noisy when more than this share of its spectral energy
    /// sits in the top quartile of `|ξ|`.
    pub noise_fraction: f64,
    /// Transform modes below `spectral_floor · max|f̂|` are treated as zero
    /// before multiplication.
    pub spectral_floor: f64,
}

impl Default for DerivativeOptions {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
            noise_fraction: 1e-6,
            spectral_floor: 1e-14,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Derivative {
    pub function: GridFunction,
    /// Share of spectral energy of the result in the top quartile of `|ξ|`.
    pub noise_fraction: f64,
    pub noisy: bool,
}

/// Spectral derivative with default options.
pub fn derivative(f: &GridFunction, order: usize) -> Result<GridFunction> {
    derivative_with(f, order, &DerivativeOptions::default()).map(|d| d.function)
}

/// Spectral derivative: multiplies `f̂` by `(2πiξ)^order`.
///
/// For odd orders the Nyquist mode is dropped so that real inputs give real
/// outputs.
pub fn derivative_with(f: &GridFunction, order: usize, opts: &DerivativeOptions) -> Result<Derivative> {
    if order > opts.max_order {
        return Err(Error::OrderTooHigh {
            order,
            max: opts.max_order,
        });
    }
    if order == 0 {
        return Ok(Derivative {
            function: f.clone(),
            noise_fraction: 0.0,
            noisy: false,
        });
    }
    let fh = fourier_transform(f);
    let floor = opts.spectral_floor * fh.max_abs();
    let i_pow = Complex64::new(0.0, 1.0).powi(order as i32);
    let odd = order % 2 == 1;
    let mut values = Vec::with_capacity(fh.len());
    for (m, (xi, v)) in fh.iter().enumerate() {
        if v.norm() <= floor || (odd && m == 0) {
            values.push(Complex64::new(0.0, 0.0));
        } else {
            values.push(v * i_pow * (2.0 * PI * xi).powi(order as i32));
        }
    }
    let xi_max = fh.grid().half_width();
    let mut top = NeumaierSum::new();
    let mut total = NeumaierSum::new();
    for (m, v) in values.iter().enumerate() {
        let e = v.norm_sqr();
        total.add(e);
        if fh.grid().abscissa(m).abs() >= 0.75 * xi_max {
            top.add(e);
        }
    }
    let share = if total.value() > 0.0 {
        top.value() / total.value()
    } else {
        0.0
    };
    let spectrum = GridFunction::new(fh.grid(), values)?;
    Ok(Derivative {
        function: inverse_fourier_transform(&spectrum),
        noise_fraction: share,
        noisy: share > opts.noise_fraction,
    })
}

/// `⟨v, τ⟩ + jump · τ(0)`: the pairing of a distributional derivative whose
/// classical part is `v` and which jumps by `jump` at the origin.
pub fn jump_derivative_pairing(v: &GridFunction, jump: f64, tau: &GridFunction) -> Result<Complex64> {
    Ok(pair(v, tau)? + jump * tau.at_origin())
}
