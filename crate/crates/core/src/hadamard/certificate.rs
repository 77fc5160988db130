use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::product::reciprocal_product_grid;
use super::zeros::ZeroSequence;
use crate::error::{Error, Result};
use crate::gridfn::{
    decay_rate, fourier_transform, fourier_transform_with_tail, seminorm_report_on, AlgebraicTail, DecayFit,
    DerivativeOptions, GridFunction, SeminormReport, BOUNDARY_TOLERANCE,
};

/// Seminorm table and Fourier decay fit for `1/∏(1 + x²/a_n²)`.
///
/// The function is sampled on `[−2L, 2L)`; seminorms are sups over
/// `[−L, L)` and the decay fit uses the transform of the wider samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchwartzCertificate {
    pub report: SeminormReport,
    pub decay: DecayFit,
    /// Smallest acceptable decay rate, `0.8 · 2π a₁`.
    pub rate_threshold: f64,
    pub passed: bool,
    /// Why the certificate failed; empty when it passed.
    pub failures: Vec<String>,
}

/// Window `ξ_lo ≤ |ξ| ≤ ξ_hi` where `|f̂|` falls from `10⁻³` to `10⁻¹⁰` of its
/// peak (clipped above the rounding floor of the transform).
pub fn spectral_fit_window(spectrum: &GridFunction) -> Result<(f64, f64)> {
    let peak = spectrum.max_abs();
    let floor = (1e-10 * peak).max(1e-13 * peak + 1e-300);
    let mut lo = None;
    let mut hi = None;
    let origin = spectrum.grid().origin();
    for k in origin..spectrum.len() {
        let xi = spectrum.grid().abscissa(k);
        let v = spectrum.at(k).norm();
        if lo.is_none() && v < 1e-3 * peak {
            lo = Some(xi);
        }
        if lo.is_some() && v < floor {
            break;
        }
        if lo.is_some() {
            hi = Some(xi);
        }
    }
    match (lo, hi) {
        (Some(a), Some(b)) if a < b => Ok((a, b)),
        _ => Err(Error::InvalidArgument(
            "spectrum does not decay across a usable window".into(),
        )),
    }
}

/// Transform of `f`, with the algebraic tail model when `f` is not
/// negligible at the grid edge.
pub fn robust_transform(f: &GridFunction) -> Result<GridFunction> {
    if f.is_boundary_negligible(BOUNDARY_TOLERANCE) {
        Ok(fourier_transform(f))
    } else {
        Ok(fourier_transform_with_tail(f, &AlgebraicTail::default())?.spectrum)
    }
}

pub fn schwartz_certificate(
    zeros: &ZeroSequence,
    half_width: f64,
    n: usize,
    orders: (u32, usize),
) -> Result<SchwartzCertificate> {
    // sampled on a doubled grid with the same spacing; sups are taken over
    // the requested [−L, L) only
    let f = reciprocal_product_grid(zeros, 2.0 * half_width, 2 * n)?;
    let report = seminorm_report_on(&f, n, orders.0, orders.1, &DerivativeOptions::default())?;
    let spectrum = robust_transform(&f)?;
    let decay = decay_rate(&spectrum, spectral_fit_window(&spectrum)?)?;
    let rate_threshold = 0.8 * 2.0 * PI * zeros.first();
    let mut failures = Vec::new();
    if !report.all_finite() {
        failures.push("non-finite seminorm".to_string());
    }
    for e in &report.entries {
        if e.noisy {
            failures.push(format!("|f|_{{{},{}}} is spectrally noisy", e.m, e.n));
        }
        if e.growing {
            failures.push(format!(
                "|f|_{{{},{}}} peaks at x = {:.3}, in the outer half of the grid",
                e.m, e.n, e.argmax
            ));
        }
    }
    if !(decay.rate >= rate_threshold) {
        failures.push(format!(
            "Fourier decay rate {:.4} below {:.4}",
            decay.rate, rate_threshold
        ));
    }
    Ok(SchwartzCertificate {
        passed: failures.is_empty(),
        report,
        decay,
        rate_threshold,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinh_product_is_certified() {
        let z = ZeroSequence::linear(PI, ZeroSequence::default_count(PI, 24.0)).unwrap();
        let c = schwartz_certificate(&z, 24.0, 4096, (4, 6)).unwrap();
        assert!(c.passed, "{:?}", c.failures);
        assert!(
            (c.decay.rate / (2.0 * PI * PI) - 1.0).abs() < 0.02,
            "{}",
            c.decay.rate
        );
    }

    #[test]
    fn single_factor_fails_at_weight_four() {
        let z = ZeroSequence::explicit(vec![1.0]).unwrap();
        let c = schwartz_certificate(&z, 64.0, 4096, (4, 0)).unwrap();
        assert!((c.decay.rate / (2.0 * PI) - 1.0).abs() < 0.01, "{}", c.decay.rate);
        assert!(c.report.get(4, 0).unwrap().growing);
        assert!(!c.passed);
    }

    #[test]
    fn unit_linear_family_on_a_small_grid() {
        let z = ZeroSequence::linear(1.0, ZeroSequence::default_count(1.0, 12.0)).unwrap();
        let c = schwartz_certificate(&z, 12.0, 512, (2, 2)).unwrap();
        assert!(c.passed, "{:?}", c.failures);
    }
}
