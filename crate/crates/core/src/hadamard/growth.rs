//! Order of growth of entire functions `E(z) = Σ c(n) zⁿ` from the slope of
//! `log log E(r)` against `log r`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, Tolerance};
use crate::numeric::sum::NeumaierSum;

/// `ln c(n)`, extended to real `n ≥ 0`. The extension must be smooth and
/// make `n ln r + ln c(n)` unimodal.
pub trait LogCoefficients {
    fn ln_coefficient(&self, n: f64) -> f64;
}

impl<F: Fn(f64) -> f64> LogCoefficients for F {
    fn ln_coefficient(&self, n: f64) -> f64 {
        self(n)
    }
}

/// `c(n) = 1/(n!)^p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorialPower(pub f64);

impl LogCoefficients for FactorialPower {
    fn ln_coefficient(&self, n: f64) -> f64 {
        -self.0 * ln_gamma(n + 1.0)
    }
}

// Terms below e^{−CUT} of the largest one are dropped.
const CUT: f64 = 46.0;

fn peak<C: LogCoefficients + ?Sized>(c: &C, ln_r: f64) -> f64 {
    let phi = |n: f64| n * ln_r + c.ln_coefficient(n);
    let mut hi = 1.0;
    while phi(2.0 * hi) > phi(hi) && hi < 1e300 {
        hi *= 2.0;
    }
    let (mut a, mut b) = (0.0, 2.0 * hi);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (phi(x1), phi(x2));
    for _ in 0..200 {
        if (b - a) <= 1e-9 * b.max(1.0) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = phi(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = phi(x1);
        }
    }
    0.5 * (a + b)
}

/// `ln Σ_n c(n) rⁿ`, by log-sum-exp around the largest term.
///
/// When the peak is wider than a few thousand terms the sum is replaced by
/// the integral over `n`; for such smooth, wide summands the two agree to
/// far below double precision.
pub fn ln_series_value<C: LogCoefficients + ?Sized>(c: &C, r: f64) -> f64 {
    let ln_r = r.ln();
    let phi = |n: f64| n * ln_r + c.ln_coefficient(n);
    let n_star = peak(c, ln_r);
    let h = (1e-3 * n_star).max(1.0);
    let curvature = -(phi(n_star + h) - 2.0 * phi(n_star) + phi((n_star - h).max(0.0))) / (h * h);
    let width = if curvature > 0.0 {
        curvature.sqrt().recip()
    } else {
        f64::INFINITY
    };
    let top = phi(n_star);
    if width.is_finite() && width > 2000.0 && n_star > 20.0 * width {
        let half = 12.0 * width;
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-13,
            max_intervals: 2000,
        };
        let est = integrate(|n| (phi(n) - top).exp(), n_star - half, n_star + half, tol);
        return top + est.value.ln();
    }
    let centre = n_star.round() as u64;
    let mut acc = NeumaierSum::new();
    acc.add((phi(centre as f64) - top).exp());
    let mut n = centre + 1;
    loop {
        let t = phi(n as f64) - top;
        acc.add(t.exp());
        if t < -CUT {
            break;
        }
        n += 1;
    }
    let mut n = centre;
    while n > 0 {
        n -= 1;
        let t = phi(n as f64) - top;
        acc.add(t.exp());
        if t < -CUT {
            break;
        }
    }
    top + acc.value().ln()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub order: f64,
    pub intercept: f64,
    /// Root-mean-square misfit of `log log E`.
    pub residual: f64,
}

/// Least-squares slope of `ln ln E(r)` against `ln r`.
pub fn growth_order_fit<C: LogCoefficients + ?Sized>(c: &C, radii: &[f64]) -> Result<GrowthFit> {
    if radii.len() < 4 {
        return Err(Error::TooFewRadii(radii.len()));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) || radii[0] <= 0.0 {
        return Err(Error::InvalidArgument(
            "radii must be positive and ascending".into(),
        ));
    }
    let mut pts = Vec::with_capacity(radii.len());
    for &r in radii {
        let ln_e = ln_series_value(c, r);
        if !(ln_e > 0.0) {
            return Err(Error::InvalidArgument(format!("E({r}) ≤ 1; choose larger radii")));
        }
        pts.push((r.ln(), ln_e.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let order = sxy / sxx;
    let intercept = my - order * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - order * p.0).powi(2)).sum();
    Ok(GrowthFit {
        order,
        intercept,
        residual: (rss / n).sqrt(),
    })
}

/// Log-spaced radii from `10^lo` to `10^hi`.
pub fn log_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_series_sums_to_r() {
        for r in [0.5, 3.0, 150.0, 1e5, 1e12] {
            let v = ln_series_value(&FactorialPower(1.0), r);
            assert!((v - r).abs() < 1e-12 * r.max(1.0), "{r}: {v}");
        }
    }

    #[test]
    fn matches_direct_summation_for_small_radii() {
        let r: f64 = 40.0;
        let direct: f64 = (0..60)
            .map(|n| r.powi(n) / (1..=n).map(|k| k as f64).product::<f64>().powi(2))
            .sum();
        let v = ln_series_value(&FactorialPower(2.0), r);
        assert!((v - direct.ln()).abs() < 1e-13 * direct.ln());
    }

    #[test]
    fn orders() {
        let radii = log_radii(8.0, 16.0, 9);
        let four = growth_order_fit(&FactorialPower(4.0), &radii).unwrap();
        let two = growth_order_fit(&FactorialPower(2.0), &radii).unwrap();
        let one = growth_order_fit(&FactorialPower(1.0), &radii).unwrap();
        assert!((four.order - 0.25).abs() < 0.02, "{}", four.order);
        assert!((two.order - 0.5).abs() < 0.02, "{}", two.order);
        assert!((one.order - 1.0).abs() < 0.02, "{}", one.order);
    }

    #[test]
    fn too_few_radii() {
        assert!(matches!(
            growth_order_fit(&FactorialPower(1.0), &[1.0, 2.0, 3.0]),
            Err(Error::TooFewRadii(3))
        ));
    }
}
