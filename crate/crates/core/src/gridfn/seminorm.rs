use serde::{Deserialize, Serialize};

use super::calculus::{derivative_with, DerivativeOptions};
use super::grid::GridFunction;
use crate::error::{Error, Result};

/// Default floor below which `|f|` is not trusted in a log fit.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Dyadic shell radii as fractions of the half-width, innermost first.
pub const SHELLS: [f64; 4] = [1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0];

fn weighted_sup(f: &GridFunction, m: u32) -> (f64, f64) {
    let mut best = 0.0;
    let mut at = 0.0;
    for (x, v) in f.iter() {
        let w = x.abs().powi(m as i32) * v.norm();
        if w > best {
            best = w;
            at = x;
        }
    }
    (best, at)
}

/// `sup_x |x^m f^{(n)}(x)|` over the grid.
pub fn seminorm(f: &GridFunction, m: u32, n: usize) -> Result<f64> {
    let d = derivative_with(f, n, &DerivativeOptions::default())?;
    Ok(weighted_sup(&d.function, m).0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormEntry {
    pub m: u32,
    pub n: usize,
    pub estimate: f64,
    /// Abscissa where the sup is attained.
    pub argmax: f64,
    /// The derivative carried a spectral-noise warning.
    pub noisy: bool,
    /// The sup sits in the outer half `|x| ≥ L/2` of the grid, so the
    /// estimate is probably limited by the grid extent rather than by `f`.
    pub growing: bool,
}

/// Seminorm table plus the outer-shell decay profile of `f`.
///
/// Estimates are sups over the grid. `outer_profile` holds
/// `sup_{|x| ≥ L/2} |x|^k |f|` for each weight `k ≤ max_m` and bounds how much
/// of `f` lies beyond the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormReport {
    pub entries: Vec<SeminormEntry>,
    pub half_width: f64,
    pub outer_profile: Vec<(u32, f64)>,
}

impl SeminormReport {
    pub fn get(&self, m: u32, n: usize) -> Option<&SeminormEntry> {
        self.entries.iter().find(|e| e.m == m && e.n == n)
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|e| e.estimate.is_finite())
    }

    pub fn any_noisy(&self) -> bool {
        self.entries.iter().any(|e| e.noisy)
    }

    pub fn any_growing(&self) -> bool {
        self.entries.iter().any(|e| e.growing)
    }
}

/// All seminorms `|f|_{m,n}` for `m ≤ max_m`, `n ≤ max_n`.
pub fn seminorm_report(
    f: &GridFunction,
    max_m: u32,
    max_n: usize,
    opts: &DerivativeOptions,
) -> Result<SeminormReport> {
    seminorm_report_on(f, f.len(), max_m, max_n, opts)
}

/// Like [`seminorm_report`], but derivatives are taken on the full grid of
/// `f` and sups only over its central `window` samples. A wide guard band
/// keeps wraparound from an edge that is small but not negligible out of
/// the reported values.
pub fn seminorm_report_on(
    f: &GridFunction,
    window: usize,
    max_m: u32,
    max_n: usize,
    opts: &DerivativeOptions,
) -> Result<SeminormReport> {
    let inner = f.central(window)?;
    let l = inner.grid().half_width();
    let mut entries = Vec::new();
    for n in 0..=max_n {
        let d = derivative_with(f, n, opts)?;
        let dn = d.function.central(window)?;
        for m in 0..=max_m {
            let (estimate, argmax) = weighted_sup(&dn, m);
            entries.push(SeminormEntry {
                m,
                n,
                estimate,
                argmax,
                noisy: d.noisy,
                growing: estimate > 0.0 && argmax.abs() >= 0.5 * l,
            });
        }
    }
    let powers: Vec<u32> = (0..=max_m).collect();
    let profile = rapid_decay_profile(&inner, &powers);
    Ok(SeminormReport {
        entries,
        half_width: l,
        outer_profile: powers
            .iter()
            .map(|&k| (k, profile.outermost(k).unwrap_or(0.0)))
            .collect(),
    })
}

/// Least-squares fit `log|f| ≈ offset − rate·|ξ|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub rate: f64,
    pub offset: f64,
    pub fit_window: (f64, f64),
    /// Root-mean-square misfit of the log values.
    pub residual: f64,
    pub samples: usize,
}

/// Fits the exponential decay of `|f|` over `ξ_lo ≤ |ξ| ≤ ξ_hi`.
pub fn decay_rate(f: &GridFunction, window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "fit window ({lo}, {hi}) is empty"
        )));
    }
    let mut pts = Vec::new();
    for (x, v) in f.iter() {
        let a = x.abs();
        if a >= lo && a <= hi {
            let m = v.norm();
            if !(m > UNDERFLOW_FLOOR) {
                return Err(Error::BelowFloor(x));
            }
            pts.push((a, m.ln()));
        }
    }
    if pts.len() < 8 {
        return Err(Error::WindowTooShort {
            found: pts.len(),
            required: 8,
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let offset = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - offset - slope * p.0).powi(2)).sum();
    Ok(DecayFit {
        rate: -slope,
        offset,
        fit_window: window,
        residual: (rss / n).sqrt(),
        samples: pts.len(),
    })
}

/// `sup_{|x| ≥ R} |x|^k |f(x)|` for every requested `k` and each dyadic shell
/// `R ∈ {L/16, L/8, L/4, L/2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub half_width: f64,
    pub powers: Vec<u32>,
    /// `values[i][s]` belongs to `powers[i]` and shell `SHELLS[s]`.
    pub values: Vec<[f64; 4]>,
}

impl DecayProfile {
    fn row(&self, k: u32) -> Option<&[f64; 4]> {
        self.powers.iter().position(|&p| p == k).map(|i| &self.values[i])
    }

    /// Value at the outermost shell `|x| ≥ L/2`.
    pub fn outermost(&self, k: u32) -> Option<f64> {
        self.row(k).map(|r| r[3])
    }

    /// Largest value across the shells (always the innermost one).
    pub fn max_over_shells(&self, k: u32) -> Option<f64> {
        self.row(k).map(|r| r.iter().fold(0.0f64, |a, &b| a.max(b)))
    }

    /// One value per requested power: the outermost-shell sup.
    pub fn entries(&self) -> Vec<f64> {
        self.values.iter().map(|r| r[3]).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_finite())
    }

    /// Weight `k` decays on this grid when the sup beyond `L/2` is at most
    /// half the sup beyond `L/4`.
    pub fn is_decaying(&self, k: u32) -> bool {
        match self.row(k) {
            Some(r) => r[2] == 0.0 || r[3] <= 0.5 * r[2],
            None => false,
        }
    }
}

pub fn rapid_decay_profile(f: &GridFunction, powers: &[u32]) -> DecayProfile {
    let l = f.grid().half_width();
    let values = powers
        .iter()
        .map(|&k| {
            let mut row = [0.0f64; 4];
            for (x, v) in f.iter() {
                let w = x.abs().powi(k as i32) * v.norm();
                for (s, frac) in SHELLS.iter().enumerate() {
                    if x.abs() >= frac * l {
                        row[s] = row[s].max(w);
                    }
                }
            }
            row
        })
        .collect();
    DecayProfile {
        half_width: l,
        powers: powers.to_vec(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfn::Grid;
    use std::f64::consts::{E, PI};

    #[test]
    fn gaussian_seminorms() {
        let g = Grid::new(16.0, 1024).unwrap();
        let f = GridFunction::sample(g, |x| (-PI * x * x).exp()).unwrap();
        assert!((seminorm(&f, 0, 0).unwrap() - 1.0).abs() < 1e-15);
        // max of |x|e^{−πx²} at x = (2π)^{−1/2}; the grid misses it by at most Δx/2
        let exact = (2.0 * PI * E).powf(-0.5);
        let fine = Grid::new(16.0, 1 << 16).unwrap();
        let ff = GridFunction::sample(fine, |x| (-PI * x * x).exp()).unwrap();
        assert!((seminorm(&ff, 1, 0).unwrap() - exact).abs() < 1e-6);
    }

    #[test]
    fn zero_function_has_zero_seminorms() {
        let g = Grid::new(4.0, 64).unwrap();
        let z = GridFunction::zeros(g);
        for m in 0..3 {
            for n in 0..3 {
                assert_eq!(seminorm(&z, m, n).unwrap(), 0.0);
            }
        }
        let p = rapid_decay_profile(&z, &[0, 1, 5]);
        assert!(p.entries().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn exact_exponential_rate() {
        let g = Grid::new(16.0, 512).unwrap();
        let f = GridFunction::sample(g, |x| (-3.0 * x.abs()).exp()).unwrap();
        let fit = decay_rate(&f, (2.0, 10.0)).unwrap();
        assert!((fit.rate - 3.0).abs() < 1e-6);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn short_or_underflowing_windows_fail() {
        let g = Grid::new(16.0, 64).unwrap();
        let f = GridFunction::sample(g, |x| (-3.0 * x.abs()).exp()).unwrap();
        assert!(matches!(
            decay_rate(&f, (2.0, 3.0)),
            Err(Error::WindowTooShort { .. })
        ));
        let h = GridFunction::sample(g, |x| (-300.0 * x.abs()).exp()).unwrap();
        assert!(matches!(decay_rate(&h, (2.0, 10.0)), Err(Error::BelowFloor(_))));
    }

    #[test]
    fn lorentzian_is_not_decaying_at_order_four() {
        let g = Grid::new(64.0, 4096).unwrap();
        let f = GridFunction::sample(g, |x| 1.0 / (1.0 + x * x)).unwrap();
        let p = rapid_decay_profile(&f, &[0, 1, 4]);
        assert!(p.is_decaying(0));
        assert!(!p.is_decaying(4));
        // x⁴/(1+x²) ≈ x² at the grid edge
        let edge = p.outermost(4).unwrap();
        assert!(edge > 0.9 * 64.0 * 64.0, "{edge}");
    }

    #[test]
    fn gaussian_profile_is_tiny_far_out() {
        let g = Grid::new(16.0, 1024).unwrap();
        let f = GridFunction::sample(g, |x| (-PI * x * x).exp()).unwrap();
        let powers: Vec<u32> = (0..=8).collect();
        let p = rapid_decay_profile(&f, &powers);
        for k in powers {
            assert!(p.outermost(k).unwrap() < 1e-50);
            assert!(p.is_decaying(k));
        }
    }

    #[test]
    fn report_flags_the_outer_argmax() {
        let g = Grid::new(32.0, 1024).unwrap();
        let f = GridFunction::sample(g, |x| 1.0 / (1.0 + x * x)).unwrap();
        let r = seminorm_report(&f, 4, 0, &DerivativeOptions::default()).unwrap();
        assert!(!r.get(0, 0).unwrap().growing);
        assert!(r.get(4, 0).unwrap().growing);
        assert!(!r.get(1, 0).unwrap().growing);
    }
}
