use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::delta::{build_schwartz_approximant, diagonal_sequence, BoundSequence, DeltaApproximant};
use crate::error::{Error, Result};
use crate::gridfn::{
    derivative, fourier_transform, inverse_fourier_transform, seminorm, GridFunction, BOUNDARY_TOLERANCE,
};

/// Slack allowed between consecutive entries of the residual trace.
pub const RESIDUAL_SLACK: f64 = 0.10;

/// Residuals below this multiple of `‖φ‖_∞` are rounding noise and are not
/// compared in the trace.
const TRACE_FLOOR: f64 = 1e-13;

/// One seminorm `|f|_{m,k} = sup|x^m f^{(k)}|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeminormIndex {
    pub m: u32,
    pub k: usize,
}

/// `m, k ∈ {0, 1, 2}`.
pub fn default_seminorms() -> Vec<SeminormIndex> {
    let mut out = Vec::with_capacity(9);
    for m in 0..=2 {
        for k in 0..=2 {
            out.push(SeminormIndex { m, k });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundPolicy {
    /// Bounds from [`diagonal_sequence`] applied to the seminorm matrix of
    /// the target.
    Diagonal,
    Fixed(BoundSequence),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormValue {
    pub m: u32,
    pub k: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormTraceRow {
    pub n: usize,
    pub values: Vec<SeminormValue>,
}

impl SeminormTraceRow {
    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.value))
    }
}

/// Sups of the compact-flavor pieces outside `[−4σ, 4σ]`, and of `h` on
/// `[−σ, σ]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportMetrics {
    pub sigma: f64,
    pub big_phi_outside: f64,
    pub f_outside: f64,
    pub h_outside: f64,
    pub reconstruction_outside: f64,
    pub h_inner: f64,
}

impl SupportMetrics {
    pub fn max_outside(&self) -> f64 {
        self.big_phi_outside
            .max(self.f_outside)
            .max(self.h_outside)
            .max(self.reconstruction_outside)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationResult {
    pub target: String,
    #[serde(rename = "J")]
    pub terms: usize,
    #[serde(rename = "N_factors")]
    pub factors: usize,
    pub residual_sup: f64,
    pub residual_l2: f64,
    /// `‖(P_J ψ̂ − 1) φ̂‖_{L²}` on the frequency grid.
    pub spectral_residual_l2: f64,
    /// `(J', ‖φ − Φ_{J'}∗ψ‖_∞)` for `J' ≤ J`.
    pub residual_trace: Vec<(usize, f64)>,
    pub residual_not_decreasing: bool,
    pub seminorm_trace: Vec<SeminormTraceRow>,
    pub bounds: Vec<f64>,
    pub b: Vec<f64>,
    pub scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportMetrics>,
    #[serde(skip)]
    pub phi: GridFunction,
    #[serde(skip)]
    pub big_phi: GridFunction,
    /// `ψ`, or `f = ω·ψ` for the compact flavor.
    #[serde(skip)]
    pub psi: GridFunction,
    #[serde(skip)]
    pub h: Option<GridFunction>,
}

impl FactorizationResult {
    pub fn with_target(mut self, label: impl Into<String>) -> Self {
        self.target = label.into();
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

fn weighted_sup(f: &GridFunction, m: u32) -> f64 {
    f.iter()
        .map(|(x, v)| x.abs().powi(m as i32) * v.norm())
        .fold(0.0, f64::max)
}

/// `B_j` from [`diagonal_sequence`] with `b(j, n) = max_{(m,k)} sup|x^m φ^{(2j+k)}|`
/// over the given seminorms, capped at 1 (the factorial cap is below 1 for
/// every `j ≥ 1` and `b₀ = 1` is forced).
pub fn diagonal_bounds(
    phi: &GridFunction,
    terms: usize,
    seminorms: &[SeminormIndex],
) -> Result<BoundSequence> {
    let max_k = seminorms.iter().map(|s| s.k).max().unwrap_or(0);
    let derivs: Vec<GridFunction> = (0..=2 * terms + max_k)
        .map(|order| derivative(phi, order))
        .collect::<Result<_>>()?;
    let rows: Vec<f64> = (0..=terms)
        .map(|j| {
            seminorms
                .iter()
                .map(|s| weighted_sup(&derivs[2 * j + s.k], s.m))
                .fold(0.0, f64::max)
        })
        .collect();
    let a = diagonal_sequence(|j, _| rows[j], terms)?;
    BoundSequence::new(a.into_iter().map(|v| v.min(1.0)).collect())
}

fn symbol_spectrum(appx: &DeltaApproximant, n: usize, spectrum: &GridFunction) -> GridFunction {
    spectrum
        .map(|xi, v| v * appx.symbol(n, xi))
        .expect("symbol values are finite")
}

fn seminorm_row(f: &GridFunction, n: usize, seminorms: &[SeminormIndex]) -> Result<SeminormTraceRow> {
    let values = seminorms
        .iter()
        .map(|s| {
            Ok(SeminormValue {
                m: s.m,
                k: s.k,
                value: seminorm(f, s.m, s.k)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SeminormTraceRow { n, values })
}

/// `true` when some entry exceeds its predecessor by more than the slack.
/// Entries at rounding level are skipped.
pub fn trace_not_decreasing(trace: &[(usize, f64)], scale: f64) -> bool {
    let floor = TRACE_FLOOR * scale;
    trace
        .windows(2)
        .any(|w| w[1].1 > floor && w[1].1 > (1.0 + RESIDUAL_SLACK) * w[0].1)
}

/// `φ = Φ∗ψ` with `Φ̂ = P_J φ̂` and `ψ` from the Schwartz approximant built
/// under the selected bounds.
pub fn strong_factorize(
    phi: &GridFunction,
    terms: usize,
    factors: usize,
    policy: &BoundPolicy,
    seminorms: &[SeminormIndex],
) -> Result<FactorizationResult> {
    if phi.boundary_mass() > BOUNDARY_TOLERANCE * phi.max_abs() {
        return Err(Error::InvalidArgument(format!(
            "target is not negligible at the grid boundary (|φ| = {:e})",
            phi.boundary_mass()
        )));
    }
    let bounds = match policy {
        BoundPolicy::Diagonal => diagonal_bounds(phi, terms, seminorms)?,
        BoundPolicy::Fixed(b) => b.clone(),
    };
    let appx = build_schwartz_approximant(&bounds, terms, factors, phi.grid())?;
    let phi_hat = fourier_transform(phi);
    let psi_hat = appx.kernel_spectrum();
    let norm = phi.max_abs();

    let mut residual_trace = Vec::with_capacity(terms + 1);
    let mut seminorm_trace = Vec::with_capacity(terms + 1);
    let mut last = None;
    for n in 0..=terms {
        let big_hat = symbol_spectrum(&appx, n, &phi_hat);
        let conv_hat = big_hat.mul(&psi_hat)?;
        let residual = phi.sub(&inverse_fourier_transform(&conv_hat))?;
        residual_trace.push((n, residual.max_abs()));
        let big_phi = inverse_fourier_transform(&big_hat);
        seminorm_trace.push(seminorm_row(&big_phi, n, seminorms)?);
        last = Some((big_phi, residual));
    }
    let (big_phi, residual) = last.expect("the trace has at least one entry");
    // (P_J ψ̂ − 1) φ̂
    let spectral = phi_hat
        .zip_with(&psi_hat, |p, k| p * k)?
        .map(|xi, v| v * appx.symbol(terms, xi))?
        .sub(&phi_hat)?;
    Ok(FactorizationResult {
        target: "phi".into(),
        terms,
        factors,
        residual_sup: residual.max_abs(),
        residual_l2: residual.l2_norm(),
        spectral_residual_l2: spectral.l2_norm(),
        residual_not_decreasing: trace_not_decreasing(&residual_trace, norm),
        residual_trace,
        seminorm_trace,
        bounds: bounds.values().to_vec(),
        b: appx.coefficients().to_vec(),
        scale: appx.scale(),
        support: None,
        phi: phi.clone(),
        big_phi,
        psi: appx.psi().clone(),
        h: None,
    })
}

/// Single-factor case: `‖(φ − b₁φ″)∗ψ − φ‖_∞` with
/// `ψ̂ = 1/(1 + 4π² b₁ ξ²)`, i.e. `ψ(x) = e^{−|x|/√b₁}/(2√b₁)`.
pub fn bessel_identity_check(b1: f64, phi: &GridFunction) -> Result<f64> {
    if !(b1 > 0.0 && b1.is_finite()) {
        return Err(Error::InvalidArgument(format!("b₁ = {b1} must be positive")));
    }
    let d2 = derivative(phi, 2)?;
    let g = phi.sub(&d2.scale(Complex64::new(b1, 0.0)))?;
    let conv_hat = fourier_transform(&g).map(|xi, v| v / (1.0 + 4.0 * PI * PI * b1 * xi * xi))?;
    inverse_fourier_transform(&conv_hat).max_abs_diff(phi)
}
