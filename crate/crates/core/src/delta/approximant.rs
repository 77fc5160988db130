use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::compact::CompactParts;
use crate::error::{Error, Result};
use crate::gridfn::{fourier_transform, inverse_fourier_transform, Grid, GridFunction};
use crate::hadamard::{expand_to_series, ZeroSequence};
use crate::numeric::sum::{ComplexSum, NeumaierSum};

/// Largest scale tried by the doubling search.
pub const MAX_SCALE: f64 = 1e12;

/// Positive bounds `B₀ … B_J`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BoundSequence(Vec<f64>);

impl TryFrom<Vec<f64>> for BoundSequence {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BoundSequence> for Vec<f64> {
    fn from(b: BoundSequence) -> Self {
        b.0
    }
}

impl BoundSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty bound sequence".into()));
        }
        if let Some(j) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "bound B_{j} = {} is not positive",
                values[j]
            )));
        }
        Ok(Self(values))
    }

    pub fn uniform(value: f64, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> Option<f64> {
        self.0.get(j).copied()
    }
}

/// `1/((2π)^j (j!)⁴)`, the second bound family every coefficient respects.
pub fn factorial_bound(j: usize) -> f64 {
    let mut v = 1.0;
    for k in 1..=j {
        let k = k as f64;
        v /= 2.0 * PI * k.powi(4);
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Schwartz,
    Compact,
}

/// Coefficients `b_j` of `Σ (−1)^j b_j ψ^{(2j)}` together with the kernel
/// `ψ`, whose transform is `1/∏_{n≤N}(1 + ξ²/a_n²)`.
///
/// `b` holds all `N + 1` coefficients of the symbol
/// `P_N(ξ) = Σ b_j (2πξ)^{2j} = ∏(1 + ξ²/a_n²)`; the operator uses the
/// first `terms + 1`.
#[derive(Clone, Debug)]
pub struct DeltaApproximant {
    pub(crate) flavor: Flavor,
    pub(crate) b: Vec<f64>,
    pub(crate) zeros: ZeroSequence,
    pub(crate) scale: f64,
    pub(crate) terms: usize,
    pub(crate) grid: Grid,
    pub(crate) psi: GridFunction,
    pub(crate) compact: Option<CompactParts>,
}

#[derive(Serialize)]
struct ApproximantDoc<'a> {
    flavor: Flavor,
    b: &'a [f64],
    zeros: &'a ZeroSequence,
    sigma: Option<f64>,
    grid: Grid,
    terms: usize,
    scale: f64,
}

impl DeltaApproximant {
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// All symbol coefficients `b₀ … b_N`.
    pub fn coefficients(&self) -> &[f64] {
        &self.b
    }

    /// The coefficients used by the operator, `b₀ … b_{J_max}`.
    pub fn operator_coefficients(&self) -> &[f64] {
        &self.b[..=self.terms]
    }

    pub fn zeros(&self) -> &ZeroSequence {
        &self.zeros
    }

    /// Scale `s` of the zeros `a_n = s·n`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `J_max`.
    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn factors(&self) -> usize {
        self.zeros.count()
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// The kernel on the grid: `ψ` for the Schwartz flavor, `f = ω·ψ` for
    /// the compact one.
    pub fn psi(&self) -> &GridFunction {
        &self.psi
    }

    pub fn compact(&self) -> Option<&CompactParts> {
        self.compact.as_ref()
    }

    /// `1/∏_{n≤N}(1 + ξ²/a_n²)`.
    pub fn psi_hat(&self, xi: f64) -> f64 {
        psi_hat(&self.zeros.values(), xi)
    }

    /// `P_n(ξ) = Σ_{j≤n} b_j (2πξ)^{2j}`.
    pub fn symbol(&self, n: usize, xi: f64) -> f64 {
        let y = (2.0 * PI * xi).powi(2);
        self.b[..=n.min(self.b.len() - 1)]
            .iter()
            .rev()
            .fold(0.0, |acc, &b| acc * y + b)
    }

    /// Transform of [`Self::psi`] on the reciprocal grid. The Schwartz
    /// kernel uses exact samples of `ψ̂`.
    pub fn kernel_spectrum(&self) -> GridFunction {
        match self.flavor {
            Flavor::Schwartz => psi_hat_grid(&self.zeros.values(), self.grid),
            Flavor::Compact => fourier_transform(&self.psi),
        }
    }

    /// `ψ(x) = Σ_n A_n π a_n e^{−2π a_n |x|}`, `A_n = ∏_{m≠n} 1/(1 − a_n²/a_m²)`;
    /// requires distinct zeros.
    pub fn psi_exact(&self, x: f64) -> f64 {
        partial_fractions(&self.zeros.values())
            .iter()
            .map(|(a, c)| c * PI * a * (-2.0 * PI * a * x.abs()).exp())
            .collect::<NeumaierSum>()
            .value()
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ApproximantDoc {
            flavor: self.flavor,
            b: &self.b,
            zeros: &self.zeros,
            sigma: self.compact.as_ref().map(|c| c.sigma),
            grid: self.grid,
            terms: self.terms,
            scale: self.scale,
        };
        Ok(serde_json::to_string(&doc)?)
    }
}

pub(crate) fn psi_hat(zeros: &[f64], xi: f64) -> f64 {
    let x2 = xi * xi;
    let log: NeumaierSum = zeros.iter().map(|a| (x2 / (a * a)).ln_1p()).collect();
    (-log.value()).exp()
}

pub(crate) fn psi_hat_grid(zeros: &[f64], grid: Grid) -> GridFunction {
    let r = grid.reciprocal();
    GridFunction::sample(r, |xi| psi_hat(zeros, xi)).expect("values lie in (0, 1]")
}

/// Pairs `(a_n, A_n)` of the partial-fraction form of `1/∏(1 + ξ²/a_n²)`.
pub(crate) fn partial_fractions(zeros: &[f64]) -> Vec<(f64, f64)> {
    zeros
        .iter()
        .enumerate()
        .map(|(n, &an)| {
            let c = zeros
                .iter()
                .enumerate()
                .filter(|(m, _)| *m != n)
                .map(|(_, &am)| 1.0 / (1.0 - (an * an) / (am * am)))
                .product::<f64>();
            (an, c)
        })
        .collect()
}

fn first_violation(b: &[f64], bounds: &BoundSequence, terms: usize) -> Option<usize> {
    (1..=terms).find(|&j| {
        let cap = bounds.values()[j].min(factorial_bound(j));
        !(b[j] < cap)
    })
}

fn symbol_coefficients(zeros: &ZeroSequence) -> Result<Vec<f64>> {
    let c = expand_to_series(zeros, zeros.count())?;
    Ok(c.series
        .coefficients()
        .iter()
        .enumerate()
        .map(|(j, cj)| cj / (2.0 * PI).powi(2 * j as i32))
        .collect())
}

/// Zeros-first construction: `a_n = s·n`, `n ≤ N`, with `s` doubled from 1
/// until `b_j = c_j/(2π)^{2j}` satisfies `b_j < min(B_j, 1/((2π)^j (j!)⁴))`
/// for `1 ≤ j ≤ J`. `b₀ = 1` is forced by the product form.
pub fn build_schwartz_approximant(
    bounds: &BoundSequence,
    terms: usize,
    factors: usize,
    grid: Grid,
) -> Result<DeltaApproximant> {
    if terms > factors {
        return Err(Error::InvalidArgument(format!(
            "J = {terms} exceeds N_factors = {factors}"
        )));
    }
    if bounds.len() <= terms {
        return Err(Error::InvalidArgument(format!(
            "{} bounds given, J = {terms} needs {}",
            bounds.len(),
            terms + 1
        )));
    }
    let unit = symbol_coefficients(&ZeroSequence::linear(1.0, factors)?)?;
    let mut scale = 1.0f64;
    loop {
        let scaled: Vec<f64> = unit
            .iter()
            .enumerate()
            .map(|(j, b)| b * scale.powi(-2 * j as i32))
            .collect();
        if first_violation(&scaled, bounds, terms).is_none() {
            let zeros = ZeroSequence::explicit((1..=factors).map(|n| scale * n as f64).collect())?;
            let b = symbol_coefficients(&zeros)?;
            if first_violation(&b, bounds, terms).is_none() {
                let psi = inverse_fourier_transform(&psi_hat_grid(&zeros.values(), grid));
                return Ok(DeltaApproximant {
                    flavor: Flavor::Schwartz,
                    b,
                    zeros,
                    scale,
                    terms,
                    grid,
                    psi,
                    compact: None,
                });
            }
        }
        if scale * 2.0 > MAX_SCALE {
            let index = first_violation(&scaled, bounds, terms).unwrap_or(terms);
            return Err(Error::ScaleSearchExhausted { index, scale });
        }
        scale *= 2.0;
    }
}

/// `⟨F_{ψ,n}, τ⟩` for `n = 0 … J_max` and the value they approach.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingTrace {
    pub label: String,
    pub values: Vec<(usize, Complex64)>,
    pub target: Complex64,
}

impl PairingTrace {
    pub fn errors(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|(_, v)| (v - self.target).norm())
            .collect()
    }

    pub fn final_error(&self) -> f64 {
        self.errors().last().copied().unwrap_or(f64::NAN)
    }

    pub fn error_at(&self, n: usize) -> Option<f64> {
        self.values
            .iter()
            .find(|(k, _)| *k == n)
            .map(|(_, v)| (v - self.target).norm())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Columns `n, value_re, value_im, target_re, target_im, abs_error`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "value_re", "value_im", "target_re", "target_im", "abs_error"])?;
        for (n, v) in &self.values {
            w.serialize((
                n,
                v.re,
                v.im,
                self.target.re,
                self.target.im,
                (v - self.target).norm(),
            ))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pairings computed on the Fourier side as
/// `∫ P_n(ξ) K̂(ξ) τ̂(−ξ) dξ`, `K` the approximant's kernel.
pub fn pairing_convergence(appx: &DeltaApproximant, tau: &GridFunction) -> Result<PairingTrace> {
    if tau.grid() != appx.grid {
        return Err(Error::GridMismatch);
    }
    let kernel = appx.kernel_spectrum();
    let tau_hat = fourier_transform(tau);
    let r = tau_hat.grid();
    let dxi = r.spacing();
    let mut values = Vec::with_capacity(appx.terms + 1);
    for n in 0..=appx.terms {
        let s: ComplexSum = (0..r.len())
            .map(|m| {
                let xi = r.abscissa(m);
                kernel.at(m) * appx.symbol(n, xi) * tau_hat.at(r.mirror(m))
            })
            .collect();
        values.push((n, s.value() * dxi));
    }
    let mut target = tau.at_origin();
    if let Some(c) = &appx.compact {
        target += crate::gridfn::pair(&c.h, tau)?;
    }
    Ok(PairingTrace {
        label: "tau".into(),
        values,
        target,
    })
}
