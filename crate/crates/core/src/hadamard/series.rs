use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::zeros::ZeroSequence;
use crate::error::{Error, Result};
use crate::numeric::dd::DoubleDouble;
use crate::numeric::sum::NeumaierSum;

/// Largest degree handled by the root extraction.
pub const MAX_ROOT_DEGREE: usize = 12;
/// Relative residual above which a polished root is rejected.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-10;
/// `|Im w| < NEGATIVE_REAL_TOLERANCE · |w|` for a root to count as real.
pub const NEGATIVE_REAL_TOLERANCE: f64 = 1e-8;

/// `Σ_j c_j z^{2j}` with `c₀ = 1` and `c_j ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesDoc", into = "SeriesDoc")]
pub struct EvenPowerSeries {
    coefficients: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc {
    coefficients: Vec<f64>,
}

impl TryFrom<SeriesDoc> for EvenPowerSeries {
    type Error = Error;
    fn try_from(d: SeriesDoc) -> Result<Self> {
        Self::new(d.coefficients)
    }
}

impl From<EvenPowerSeries> for SeriesDoc {
    fn from(s: EvenPowerSeries) -> Self {
        SeriesDoc {
            coefficients: s.coefficients,
        }
    }
}

impl EvenPowerSeries {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.first() != Some(&1.0) {
            return Err(Error::InvalidSeries("c₀ must equal 1".into()));
        }
        if let Some(j) = coefficients.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidSeries(format!(
                "c_{j} = {} is not a finite nonnegative number",
                coefficients[j]
            )));
        }
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Highest power of `z²`.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Value at `w = z²`.
    pub fn eval_w(&self, w: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_w(z * z)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Result of [`expand_to_series`].
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub series: EvenPowerSeries,
    /// Indices of coefficients that fell into the subnormal range or to zero.
    pub underflow: Vec<usize>,
}

fn multiply_out(values: &[f64], degree: usize) -> Vec<f64> {
    let mut acc = vec![NeumaierSum::new(); degree + 1];
    acc[0].add(1.0);
    for (i, a) in values.iter().enumerate() {
        let w = 1.0 / (a * a);
        for j in (1..=degree.min(i + 1)).rev() {
            let prev = acc[j - 1].value();
            acc[j].add(prev * w);
        }
    }
    acc.iter().map(|s| s.value()).collect()
}

fn underflow_indices(c: &[f64]) -> Vec<usize> {
    c.iter()
        .enumerate()
        .filter(|(_, &v)| v < f64::MIN_POSITIVE)
        .map(|(j, _)| j)
        .collect()
}

/// Elementary symmetric functions `c_j = e_j(1/a₁², …, 1/a_N²)` for
/// `j ≤ J`, by multiplying in one factor at a time.
pub fn expand_to_series(zeros: &ZeroSequence, degree: usize) -> Result<Expansion> {
    if degree > zeros.count() {
        return Err(Error::InvalidArgument(format!(
            "degree {degree} exceeds the {} factors",
            zeros.count()
        )));
    }
    let c = multiply_out(&zeros.values(), degree);
    Ok(Expansion {
        underflow: underflow_indices(&c),
        series: EvenPowerSeries::new(c)?,
    })
}

/// Taylor coefficients of the full product, truncated factors included:
/// the truncated expansion times the series of the tail factor
/// `exp(Σ_k (−1)^{k+1} p_k w^k / k)`, `p_k = Σ_{n>count} a_n^{−2k}`.
pub fn expand_infinite_series(zeros: &ZeroSequence, degree: usize) -> Result<EvenPowerSeries> {
    let head = multiply_out(&zeros.values(), degree);
    if !zeros.has_tail() {
        return EvenPowerSeries::new(head);
    }
    let log: Vec<f64> = (0..=degree)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * zeros.tail_power_sum(k as u32) / k as f64
            }
        })
        .collect();
    // E = exp(L):  n E_n = Σ_{k=1}^{n} k L_k E_{n−k}
    let mut tail = vec![0.0; degree + 1];
    tail[0] = 1.0;
    for n in 1..=degree {
        let s: NeumaierSum = (1..=n).map(|k| k as f64 * log[k] * tail[n - k]).collect();
        tail[n] = s.value() / n as f64;
    }
    let c: Vec<f64> = (0..=degree)
        .map(|n| {
            (0..=n)
                .map(|k| head[k] * tail[n - k])
                .collect::<NeumaierSum>()
                .value()
        })
        .collect();
    EvenPowerSeries::new(c)
}

fn horner_dd(c: &[f64], w: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let mut p = DoubleDouble::ZERO;
    let mut dp = DoubleDouble::ZERO;
    for &cj in c.iter().rev() {
        dp = dp * w + p;
        p = p * w + DoubleDouble::from_f64(cj);
    }
    (p, dp)
}

fn relative_residual(c: &[f64], w: Complex64) -> f64 {
    let mut p = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &cj in c.iter().rev() {
        p = p * w + cj;
        scale = scale * w.norm() + cj.abs();
    }
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Newton iterations on a real root in double-double precision. Stops when
/// the step no longer reduces `|p|`.
fn polish_real(c: &[f64], w0: f64) -> f64 {
    let mut w = DoubleDouble::from_f64(w0);
    let (mut p, mut dp) = horner_dd(c, w);
    for _ in 0..8 {
        if p.hi == 0.0 || dp.hi == 0.0 {
            break;
        }
        let next = w - p / dp;
        let (pn, dpn) = horner_dd(c, next);
        if pn.abs().hi >= p.abs().hi {
            break;
        }
        w = next;
        p = pn;
        dp = dpn;
    }
    w.to_f64()
}

/// All roots of `Σ_j c_j w^j` (degree `≤ 12`), from the eigenvalues of the
/// companion matrix of the rescaled polynomial. Roots that come out real
/// are polished by Newton steps in double-double arithmetic.
pub fn polynomial_roots(c: &[f64]) -> Result<Vec<Complex64>> {
    let degree = c.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    if degree > MAX_ROOT_DEGREE {
        return Err(Error::InvalidSeries(format!(
            "degree {degree} exceeds {MAX_ROOT_DEGREE}"
        )));
    }
    if c.iter().any(|v| !v.is_finite()) || c[degree] == 0.0 || c[0] == 0.0 {
        return Err(Error::InvalidSeries(
            "need finite coefficients with c₀ ≠ 0 and c_J ≠ 0".into(),
        ));
    }
    // w = ρu puts the roots near the unit circle
    let rho = (c[0] / c[degree]).abs().powf(1.0 / degree as f64);
    let lead = c[degree] * rho.powi(degree as i32);
    let monic: Vec<f64> = (0..degree).map(|j| c[j] * rho.powi(j as i32) / lead).collect();
    let mut m = DMatrix::<f64>::zeros(degree, degree);
    for j in 0..degree {
        m[(0, j)] = -monic[degree - 1 - j];
        if j + 1 < degree {
            m[(j + 1, j)] = 1.0;
        }
    }
    let eig = m.complex_eigenvalues();
    let mut roots: Vec<Complex64> = eig
        .iter()
        .map(|u| {
            let w = Complex64::new(u.re, u.im) * rho;
            if w.im.abs() < NEGATIVE_REAL_TOLERANCE * w.norm() {
                Complex64::new(polish_real(c, w.re), 0.0)
            } else {
                w
            }
        })
        .collect();
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Recovers zeros `a_k = √(−w_k)` from coefficients, where `w_k` are the
/// roots of `Σ c_j w^j`. Every root must be real and negative.
pub fn factor_coefficients(c: &[f64]) -> Result<ZeroSequence> {
    let roots = polynomial_roots(c)?;
    if roots.is_empty() {
        return Err(Error::InvalidSeries("a constant series has no zeros".into()));
    }
    let mut zeros = Vec::with_capacity(roots.len());
    for (index, &root) in roots.iter().enumerate() {
        if root.im.abs() >= NEGATIVE_REAL_TOLERANCE * root.norm() || root.re >= 0.0 {
            return Err(Error::NonNegativeRealRoot { index, root });
        }
        let residual = relative_residual(c, root);
        if residual > ROOT_RESIDUAL_TOLERANCE {
            return Err(Error::IllConditioned { residual });
        }
        zeros.push((-root.re).sqrt());
    }
    zeros.sort_by(f64::total_cmp);
    ZeroSequence::explicit(zeros)
}

/// [`factor_coefficients`] on a validated series.
pub fn factor_to_zeros(series: &EvenPowerSeries) -> Result<ZeroSequence> {
    let c = series.coefficients();
    if c.len() > 1 && *c.last().unwrap() == 0.0 {
        return Err(Error::InvalidSeries("leading coefficient is zero".into()));
    }
    factor_coefficients(c)
}
