use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::sum::{ComplexSum, NeumaierSum};

/// Share of samples at each end that must be negligible.
pub const BOUNDARY_FRACTION: f64 = 0.05;
/// Default absolute tolerance for the boundary test.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Uniform grid `x_k = −L + k·2L/N`, `k = 0..N`, on `[−L, L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    #[serde(rename = "L")]
    half_width: f64,
    #[serde(rename = "N")]
    len: usize,
}

impl Grid {
    pub const MIN_LEN: usize = 8;

    pub fn new(half_width: f64, len: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidHalfWidth(half_width));
        }
        if len < Self::MIN_LEN || !len.is_power_of_two() {
            return Err(Error::InvalidGridSize(len));
        }
        let g = Self { half_width, len };
        if !(g.spacing() > 0.0 && g.spacing().is_finite()) {
            return Err(Error::InvalidHalfWidth(half_width));
        }
        Ok(g)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.len as f64
    }

    pub fn abscissa(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.spacing()
    }

    pub fn abscissas(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.abscissa(k)).collect()
    }

    /// Index of the sample at `x = 0`.
    pub fn origin(&self) -> usize {
        self.len / 2
    }

    /// Frequency grid of the transform: half-width `N/(4L)`, spacing `1/(2L)`.
    pub fn reciprocal(&self) -> Grid {
        Grid {
            half_width: self.len as f64 / (4.0 * self.half_width),
            len: self.len,
        }
    }

    /// Nearest sample index, or `None` when `x` lies outside the grid.
    pub fn nearest(&self, x: f64) -> Option<usize> {
        let k = ((x + self.half_width) / self.spacing()).round();
        (k >= 0.0 && k < self.len as f64).then_some(k as usize)
    }

    /// Index `k'` with `x_{k'} = −x_k` (the origin and `−L` map to themselves).
    pub fn mirror(&self, k: usize) -> usize {
        (self.len - k) % self.len
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(k) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite(k));
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples a real function at every abscissa.
    pub fn sample<F: Fn(f64) -> f64 + Sync>(grid: Grid, f: F) -> Result<Self> {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| Complex64::new(f(grid.abscissa(k)), 0.0))
            .collect();
        Self::new(grid, values)
    }

    pub fn sample_complex<F: Fn(f64) -> Complex64 + Sync>(grid: Grid, f: F) -> Result<Self> {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| f(grid.abscissa(k)))
            .collect();
        Self::new(grid, values)
    }

    /// Values are produced by arithmetic on finite samples; callers guarantee
    /// finiteness.
    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn at(&self, k: usize) -> Complex64 {
        self.values[k]
    }

    pub fn at_origin(&self) -> Complex64 {
        self.values[self.grid.origin()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.grid.abscissa(k), v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|v| v * c).collect())
    }

    /// `x ↦ f(−x)`; exact on the grid.
    pub fn reflect(&self) -> Self {
        let g = self.grid;
        Self::from_parts(g, (0..g.len()).map(|k| self.values[g.mirror(k)]).collect())
    }

    /// Pointwise map with access to the abscissa.
    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        let values = self.iter().map(|(x, v)| f(x, v)).collect();
        Self::new(self.grid, values)
    }

    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &Self, f: F) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Trapezoid estimate of `(∫|f|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: NeumaierSum = self.values.iter().map(|v| v.norm_sqr()).collect();
        (s.value() * self.grid.spacing()).sqrt()
    }

    /// Trapezoid estimate of `∫ f`.
    pub fn integral(&self) -> Complex64 {
        let s: ComplexSum = self.values.iter().copied().collect();
        s.value() * self.grid.spacing()
    }

    /// Largest `|f|` over the outer 5% of samples at either end.
    pub fn boundary_mass(&self) -> f64 {
        let n = self.len();
        let m = ((n as f64 * BOUNDARY_FRACTION).ceil() as usize).max(1);
        self.values[..m]
            .iter()
            .chain(&self.values[n - m..])
            .fold(0.0, |acc, v| acc.max(v.norm()))
    }

    pub fn is_boundary_negligible(&self, tol: f64) -> bool {
        self.boundary_mass() < tol
    }

    /// The central `len` samples, on the grid of half-width `L·len/N`.
    pub fn central(&self, len: usize) -> Result<Self> {
        let n = self.len();
        if len > n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: len,
            });
        }
        let grid = Grid::new(self.grid.half_width() * len as f64 / n as f64, len)?;
        let start = (n - len) / 2;
        Ok(Self::from_parts(grid, self.values[start..start + len].to_vec()))
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(Grid::new(1.0, 12), Err(Error::InvalidGridSize(12))));
        assert!(matches!(Grid::new(1.0, 4), Err(Error::InvalidGridSize(4))));
        assert!(matches!(Grid::new(0.0, 16), Err(Error::InvalidHalfWidth(_))));
        assert!(matches!(
            Grid::new(f64::INFINITY, 16),
            Err(Error::InvalidHalfWidth(_))
        ));
    }

    #[test]
    fn abscissas_and_reciprocal() {
        let g = Grid::new(4.0, 16).unwrap();
        assert_eq!(g.abscissa(0), -4.0);
        assert_eq!(g.abscissa(g.origin()), 0.0);
        assert_eq!(g.spacing(), 0.5);
        let r = g.reciprocal();
        assert_eq!(r.half_width(), 1.0);
        assert_eq!(r.spacing(), 1.0 / 8.0);
        assert_eq!(r.reciprocal(), g);
    }

    #[test]
    fn rejects_non_finite_values() {
        let g = Grid::new(1.0, 8).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(GridFunction::new(g, v), Err(Error::NonFinite(3))));
    }

    #[test]
    fn reflect_is_exact_mirror() {
        let g = Grid::new(2.0, 16).unwrap();
        let f = GridFunction::sample(g, |x| x * x * x + 1.0).unwrap();
        let r = f.reflect();
        for k in 1..16 {
            assert_eq!(r.at(k).re, -g.abscissa(k).powi(3) + 1.0);
        }
    }
}
