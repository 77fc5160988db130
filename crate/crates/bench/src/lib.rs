//! Inputs shared by the benchmarks.

use schwartzkit::{Grid, GridFunction};

/// Unit Gaussian on `[−L, L)` with `n` samples.
pub fn gaussian(half_width: f64, n: usize) -> GridFunction {
    let grid = Grid::new(half_width, n).expect("valid benchmark grid");
    GridFunction::sample(grid, |x| (-std::f64::consts::PI * x * x).exp()).expect("finite samples")
}
