//! Sampled-function calculus on symmetric uniform grids.

mod calculus;
mod fourier;
mod grid;
pub mod io;
mod seminorm;
mod tail;

pub use calculus::{
    apply_symbol, convolve, derivative, derivative_with, jump_derivative_pairing, pair, Derivative,
    DerivativeOptions, DEFAULT_MAX_ORDER,
};
pub use fourier::{
    fourier_transform, fourier_transform_checked, inverse_fourier_transform, CheckedTransform,
};
pub use grid::{Grid, GridFunction, BOUNDARY_FRACTION, BOUNDARY_TOLERANCE};
pub use seminorm::{
    decay_rate, rapid_decay_profile, seminorm, seminorm_report, seminorm_report_on, DecayFit, DecayProfile,
    SeminormEntry, SeminormReport, SHELLS, UNDERFLOW_FLOOR,
};
pub use tail::{fourier_transform_with_tail, AlgebraicTail, TailCorrectedTransform};
