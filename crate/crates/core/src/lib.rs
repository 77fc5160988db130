//! Hadamard-product Schwartz functions, δ-approximating operators and
//! convolution factorization on the real line, computed on uniform grids.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod battery;
pub mod delta;
pub mod error;
pub mod factorize;
pub mod gridfn;
pub mod hadamard;
pub mod numeric;

pub use error::{Error, Result};
pub use gridfn::{DecayFit, Grid, GridFunction, SeminormReport};
pub use num_complex::Complex64;
