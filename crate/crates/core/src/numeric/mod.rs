//! Low-level numerics shared by the higher modules.

pub mod dd;
pub mod quad;
pub mod special;
pub mod sum;

pub use dd::DoubleDouble;
pub use sum::{ComplexSum, NeumaierSum};
