//! δ-approximating operators `Σ(−1)^j b_j ψ^{(2j)}` and their compactly
//! supported variant.

mod approximant;
mod compact;
mod diagonal;
pub mod jet;
mod sobolev;

pub use approximant::{
    build_schwartz_approximant, factorial_bound, pairing_convergence, BoundSequence, DeltaApproximant,
    Flavor, PairingTrace, MAX_SCALE,
};
pub use compact::{build_compact_approximant, cutoff, cutoff_jet, CompactParts, CAUCHY_TOLERANCE};
pub use diagonal::{diagonal_sequence, partial_sum_bound};
pub use sobolev::{
    sobolev_sup_bound, uniform_derivative_bound, uniform_tail_bound, SobolevBound, MAX_UNIFORM_ORDER,
};
