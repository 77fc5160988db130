//! Convolution factorization `φ = Φ∗ψ` of grid functions, and the weak
//! compact-support form `φ = Φ∗f − h∗φ`.

mod stability;
mod strong;
mod weak;

pub use stability::{phi_series_stability, StabilityTrace, INCREMENT_THRESHOLD};
pub use strong::{
    bessel_identity_check, default_seminorms, diagonal_bounds, strong_factorize, trace_not_decreasing,
    BoundPolicy, FactorizationResult, SeminormIndex, SeminormTraceRow, SeminormValue, SupportMetrics,
    RESIDUAL_SLACK,
};
pub use weak::{weak_factorize_compact, SUPPORT_TOLERANCE};
