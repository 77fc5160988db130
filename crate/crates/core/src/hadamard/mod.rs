//! Products `∏(1 + z²/a_n²)`, their reciprocals, coefficient and zero
//! representations, growth orders and truncation-tail control.

mod certificate;
mod growth;
mod product;
mod series;
mod zeros;

pub use certificate::{robust_transform, schwartz_certificate, spectral_fit_window, SchwartzCertificate};
pub use growth::{growth_order_fit, ln_series_value, log_radii, FactorialPower, GrowthFit, LogCoefficients};
pub use product::{
    product_eval, reciprocal_product_at, reciprocal_product_grid, ProductEval, ProductValue,
    OVERFLOW_THRESHOLD,
};
pub use series::{
    expand_infinite_series, expand_to_series, factor_coefficients, factor_to_zeros, polynomial_roots,
    EvenPowerSeries, Expansion, MAX_ROOT_DEGREE, NEGATIVE_REAL_TOLERANCE, ROOT_RESIDUAL_TOLERANCE,
};
pub use zeros::{ZeroKind, ZeroSequence, MAX_FACTORS};
