use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGridSize(usize),
    #[error("grid half-width {0} must be positive and finite")]
    InvalidHalfWidth(f64),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at sample {0}")]
    NonFinite(usize),
    #[error("grid functions are sampled on different grids")]
    GridMismatch,
    #[error("derivative order {order} exceeds the configured maximum {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("fit window holds {found} samples, at least {required} required")]
    WindowTooShort { found: usize, required: usize },
    #[error("|f| falls below the underflow floor at abscissa {0}")]
    BelowFloor(f64),
    #[error("invalid zero sequence: {0}")]
    InvalidZeros(String),
    #[error("invalid power series: {0}")]
    InvalidSeries(String),
    #[error("root {root} (index {index}) is not real and negative")]
    NonNegativeRealRoot { index: usize, root: Complex64 },
    #[error("root finder residual {residual:e} exceeds tolerance")]
    IllConditioned { residual: f64 },
    #[error("growth fit needs at least 4 radii, got {0}")]
    TooFewRadii(usize),
    #[error("scale search exhausted at s = {scale:e}: bound for j = {index} still violated")]
    ScaleSearchExhausted { index: usize, scale: f64 },
    #[error("partial sums on the annulus still move by {increment:e} after the last term")]
    ConvergenceStall { increment: f64 },
    #[error("target has |phi| = {value:e} at x = {abscissa}, outside the allowed support")]
    SupportViolation { abscissa: f64, value: f64 },
    #[error("observed sup {observed:e} exceeds the bound {bound:e}")]
    BoundViolated { observed: f64, bound: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
