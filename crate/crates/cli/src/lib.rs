//! Experiment runner: configuration, reports and the acceptance battery.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod commands;
pub mod config;
pub mod criteria;
pub mod report;

pub use commands::{execute, resolve};
pub use config::{ConfigError, RunConfig};
pub use report::{Metric, Report};
