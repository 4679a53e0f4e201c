//! Experiment runner for `liqlimit-core`: configuration files, CSV output,
//! parallel Monte Carlo drivers and the validation suite behind the CLI.

pub mod checks;
pub mod config;
pub mod csv;
mod error;
pub mod parallel;
pub mod sweep;
pub mod trajectory;
pub mod validate;
pub mod vartable;

pub use error::{Error, Result};
