//! Command-line reports for the kdirac crate: single computations, the full
//! verification matrix and golden JSON fixtures.

pub mod config;
pub mod expected;
pub mod matrix;
pub mod report;
pub mod run;

pub use config::{ConfigError, Operator, Ordering, OutputFormat, RunConfig};
pub use matrix::verify_matrix;
pub use report::{Check, Report, SCHEMA_VERSION};
pub use run::{run, RunError};
