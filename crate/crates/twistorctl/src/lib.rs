//! Library side of `twistorctl`: run configuration, tensor sources, report
//! documents and the property suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod source;
pub mod suite;

pub use commands::{run, Command};
pub use config::RunConfig;
pub use error::CliError;
pub use report::ReportDocument;
