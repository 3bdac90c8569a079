//! Model files, verification reports and the command implementations
//! behind the `lrkit` binary.

pub mod commands;
pub mod error;
pub mod report;
pub mod schema;

pub use commands::{run, threads_from_env, Command, Options};
pub use error::CliError;
pub use report::Report;
