//! Library side of the `thematic` command: config handling and the
//! pipeline stages, usable without the binary.

pub mod config;
pub mod error;
pub mod pipeline;

pub use error::CliError;
