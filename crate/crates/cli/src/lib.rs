//! Command-line surface for the pencil resolvent library: document
//! parsing, the seven commands, reports and growth CSV output.

pub mod commands;
pub mod document;
pub mod error;
pub mod growth;
pub mod report;

pub use commands::{execute, Command, Options};
pub use document::{parse_document, PencilDocument};
pub use error::CliError;
pub use report::Report;
