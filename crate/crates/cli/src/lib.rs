//! Command-line front end for `cellstruct`: structure files, checks, map
//! operations and DOT export.

pub mod commands;
pub mod dot;
pub mod fixtures;
pub mod format;

pub use commands::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
