//! Library half of the `isowind` command-line tool: file formats, heatmaps
//! and exit codes.

pub mod document;
pub mod exit;
pub mod render;
pub mod report;
pub mod sweep_io;

pub use exit::CliError;
