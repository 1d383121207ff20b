//! Commands, report types and the artifact cache behind the `colorpart`
//! binary.

pub mod cache;
pub mod commands;
pub mod output;

pub use cache::Cache;
pub use output::Format;
