//! Job files, presets, reference tables and output writers behind the
//! `atem` command.

pub mod error;
pub mod job;
pub mod presets;
pub mod reference;
pub mod spec;

pub use error::{CliError, CliResult};
pub use job::{reproduce_table, run_job, JobOutcome, RunOptions, TableReport};
pub use reference::TableId;
pub use spec::JobSpec;
