//! File formats, topology ingestion and the `acg` command line on top of
//! `acg-core`.

pub mod cli;
pub mod format;
pub mod run;
pub mod topology;

pub use format::{read_instance, read_solution, write_instance, write_solution, ParseError};
pub use run::{run_algo, Algo};
