//! Command-line front end for `residue-symbols`: single computations,
//! reciprocity checks and randomized verification suites.

pub mod parse;
pub mod report;
pub mod suites;
pub mod commands;

pub use commands::{execute, run, Cli, Outcome};
