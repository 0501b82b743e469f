//! File formats and the command-line driver for `s1s-core`.

pub mod autfile;
pub mod cli;
