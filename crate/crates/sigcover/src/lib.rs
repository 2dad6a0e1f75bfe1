//! File formats, instance generators and the `sigcover` command line on
//! top of `sigcover-core`.

pub mod cli;
pub mod gen;
pub mod record;

pub use sigcover_core as core;
