//! Numeric oracles, report assembly and output formats for the exact engine in `hchain-core`.

pub mod checks;
pub mod cli;
pub mod numeric;
pub mod output;
pub mod report;
