//! File formats, reports and commands for the `dcalc` tool.

pub mod commands;
pub mod latex;
pub mod proof_text;
pub mod report;
pub mod run;
pub mod sequent;
