//! Instance formats and subcommands of the `indexp` tool.

pub mod commands;
pub mod format;
