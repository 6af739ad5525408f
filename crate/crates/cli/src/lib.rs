//! Command implementations and the JSONL result store behind the `doubling`
//! binary.

pub mod commands;
pub mod store;
