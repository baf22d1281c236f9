//! Configuration parsing and report formatting for the `ewa` binary.
//!
//! The binary itself only dispatches subcommands; everything testable lives
//! here: the key-value configuration format with its defaults and
//! validation, and the CSV/JSON artifact writers.

pub mod config;
pub mod output;
