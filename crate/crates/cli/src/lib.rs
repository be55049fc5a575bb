//! Library surface of the CLI: configuration schema, table writers, and
//! task implementations (the binary in `main.rs` is a thin wrapper).

pub mod config;
pub mod output;
pub mod tasks;
