//! Expression language and batch commands behind the `qmf` binary.

pub mod commands;
pub mod config;
pub mod expr;
