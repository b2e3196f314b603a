//! Configuration parsing, command dispatch and report encoding for the
//! `conjwalk` binary.

pub mod commands;
pub mod config;
pub mod report;
