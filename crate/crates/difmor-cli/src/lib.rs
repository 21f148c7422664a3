//! Command-line companion to `difmor-core`: JSON problem files, report
//! emission, the shipped fixture corpus, and a random fixture generator.
//!
//! Everything the binary does lives here so integration tests can call
//! the same code paths directly.

pub mod commands;
pub mod fixtures;
pub mod problem;
pub mod report;
