//! Harness around the dealer models: configuration, experiment presets,
//! analysis files and oracle printouts.

pub mod analyze;
pub mod config;
pub mod experiment;
mod kv;
pub mod oracle;

pub use kv::KvLines;
