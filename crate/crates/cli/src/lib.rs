//! Scenario configuration, presets and runners behind the `gase` binary.

pub mod app;
pub mod config;
pub mod presets;
pub mod run;
