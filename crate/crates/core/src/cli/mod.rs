//! Batch experiment runner: run configuration, the evolve/sweep/prepare
//! commands, and the verification harness behind `spincat verify`.

pub mod commands;
pub mod config;
pub mod verify;

pub use commands::{cmd_evolve, cmd_prepare, cmd_sweep, CommandError, Table};
pub use config::{ConfigError, ConfigMap, InitialState, RunConfig, SweepConfig};
