//! Sweep runner behind the `pmcs` binary: configuration, presets, grid
//! evaluation and emission.

pub mod config;
pub mod emit;
pub mod error;
pub mod hint;
pub mod presets;
pub mod sweep;

pub use config::{Engine, Format, SweepConfig, SweepKind};
pub use emit::{emit, header};
pub use error::CliError;
pub use sweep::{run_sweep, RunOptions, SweepRow};
