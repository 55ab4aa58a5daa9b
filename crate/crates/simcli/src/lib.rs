//! Initial data, presets, post-processing, file formats and the run loop of
//! the tumour growth simulator.

pub mod error;
pub mod initial;
pub mod io;
pub mod post;
pub mod presets;
pub mod run;
pub mod validate;

pub use error::CliError;
pub use presets::{preset, preset_runs, PRESETS};
pub use run::{run, run_with, RunOptions, RunOutcome};
