//! File formats, pipeline orchestration and the `cmg` command line on top of
//! [`cmg_core`].

pub mod bench;
pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod higgs;
pub mod pipeline;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, Manifest};
