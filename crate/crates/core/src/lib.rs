//! Roofline and Ridgeline performance models for kernels running on a
//! distributed system: classify whether compute, memory bandwidth or network
//! bandwidth bounds a kernel, project its runtime, and plot the result.

pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod mlp;
pub mod model;
pub mod plot;
pub mod report;

pub use error::{ModelError, Result};
