//! File formats, curve mirror, parallel map and pipeline stages for the
//! `congruence-kit` command-line tool.

pub mod config;
pub mod error;
pub mod formats;
pub mod mirror;
pub mod par;
pub mod pipeline;
pub mod stages;

pub use error::{KitError, Result};
