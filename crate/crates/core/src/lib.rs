//! Derive a task frame (origin, orientation, viewpoints and progress
//! variable) from demonstrated motion and wrench trajectories, express the
//! demonstrations in it as a reusable task model, and check the model in a
//! closed-loop contact simulator.

pub mod cli;
pub mod error;
pub mod geometry;
mod serde_util;
pub mod pipeline;
pub mod processing;
pub mod statistics;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
