//! Velocity-resolved contact simulator: a kinematic tool driven by the
//! blended pose + wrench constraint controller against spring environments.

mod config;
mod control;
mod run;

pub use config::{ControllerConfig, EnvironmentModel, InitialPose, Overrides, SimScenario};
pub use control::{blend, blend_and_step, environment_wrench, pose_constraint_twist, wrench_constraint_twist};
pub use run::{run_scenario, run_simulation, Rmse, SimLog, SimStep, SimSummary, DIVERGENCE_M, LOG_COLUMNS};
