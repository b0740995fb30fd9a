//! From recorded demonstrations to a task model: file ingestion,
//! smoothing, contact segmentation, viewpoint expansion, re-expression in
//! the task frame, progress reparameterization and trial averaging.

mod average;
mod batch;
mod express;
pub mod io;
mod model;
mod reparam;
mod smooth;

use serde::{Deserialize, Serialize};

pub use average::{average_trials, smoothing_spline, AveragedSignals};
pub use batch::{
    expand_viewpoints, preprocess, preprocess_trial, segment_contact, PreprocessConfig, SegmentThresholds, Trial,
    TrialBatch,
};
pub use express::{express_in_task_frame, task_frame_track, TaskFrameTrial};
pub use io::{format_trial, parse_trial, read_trial, write_trial, RawTrial, WrenchDecl};
pub use model::{InputHash, PoseRef, Provenance, RefSample, TaskModel};
pub use reparam::{progress_rate, reparameterize, uniform_grid, ProgressTrial, MIN_RATE};
pub use smooth::{smooth_poses, smooth_scalar, smooth_vec3, smooth_wrench};

use crate::error::Result;
use crate::pipeline::{derive_task_frame, PipelineConfig, TaskFrameReport};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// Samples of the normalized progress grid.
    pub grid_points: usize,
    /// Smoothing-spline weight λ; 0 interpolates the trial mean.
    pub spline_lambda: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { grid_points: 100, spline_lambda: 0.0 }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeriveConfig {
    #[serde(default)]
    pub preprocess: PreprocessConfig,
    #[serde(default)]
    pub pipeline: PipelineConfig,
    #[serde(default)]
    pub model: ModelConfig,
}

/// Full derivation: preprocess → task frame → re-express → reparameterize
/// → average. Provenance is left empty for the caller to fill.
pub fn derive_task_model(raws: &[RawTrial], cfg: &DeriveConfig) -> Result<(TaskFrameReport, TaskModel)> {
    let batch = preprocess(raws, &cfg.preprocess)?;
    let report = derive_task_frame(&batch, &cfg.pipeline)?;
    let tf = &report.task_frame;
    let progress: Vec<ProgressTrial> = batch
        .trials
        .iter()
        .map(|t| {
            let e = express_in_task_frame(t, tf)?;
            reparameterize(&e, tf.progress, cfg.model.grid_points).map_err(|err| err.with_candidate(t.name.clone()))
        })
        .collect::<Result<_>>()?;
    let signals = average_trials(&progress, cfg.model.spline_lambda)?;
    let model = TaskModel::from_signals(tf.clone(), &signals);
    Ok((report, model))
}
