//! Task-frame derivation: origin (eight ASIP candidates, model and
//! viewpoint selection), orientation (AVOF, alignment, rotation averaging),
//! vectors of interest, progress variable, and frame assembly.

mod origin;
mod orientation;

use serde::{Deserialize, Serialize};

pub use origin::{derive_origin, fuse_points, OriginCandidate, OriginConfig, OriginDecision, OriginRatios, OriginResult, ViewpointOrigin};
pub use orientation::{
    align_frames, average_rotations, best_signed_permutation, derive_orientation, floor_covariance, Alignment,
    OrientationCandidate, OrientationConfig, OrientationDecision, OrientationResult, RotationAverage,
    ViewpointOrientation, WeightingConfig, MAX_AVERAGING_ITERATIONS,
};

use crate::error::{Error, Result};
use crate::geometry::{FrameTag, Mat3, Pose, RotationMatrix, Vec3};
use crate::processing::TrialBatch;

/// Model 1: minimal moment at a point (pure rotation about it / pure force
/// through it). Model 2: constant moment at a point (constant translation
/// of it / constant moment).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    Model1,
    Model2,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Model1 => "model1",
            Model::Model2 => "model2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionVector {
    Omega,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WrenchVector {
    F,
    M,
}

impl MotionVector {
    pub fn name(self) -> &'static str {
        match self {
            MotionVector::Omega => "omega",
            MotionVector::V => "v",
        }
    }
}

impl WrenchVector {
    pub fn name(self) -> &'static str {
        match self {
            WrenchVector::F => "f",
            WrenchVector::M => "m",
        }
    }
}

/// Geometric progress: ξ̇ = ‖ω‖ (rotation angle) or ‖v‖ (arc length).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProgressKind {
    RotationAngle,
    ArcLength,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorSelection {
    pub motion: MotionVector,
    pub wrench: WrenchVector,
    pub progress: ProgressKind,
}

/// Vectors of interest and progress variable for the selected models.
pub fn select_vectors_of_interest(motion_model: Model, wrench_model: Model) -> VectorSelection {
    let (motion, progress) = match motion_model {
        Model::Model1 => (MotionVector::Omega, ProgressKind::RotationAngle),
        Model::Model2 => (MotionVector::V, ProgressKind::ArcLength),
    };
    let wrench = match wrench_model {
        Model::Model1 => WrenchVector::F,
        Model::Model2 => WrenchVector::M,
    };
    VectorSelection { motion, wrench, progress }
}

/// Significance of a binary decision between two covariances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    /// sqrt(max det / min det) ≥ 1, or +∞ when the smaller det is zero.
    #[serde(with = "crate::serde_util::maybe_inf")]
    pub ratio: f64,
    /// Both determinants were zero.
    pub both_degenerate: bool,
}

/// Determinant clamped at zero (rounding can make PSD determinants negative).
pub fn det3(c: &Mat3) -> f64 {
    c.determinant().max(0.0)
}

pub fn significance(c1: &Mat3, c2: &Mat3) -> Significance {
    let (d1, d2) = (det3(c1), det3(c2));
    let (hi, lo) = if d1 >= d2 { (d1, d2) } else { (d2, d1) };
    if lo == 0.0 {
        return Significance { ratio: f64::INFINITY, both_degenerate: hi == 0.0 };
    }
    Significance { ratio: (hi / lo).sqrt(), both_degenerate: false }
}

pub fn significance_ratio(c1: &Mat3, c2: &Mat3) -> f64 {
    significance(c1, c2).ratio
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskFrame {
    pub origin: OriginDecision,
    pub orientation: OrientationDecision,
    pub progress: ProgressKind,
}

impl TaskFrame {
    /// A hand-specified task frame rigidly attached to `viewpoint` with pose
    /// `pose` in it; decision statistics are left neutral.
    pub fn fixed(viewpoint: FrameTag, pose: &Pose, motion_model: Model, wrench_model: Model) -> Self {
        let neutral = Significance { ratio: 1.0, both_degenerate: false };
        let sel = select_vectors_of_interest(motion_model, wrench_model);
        TaskFrame {
            origin: OriginDecision {
                viewpoint,
                origin: pose.p,
                covariance: Mat3::zeros(),
                motion_model,
                wrench_model,
                ratios: OriginRatios { viewpoint: neutral, motion_model: neutral, wrench_model: neutral },
            },
            orientation: OrientationDecision {
                viewpoint,
                rotation: pose.r,
                covariance: Mat3::zeros(),
                motion_vector: sel.motion,
                wrench_vector: sel.wrench,
                ratio: neutral,
                weighting_applied: false,
            },
            progress: sel.progress,
        }
    }

    /// True when the frame is rigidly attached to `reference`.
    pub fn is_constant_in(&self, reference: FrameTag) -> bool {
        self.origin.viewpoint == reference && self.orientation.viewpoint == reference
    }
}

/// Pose of the task frame w.r.t. `reference`. `tool_pose` is the
/// instantaneous T_w←tl; it is only needed when a viewpoint differs from
/// `reference`.
pub fn assemble_task_frame(tf: &TaskFrame, reference: FrameTag, tool_pose: Option<&Pose>) -> Result<Pose> {
    // Pose of viewpoint frame `vp` w.r.t. `reference`.
    let frame = |vp: FrameTag, what: &'static str| -> Result<Pose> {
        if vp == reference {
            return Ok(Pose::identity());
        }
        let t = tool_pose.ok_or(Error::MissingKinematics(what))?;
        Ok(match reference {
            FrameTag::World => *t,
            FrameTag::Tool => t.inverse(),
        })
    };
    let t_o = frame(tf.origin.viewpoint, "tool")?;
    let t_r = frame(tf.orientation.viewpoint, "tool")?;
    let r: RotationMatrix = t_r.r * tf.orientation.rotation;
    let p: Vec3 = t_o.p + t_o.r * tf.origin.origin;
    Ok(Pose::from_parts(r, p))
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub origin: OriginConfig,
    #[serde(default)]
    pub orientation: OrientationConfig,
}

/// Everything the pipeline computed: all candidates, not just the winners.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskFrameReport {
    pub task_frame: TaskFrame,
    pub origin: OriginResult,
    pub orientation: OrientationResult,
}

pub fn derive_task_frame(batch: &TrialBatch, cfg: &PipelineConfig) -> Result<TaskFrameReport> {
    let origin = derive_origin(batch, &cfg.origin)?;
    let sel = select_vectors_of_interest(origin.decision.motion_model, origin.decision.wrench_model);
    let orientation = derive_orientation(batch, &origin.decision, &sel, &cfg.orientation)?;
    let task_frame = TaskFrame {
        origin: origin.decision.clone(),
        orientation: orientation.decision.clone(),
        progress: sel.progress,
    };
    Ok(TaskFrameReport { task_frame, origin, orientation })
}
