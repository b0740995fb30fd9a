use super::batch::Trial;
use crate::error::Result;
use crate::geometry::{screw_transform, similarity_transform, FrameTag, Pose, Screw};
use crate::pipeline::{assemble_task_frame, TaskFrame};

/// A trial expressed in the task frame: the tool motion relative to its
/// initial pose, seen from the task frame, plus twists and wrenches in tf.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskFrameTrial {
    pub name: String,
    pub times: Vec<f64>,
    pub poses: Vec<Pose>,
    pub twists: Vec<Screw>,
    pub wrenches: Vec<Screw>,
}

/// Pose of the task frame in world at every sample of `trial`.
pub fn task_frame_track(trial: &Trial, tf: &TaskFrame) -> Result<Vec<Pose>> {
    trial.poses.iter().map(|t| assemble_task_frame(tf, FrameTag::World, Some(t))).collect()
}

pub fn express_in_task_frame(trial: &Trial, tf: &TaskFrame) -> Result<TaskFrameTrial> {
    let track = task_frame_track(trial, tf)?;
    let init_inv = trial.poses.first().map(Pose::inverse).unwrap_or_default();
    let mut out = TaskFrameTrial {
        name: trial.name.clone(),
        times: trial.times.clone(),
        poses: Vec::with_capacity(trial.len()),
        twists: Vec::with_capacity(trial.len()),
        wrenches: Vec::with_capacity(trial.len()),
    };
    for i in 0..trial.len() {
        let tf_w = track[i].inverse();
        out.twists.push(screw_transform(&tf_w, &trial.twists_world[i]));
        out.wrenches.push(screw_transform(&tf_w, &trial.wrenches_world[i]));
        let tl_rel = init_inv.compose(&trial.poses[i]);
        let tf_rel = init_inv.compose(&track[i]);
        out.poses.push(similarity_transform(&tl_rel, &tf_rel));
    }
    Ok(out)
}
