//! Rigid-body kinematics on SO(3)/SE(3): exp/log maps, poses, screws,
//! frame changes and numerical differentiation of pose trajectories.

mod diff;
mod pose;
mod screw;
mod so3;

use serde::{Deserialize, Serialize};

pub use diff::differentiate_poses;
pub use pose::{interpolate, pose_exp, pose_log, similarity_transform, Pose};
pub use screw::{change_reference_point, screw_transform, Screw, ScrewKind};
pub(crate) use so3::inv_jacobian_coeff;
pub use so3::{
    is_rotation, orthonormalize, quat_to_rot, rot_angle, rot_distance, rot_exp, rot_log,
    rot_to_quat, skew, vee, Mat3, RotationMatrix, Vec3,
};

/// The two candidate viewpoints a task-frame origin or orientation can be
/// rigidly attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameTag {
    World,
    Tool,
}

impl std::fmt::Display for FrameTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FrameTag::World => "world",
            FrameTag::Tool => "tool",
        })
    }
}
