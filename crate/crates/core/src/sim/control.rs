use super::config::EnvironmentModel;
use crate::geometry::{pose_exp, pose_log, Pose, Screw, ScrewKind, Vec3};

/// Pose constraint: k_p · log(actual⁻¹ · desired) + feedforward. The
/// displacement, and hence the twist, is expressed in the frame whose pose
/// `actual` describes.
pub fn pose_constraint_twist(actual: &Pose, desired: &Pose, desired_twist: &Screw, k_p: f64) -> Screw {
    let d = pose_log(&actual.inverse().compose(desired));
    Screw::twist(d.a * k_p + desired_twist.a, d.b * k_p + desired_twist.b)
}

/// Wrench constraint: the wrench error maps through the block-swapped
/// diagonal compliance — force error to translational velocity, moment
/// error to angular velocity — plus feedforward.
pub fn wrench_constraint_twist(
    actual_wrench: &Screw,
    desired_wrench: &Screw,
    desired_twist: &Screw,
    k_w: f64,
    c_f: f64,
    c_m: f64,
) -> Screw {
    let df = desired_wrench.a - actual_wrench.a;
    let dm = desired_wrench.b - actual_wrench.b;
    Screw::twist(dm * (k_w * c_m) + desired_twist.a, df * (k_w * c_f) + desired_twist.b)
}

pub fn blend(t_p: &Screw, t_w: &Screw, w_p: f64, w_w: f64) -> Screw {
    Screw::twist(t_p.a * w_p + t_w.a * w_w, t_p.b * w_p + t_w.b * w_w)
}

/// Blend both constraint twists and integrate one step:
/// T ← exp(dt · t_cmd) · T, with `t` the pose of the moving frame in the
/// twists' expression frame. Returns the new pose and the commanded twist.
pub fn blend_and_step(t_p: &Screw, t_w: &Screw, w_p: f64, w_w: f64, dt: f64, t: &Pose) -> (Pose, Screw) {
    let cmd = blend(t_p, t_w, w_p, w_w);
    let step = pose_exp(&Screw::displacement(cmd.a * dt, cmd.b * dt));
    (step.compose(t), cmd)
}

/// Wrench the environment exerts on the tool, in world at the world
/// origin. Only the tool origin's position matters.
pub fn environment_wrench(env: &EnvironmentModel, tool_pose: &Pose) -> Screw {
    let p = tool_pose.p;
    let f = match env {
        EnvironmentModel::Spring1D { stiffness_n_per_m, rest_position_m, axis } => {
            let a = Vec3::from(*axis);
            -a * (stiffness_n_per_m * (p - Vec3::from(*rest_position_m)).dot(&a))
        }
        EnvironmentModel::RevoluteJoint { hinge_point_m, axis, radius_m, radial_stiffness_n_per_m, axial_stiffness_n_per_m } => {
            let a = Vec3::from(*axis);
            let r = p - Vec3::from(*hinge_point_m);
            let axial = r.dot(&a);
            let radial = r - a * axial;
            let rho = radial.norm();
            let f_axial = -a * (axial_stiffness_n_per_m * axial);
            if rho > 1e-12 {
                f_axial - radial / rho * (radial_stiffness_n_per_m * (rho - radius_m))
            } else {
                f_axial
            }
        }
        EnvironmentModel::PointOnPlane { plane_point_m, normal, stiffness_n_per_m } => {
            let n = Vec3::from(*normal);
            let depth = (Vec3::from(*plane_point_m) - p).dot(&n);
            if depth > 0.0 {
                n * (stiffness_n_per_m * depth)
            } else {
                Vec3::zeros()
            }
        }
    };
    // The force acts at the tool origin; its moment about the world origin:
    Screw::new(ScrewKind::Wrench, f, p.cross(&f))
}
