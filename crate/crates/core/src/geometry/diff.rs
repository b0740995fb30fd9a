use super::pose::Pose;
use super::screw::Screw;
use super::so3::{rot_log, Vec3};
use crate::error::{Error, Result};

/// Weights of the 3-point Lagrange derivative on a nonuniform grid.
/// `h1`, `h2` are the two spacings; `at` selects the evaluation node.
fn lagrange3(h1: f64, h2: f64, at: usize) -> [f64; 3] {
    let s = h1 + h2;
    match at {
        0 => [-(2.0 * h1 + h2) / (h1 * s), s / (h1 * h2), -h1 / (h2 * s)],
        1 => [-h2 / (h1 * s), (h2 - h1) / (h1 * h2), h1 / (h2 * s)],
        _ => [h2 / (h1 * s), -s / (h1 * h2), (2.0 * h2 + h1) / (h2 * s)],
    }
}

/// World-frame twists of a sampled pose trajectory.
///
/// ω is the derivative of the rotation vector of `R(t)·R_iᵀ` at `t_i`
/// (equivalently vee(Ṙ Rᵀ)); v = ṗ − ω × p. Second-order differences:
/// central in the interior, one-sided at both ends.
pub fn differentiate_poses(poses: &[Pose], times: &[f64]) -> Result<Vec<Screw>> {
    let n = poses.len();
    if n < 3 || times.len() != n {
        return Err(Error::InsufficientSamples { needed: 3, got: n.min(times.len()) });
    }
    if let Some(i) = (1..n).find(|&i| !(times[i] > times[i - 1]) || !times[i].is_finite()) {
        return Err(Error::NonMonotoneTime { index: i });
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (base, at) = match i {
            0 => (0, 0),
            _ if i == n - 1 => (n - 3, 2),
            _ => (i - 1, 1),
        };
        let h1 = times[base + 1] - times[base];
        let h2 = times[base + 2] - times[base + 1];
        let w = lagrange3(h1, h2, at);
        let rt = poses[i].r.transpose();
        let mut omega = Vec3::zeros();
        let mut pdot = Vec3::zeros();
        for k in 0..3 {
            let j = base + k;
            if j != i {
                omega += w[k] * rot_log(&(poses[j].r * rt));
            }
            pdot += w[k] * poses[j].p;
        }
        let p = poses[i].p;
        out.push(Screw::twist(omega, pdot - omega.cross(&p)));
    }
    Ok(out)
}
