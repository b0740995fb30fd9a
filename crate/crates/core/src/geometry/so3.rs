//! Rotations stored as plain 3×3 matrices, with closed-form exp/log.

use nalgebra::{Matrix3, UnitQuaternion, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
/// A proper rotation matrix. Validity is checked at construction points
/// (file parsing, `Pose::new`), not carried in the type.
pub type RotationMatrix = Matrix3<f64>;

// Below this angle the Taylor forms replace the trigonometric ratios.
const SMALL_ANGLE: f64 = 1e-5;
// Within this distance of π the log switches to the symmetric-part branch.
const NEAR_PI: f64 = 1e-6;

pub fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`skew`]; uses the antisymmetric part of `m`.
pub fn vee(m: &Mat3) -> Vec3 {
    Vec3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

pub fn rot_exp(r: &Vec3) -> RotationMatrix {
    let th = r.norm();
    let k = skew(r);
    Mat3::identity() + k * sin_over(th) + k * k * one_minus_cos_over2(th)
}

// Coefficients shared by exp and the SE(3) Jacobians. Series below 0.1 rad
// avoid the cancellation in the closed forms.

/// sinθ / θ
pub(crate) fn sin_over(th: f64) -> f64 {
    if th < SMALL_ANGLE {
        1.0 - th * th / 6.0
    } else {
        th.sin() / th
    }
}

/// (1 − cosθ) / θ², written as 2 sin²(θ/2) / θ².
pub(crate) fn one_minus_cos_over2(th: f64) -> f64 {
    if th < SMALL_ANGLE {
        0.5 - th * th / 24.0
    } else {
        let s = (0.5 * th).sin() / th;
        2.0 * s * s
    }
}

/// (θ − sinθ) / θ³
pub(crate) fn th_minus_sin_over3(th: f64) -> f64 {
    let t2 = th * th;
    if th < 0.1 {
        1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362_880.0 + t2 * t2 * t2 * t2 / 39_916_800.0
    } else {
        (th - th.sin()) / (t2 * th)
    }
}

/// (1 − (θ/2)·cot(θ/2)) / θ², the [r]² coefficient of both inverse Jacobians.
pub(crate) fn inv_jacobian_coeff(th: f64) -> f64 {
    let t2 = th * th;
    if th < 0.1 {
        1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30_240.0 + t2 * t2 * t2 / 1_209_600.0
    } else {
        let h = 0.5 * th;
        (1.0 - h * h.cos() / h.sin()) / t2
    }
}

/// Rotation vector of `rot`, with norm in [0, π].
pub fn rot_log(rot: &RotationMatrix) -> Vec3 {
    let w = 0.5 * vee(&(rot - rot.transpose()));
    let s = w.norm(); // sin θ
    let c = 0.5 * (rot.trace() - 1.0); // cos θ
    let th = s.atan2(c);
    if th < SMALL_ANGLE {
        return w * (1.0 + th * th / 6.0);
    }
    if std::f64::consts::PI - th > NEAR_PI {
        return w * (th / s);
    }
    // nnᵀ = (S − cosθ·I) / (1 − cosθ) with S the symmetric part.
    let sym = 0.5 * (rot + rot.transpose());
    let nn = (sym - Mat3::identity() * c) / (1.0 - c);
    let k = (0..3)
        .max_by(|&i, &j| nn[(i, i)].total_cmp(&nn[(j, j)]))
        .unwrap();
    let mut n: Vec3 = nn.column(k).into_owned() / nn[(k, k)].max(0.0).sqrt();
    n.normalize_mut();
    if n.dot(&w) < 0.0 {
        n = -n;
    }
    n * th
}

/// Rotation angle in [0, π].
pub fn rot_angle(rot: &RotationMatrix) -> f64 {
    let s = 0.5 * vee(&(rot - rot.transpose())).norm();
    s.atan2(0.5 * (rot.trace() - 1.0))
}

/// Geodesic distance between two rotations.
pub fn rot_distance(a: &RotationMatrix, b: &RotationMatrix) -> f64 {
    rot_angle(&(a.transpose() * b))
}

pub fn is_rotation(m: &Mat3, tol: f64) -> bool {
    let e = m * m.transpose() - Mat3::identity();
    e.iter().all(|x| x.abs() <= tol) && (m.determinant() - 1.0).abs() <= tol
}

/// Closest rotation (polar factor) to a nearly orthonormal matrix.
pub fn orthonormalize(m: &Mat3) -> RotationMatrix {
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut d = Mat3::identity();
    if (u * vt).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    u * d * vt
}

/// Scalar-first unit quaternion (qw, qx, qy, qz) to a rotation matrix.
pub fn quat_to_rot(q: [f64; 4]) -> RotationMatrix {
    let uq = UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(q[0], q[1], q[2], q[3]));
    uq.to_rotation_matrix().into_inner()
}

/// Rotation matrix to a scalar-first unit quaternion with qw ≥ 0.
pub fn rot_to_quat(rot: &RotationMatrix) -> [f64; 4] {
    let r = nalgebra::Rotation3::from_matrix_unchecked(*rot);
    let q = UnitQuaternion::from_rotation_matrix(&r);
    let q = q.quaternion();
    let s = if q.w < 0.0 { -1.0 } else { 1.0 };
    [s * q.w, s * q.i, s * q.j, s * q.k]
}
