use nalgebra::Matrix4;

use super::screw::{Screw, ScrewKind};
use super::so3::{
    inv_jacobian_coeff, is_rotation, one_minus_cos_over2, rot_exp, rot_log, skew, th_minus_sin_over3, Mat3, RotationMatrix,
    Vec3,
};
use crate::error::{Error, Result};

/// Pose of a frame w.r.t. another: x_a = r · x_b + p.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Pose {
    #[serde(with = "crate::serde_util::mat3")]
    pub r: RotationMatrix,
    pub p: Vec3,
}

impl Default for Pose {
    fn default() -> Self {
        Self::identity()
    }
}

impl Pose {
    pub fn identity() -> Self {
        Self { r: Mat3::identity(), p: Vec3::zeros() }
    }

    /// Validating constructor (orthonormal, right-handed within 1e-9).
    pub fn new(r: RotationMatrix, p: Vec3) -> Result<Self> {
        if !is_rotation(&r, 1e-9) {
            return Err(Error::invalid("rotation", "matrix is not a proper rotation"));
        }
        Ok(Self { r, p })
    }

    pub fn from_parts(r: RotationMatrix, p: Vec3) -> Self {
        Self { r, p }
    }
    pub fn from_translation(p: Vec3) -> Self {
        Self { r: Mat3::identity(), p }
    }
    pub fn from_rotation(r: RotationMatrix) -> Self {
        Self { r, p: Vec3::zeros() }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.r.transpose();
        Self { r: rt, p: -(rt * self.p) }
    }

    pub fn compose(&self, o: &Pose) -> Self {
        Self { r: self.r * o.r, p: self.r * o.p + self.p }
    }

    pub fn transform_point(&self, x: &Vec3) -> Vec3 {
        self.r * x + self.p
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.r);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.p);
        m
    }

    pub fn from_matrix(m: &Matrix4<f64>) -> Self {
        Self {
            r: m.fixed_view::<3, 3>(0, 0).into_owned(),
            p: m.fixed_view::<3, 1>(0, 3).into_owned(),
        }
    }
}

impl std::ops::Mul for Pose {
    type Output = Pose;
    fn mul(self, o: Pose) -> Pose {
        self.compose(&o)
    }
}

impl std::ops::Mul<&Pose> for &Pose {
    type Output = Pose;
    fn mul(self, o: &Pose) -> Pose {
        self.compose(o)
    }
}

// V(r) = I + (1−cosθ)/θ² [r] + (θ−sinθ)/θ³ [r]²
fn left_jacobian(r: &Vec3) -> Mat3 {
    let th = r.norm();
    let k = skew(r);
    Mat3::identity() + k * one_minus_cos_over2(th) + k * k * th_minus_sin_over3(th)
}

// V(r)⁻¹ = I − ½[r] + (1/θ²)(1 − θ sinθ / (2(1 − cosθ))) [r]²
fn left_jacobian_inv(r: &Vec3) -> Mat3 {
    let k = skew(r);
    Mat3::identity() - k * 0.5 + k * k * inv_jacobian_coeff(r.norm())
}

/// Matrix exponential of a displacement screw (r, u).
pub fn pose_exp(d: &Screw) -> Pose {
    Pose { r: rot_exp(&d.a), p: left_jacobian(&d.a) * d.b }
}

/// Matrix logarithm of a pose as a displacement screw.
pub fn pose_log(t: &Pose) -> Screw {
    let r = rot_log(&t.r);
    Screw::new(ScrewKind::Displacement, r, left_jacobian_inv(&r) * t.p)
}

/// `t_ca⁻¹ · t_ba · t_ca`: the relative pose `t_ba` seen from frame c.
pub fn similarity_transform(t_ba: &Pose, t_ca: &Pose) -> Pose {
    t_ca.inverse().compose(t_ba).compose(t_ca)
}

/// Constant-screw interpolation: `a · exp(s · log(a⁻¹ b))`.
pub fn interpolate(a: &Pose, b: &Pose, s: f64) -> Pose {
    let d = pose_log(&a.inverse().compose(b));
    a.compose(&pose_exp(&d.scale(s)))
}
