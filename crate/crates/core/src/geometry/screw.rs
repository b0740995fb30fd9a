use serde::{Deserialize, Serialize};

use super::pose::Pose;
use super::so3::Vec3;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScrewKind {
    Twist,
    Wrench,
    Displacement,
}

/// A 6-vector with directional part `a` (ω, f or r) and moment part `b`
/// (v, m or u) referenced at the origin of its expression frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Screw {
    pub a: Vec3,
    pub b: Vec3,
    kind: ScrewKind,
}

impl Screw {
    pub fn new(kind: ScrewKind, a: Vec3, b: Vec3) -> Self {
        Self { a, b, kind }
    }
    pub fn twist(omega: Vec3, v: Vec3) -> Self {
        Self::new(ScrewKind::Twist, omega, v)
    }
    pub fn wrench(f: Vec3, m: Vec3) -> Self {
        Self::new(ScrewKind::Wrench, f, m)
    }
    pub fn displacement(r: Vec3, u: Vec3) -> Self {
        Self::new(ScrewKind::Displacement, r, u)
    }
    pub fn zero(kind: ScrewKind) -> Self {
        Self::new(kind, Vec3::zeros(), Vec3::zeros())
    }
    pub fn from_array(kind: ScrewKind, x: [f64; 6]) -> Self {
        Self::new(kind, Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]))
    }

    pub fn kind(&self) -> ScrewKind {
        self.kind
    }
    pub fn to_array(&self) -> [f64; 6] {
        [self.a.x, self.a.y, self.a.z, self.b.x, self.b.y, self.b.z]
    }

    /// Same numbers, different interpretation (e.g. a twist integrated over
    /// `dt` becomes a displacement).
    pub fn with_kind(self, kind: ScrewKind) -> Self {
        Self { kind, ..self }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.kind, self.a * k, self.b * k)
    }

    pub fn try_add(&self, o: &Screw) -> Result<Screw> {
        self.same_kind(o)?;
        Ok(Self::new(self.kind, self.a + o.a, self.b + o.b))
    }

    pub fn try_sub(&self, o: &Screw) -> Result<Screw> {
        self.same_kind(o)?;
        Ok(Self::new(self.kind, self.a - o.a, self.b - o.b))
    }

    fn same_kind(&self, o: &Screw) -> Result<()> {
        if self.kind != o.kind {
            return Err(Error::MixedKinds(self.kind, o.kind));
        }
        Ok(())
    }

    /// a·b / ‖a‖², or `None` for a (near) pure moment.
    pub fn pitch(&self) -> Option<f64> {
        let n2 = self.a.norm_squared();
        (n2 > 1e-18).then(|| self.a.dot(&self.b) / n2)
    }
}

/// Re-express a screw given in frame b into frame a, where `t_ab` is the
/// pose of b w.r.t. a: a' = R a, b' = R b + p × (R a).
pub fn screw_transform(t_ab: &Pose, s: &Screw) -> Screw {
    let a = t_ab.r * s.a;
    let b = t_ab.r * s.b + t_ab.p.cross(&a);
    Screw::new(s.kind, a, b)
}

/// Move the reference point of the moment part from `p_from` to `p_to`
/// (all in one frame): b' = b + a × (p_to − p_from).
pub fn change_reference_point(s: &Screw, p_from: &Vec3, p_to: &Vec3) -> Screw {
    Screw::new(s.kind, s.a, s.b + s.a.cross(&(p_to - p_from)))
}
