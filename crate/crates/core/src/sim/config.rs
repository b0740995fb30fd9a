use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rot_exp, Pose, Vec3};

/// Gains, compliances and weights of the pose + wrench constraint
/// controller. Compliances are isotropic per channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerConfig {
    pub k_p_per_s: f64,
    pub k_w_per_s: f64,
    pub c_f_m_per_n: f64,
    pub c_m_rad_per_nm: f64,
    pub w_p: f64,
    pub w_w: f64,
    pub control_rate_hz: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            k_p_per_s: 3.0,
            k_w_per_s: 3.0,
            c_f_m_per_n: 0.4e-3,
            c_m_rad_per_nm: 0.7e-3,
            w_p: 0.01,
            w_w: 0.99,
            control_rate_hz: 500.0,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        for (f, v) in [
            ("k_p_per_s", self.k_p_per_s),
            ("k_w_per_s", self.k_w_per_s),
            ("c_f_m_per_n", self.c_f_m_per_n),
            ("c_m_rad_per_nm", self.c_m_rad_per_nm),
            ("control_rate_hz", self.control_rate_hz),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(f, "must be > 0"));
            }
        }
        if !(0.0..=1.0).contains(&self.w_p) || !(0.0..=1.0).contains(&self.w_w) {
            return Err(Error::invalid("w_p/w_w", "must lie in [0, 1]"));
        }
        if (self.w_p + self.w_w - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("w_p/w_w", format!("must sum to 1 (got {})", self.w_p + self.w_w)));
        }
        Ok(())
    }

    /// Equivalent 1-DoF translational stiffness of the blended controller.
    pub fn k_eq(&self) -> f64 {
        self.w_p * self.k_p_per_s / (self.w_w * self.k_w_per_s * self.c_f_m_per_n)
    }
}

/// Spring environments. All geometry is in world coordinates and acts on
/// the tool origin; no environment resists tool rotation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum EnvironmentModel {
    /// Two-sided spring along `axis` with rest position `rest_position_m`.
    Spring1D { stiffness_n_per_m: f64, rest_position_m: [f64; 3], axis: [f64; 3] },
    /// Hinge: springs pull the tool origin back onto the circle of
    /// `radius_m` around the axis through `hinge_point_m`.
    RevoluteJoint {
        hinge_point_m: [f64; 3],
        axis: [f64; 3],
        radius_m: f64,
        radial_stiffness_n_per_m: f64,
        axial_stiffness_n_per_m: f64,
    },
    /// One-sided contact: the half-space behind the plane (against
    /// `normal`) pushes back; free space exerts nothing.
    PointOnPlane { plane_point_m: [f64; 3], normal: [f64; 3], stiffness_n_per_m: f64 },
}

fn unit_ok(v: &[f64; 3]) -> bool {
    (Vec3::from(*v).norm() - 1.0).abs() < 1e-9
}

impl EnvironmentModel {
    pub fn validate(&self) -> Result<()> {
        let pos = |f: &str, v: f64| if v > 0.0 && v.is_finite() { Ok(()) } else { Err(Error::invalid(f, "must be > 0")) };
        let unit = |f: &str, v: &[f64; 3]| if unit_ok(v) { Ok(()) } else { Err(Error::invalid(f, "must be a unit vector")) };
        match self {
            EnvironmentModel::Spring1D { stiffness_n_per_m, axis, .. } => {
                pos("environment.stiffness_n_per_m", *stiffness_n_per_m)?;
                unit("environment.axis", axis)
            }
            EnvironmentModel::RevoluteJoint { axis, radius_m, radial_stiffness_n_per_m, axial_stiffness_n_per_m, .. } => {
                pos("environment.radius_m", *radius_m)?;
                pos("environment.radial_stiffness_n_per_m", *radial_stiffness_n_per_m)?;
                pos("environment.axial_stiffness_n_per_m", *axial_stiffness_n_per_m)?;
                unit("environment.axis", axis)
            }
            EnvironmentModel::PointOnPlane { normal, stiffness_n_per_m, .. } => {
                pos("environment.stiffness_n_per_m", *stiffness_n_per_m)?;
                unit("environment.normal", normal)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialPose {
    pub position_m: [f64; 3],
    /// Rotation vector of T_w←tl.
    #[serde(default)]
    pub rotation_rad: [f64; 3],
}

impl InitialPose {
    pub fn pose(&self) -> Pose {
        Pose::from_parts(rot_exp(&Vec3::from(self.rotation_rad)), Vec3::from(self.position_m))
    }
}

fn one() -> f64 {
    1.0
}

/// Deviations of the execution from the demonstrations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Progress-rate multiplier.
    #[serde(default = "one")]
    pub speed_scale: f64,
    /// Desired-wrench multiplier.
    #[serde(default = "one")]
    pub wrench_scale: f64,
    /// Added to the initial tool position (world) [m].
    #[serde(default)]
    pub initial_position_offset_m: [f64; 3],
    /// Applied to the initial tool orientation (world rotation vector).
    #[serde(default)]
    pub initial_rotation_offset_rad: [f64; 3],
    /// Task-frame origin shift, in task-frame coordinates [m].
    #[serde(default)]
    pub tf_origin_offset_m: [f64; 3],
    /// Task-frame re-orientation (rotation vector in task-frame coordinates).
    #[serde(default)]
    pub tf_rotation_offset_rad: [f64; 3],
    /// Stop after this long; defaults to three nominal durations.
    #[serde(default)]
    pub max_duration_s: Option<f64>,
}

impl Default for Overrides {
    fn default() -> Self {
        Self {
            speed_scale: 1.0,
            wrench_scale: 1.0,
            initial_position_offset_m: [0.0; 3],
            initial_rotation_offset_rad: [0.0; 3],
            tf_origin_offset_m: [0.0; 3],
            tf_rotation_offset_rad: [0.0; 3],
            max_duration_s: None,
        }
    }
}

impl Overrides {
    pub fn validate(&self) -> Result<()> {
        if !(self.speed_scale > 0.0 && self.speed_scale.is_finite()) {
            return Err(Error::invalid("overrides.speed_scale", "must be > 0"));
        }
        if !self.wrench_scale.is_finite() {
            return Err(Error::invalid("overrides.wrench_scale", "must be finite"));
        }
        if let Some(d) = self.max_duration_s {
            if !(d > 0.0) {
                return Err(Error::invalid("overrides.max_duration_s", "must be > 0"));
            }
        }
        Ok(())
    }

    /// Task-frame perturbation T_tf←tf'.
    pub fn tf_offset(&self) -> Pose {
        Pose::from_parts(rot_exp(&Vec3::from(self.tf_rotation_offset_rad)), Vec3::from(self.tf_origin_offset_m))
    }
}

/// Everything `simulate` needs besides the task model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimScenario {
    #[serde(default)]
    pub controller: ControllerConfig,
    pub environment: EnvironmentModel,
    pub initial_pose: InitialPose,
    #[serde(default)]
    pub overrides: Overrides,
}

impl SimScenario {
    pub fn validate(&self) -> Result<()> {
        self.controller.validate()?;
        self.environment.validate()?;
        self.overrides.validate()
    }

    pub fn from_toml(name: &str, text: &str) -> Result<Self> {
        let s: SimScenario = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1);
            Error::Parse { path: name.to_string(), line, msg: e.message().to_string() }
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&path.display().to_string(), &text)
    }
}
