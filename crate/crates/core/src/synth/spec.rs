use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rot_exp, FrameTag, Pose, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MotionModelKind {
    /// The anchor point has zero velocity.
    PureRotationAboutPoint,
    /// The anchor point moves with constant velocity (constant in the
    /// anchor frame).
    ConstantPointTranslation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WrenchModelKind {
    /// Zero moment at the anchor.
    PureForceThroughPoint,
    /// Constant moment at the anchor.
    ConstantMomentThroughPoint,
}

fn default_cycles() -> [u32; 2] {
    [2, 3]
}

/// Motion description in the anchor frame: ω(t) = Ω(t)·dir(t) with
/// Ω(t) = Ω(1 + modulation·sin 2πt/T) and dir(t) the main axis tilted by
/// sinusoidal wobbles towards `secondary_axis` and axis × secondary.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSpec {
    pub model: MotionModelKind,
    pub anchor_frame: FrameTag,
    pub anchor_point_m: [f64; 3],
    pub axis: [f64; 3],
    pub secondary_axis: [f64; 3],
    pub omega_rad_per_s: f64,
    #[serde(default)]
    pub omega_modulation: f64,
    #[serde(default)]
    pub axis_wobble_rad: [f64; 2],
    #[serde(default = "default_cycles")]
    pub wobble_cycles: [u32; 2],
    /// Anchor velocity (constant-translation model only).
    #[serde(default)]
    pub velocity_m_per_s: [f64; 3],
}

/// Wrench description in the anchor frame, built like [`MotionSpec`]:
/// a wobbling force through the anchor plus a constant moment there.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrenchSpec {
    pub model: WrenchModelKind,
    pub anchor_frame: FrameTag,
    pub anchor_point_m: [f64; 3],
    pub direction: [f64; 3],
    pub secondary_axis: [f64; 3],
    pub force_n: f64,
    #[serde(default)]
    pub force_modulation: f64,
    #[serde(default)]
    pub direction_wobble_rad: [f64; 2],
    #[serde(default = "default_cycles")]
    pub wobble_cycles: [u32; 2],
    /// Moment at the anchor (constant-moment model only).
    #[serde(default)]
    pub moment_nm: [f64; 3],
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub pos_m: f64,
    pub rot_rad: f64,
    pub force_n: f64,
    pub moment_nm: f64,
}

/// Per-trial randomization. Placement moves the environment in the world;
/// grasp moves the tool's initial pose relative to the environment.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariationSpec {
    #[serde(default)]
    pub placement_rotation_max_rad: f64,
    #[serde(default)]
    pub placement_translation_m: [f64; 3],
    #[serde(default)]
    pub grasp_rotation_max_rad: f64,
    #[serde(default)]
    pub grasp_translation_m: [f64; 3],
    /// Magnitudes scale by (1 + jitter·u), u ~ U(−1, 1), per trial.
    #[serde(default)]
    pub magnitude_jitter: f64,
    /// Random wobble phases per trial.
    #[serde(default)]
    pub random_phase: bool,
}

/// Nominal environment placement T_w←env and initial grasp T_env←tl.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NominalSpec {
    #[serde(default)]
    pub placement_position_m: [f64; 3],
    #[serde(default)]
    pub placement_rotation_rad: [f64; 3],
    #[serde(default)]
    pub grasp_position_m: [f64; 3],
    #[serde(default)]
    pub grasp_rotation_rad: [f64; 3],
}

impl NominalSpec {
    pub fn placement(&self) -> Pose {
        Pose::from_parts(rot_exp(&Vec3::from(self.placement_rotation_rad)), Vec3::from(self.placement_position_m))
    }
    pub fn grasp(&self) -> Pose {
        Pose::from_parts(rot_exp(&Vec3::from(self.grasp_rotation_rad)), Vec3::from(self.grasp_position_m))
    }
}

/// Stationary, contact-free time before and after the motion.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaddingSpec {
    pub pre_s: f64,
    pub post_s: f64,
}

fn default_substeps() -> usize {
    10
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub n_trials: usize,
    pub duration_s: f64,
    pub rate_hz: f64,
    pub seed: u64,
    /// Integration substeps per sample interval.
    #[serde(default = "default_substeps")]
    pub substeps: usize,
    pub motion: MotionSpec,
    pub wrench: WrenchSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub variation: VariationSpec,
    #[serde(default)]
    pub nominal: NominalSpec,
    #[serde(default)]
    pub padding: PaddingSpec,
}

fn unit(name: &str, v: [f64; 3]) -> Result<Vec3> {
    let v = Vec3::from(v);
    let n = v.norm();
    if !(n > 1e-12) || !n.is_finite() {
        return Err(Error::invalid(name, "must be a nonzero finite vector"));
    }
    Ok(v / n)
}

/// Orthonormal (main, secondary, third) triad; `secondary` is made
/// orthogonal to `main`.
pub(crate) fn triad(name: &str, main: [f64; 3], secondary: [f64; 3]) -> Result<[Vec3; 3]> {
    let m = unit(name, main)?;
    let s = Vec3::from(secondary);
    let s = s - m * m.dot(&s);
    let s = unit(&format!("{name} secondary_axis (orthogonal part)"), [s.x, s.y, s.z])?;
    Ok([m, s, m.cross(&s)])
}

fn check(cond: bool, field: &str, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(field, msg))
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        check(self.duration_s > 0.0 && self.duration_s.is_finite(), "duration_s", "must be > 0")?;
        check(self.rate_hz > 0.0 && self.rate_hz.is_finite(), "rate_hz", "must be > 0")?;
        check(self.n_trials >= 1, "n_trials", "must be >= 1")?;
        check(self.substeps >= 1, "substeps", "must be >= 1")?;
        check(self.duration_s * self.rate_hz >= 2.0, "duration_s", "must span at least 3 samples")?;
        let m = &self.motion;
        check(m.omega_rad_per_s >= 0.0, "motion.omega_rad_per_s", "must be >= 0")?;
        check((0.0..1.0).contains(&m.omega_modulation), "motion.omega_modulation", "must be in [0, 1)")?;
        triad("motion.axis", m.axis, m.secondary_axis)?;
        if m.model == MotionModelKind::PureRotationAboutPoint {
            check(m.velocity_m_per_s == [0.0; 3], "motion.velocity_m_per_s", "must be zero for PureRotationAboutPoint")?;
        }
        let w = &self.wrench;
        check(w.force_n >= 0.0, "wrench.force_n", "must be >= 0")?;
        check((0.0..1.0).contains(&w.force_modulation), "wrench.force_modulation", "must be in [0, 1)")?;
        triad("wrench.direction", w.direction, w.secondary_axis)?;
        if w.model == WrenchModelKind::PureForceThroughPoint {
            check(w.moment_nm == [0.0; 3], "wrench.moment_nm", "must be zero for PureForceThroughPoint")?;
        }
        let n = &self.noise;
        for (f, v) in [("noise.pos_m", n.pos_m), ("noise.rot_rad", n.rot_rad), ("noise.force_n", n.force_n), ("noise.moment_nm", n.moment_nm)] {
            check(v >= 0.0, f, "must be >= 0")?;
        }
        let v = &self.variation;
        check((0.0..1.0).contains(&v.magnitude_jitter), "variation.magnitude_jitter", "must be in [0, 1)")?;
        check(v.placement_rotation_max_rad >= 0.0, "variation.placement_rotation_max_rad", "must be >= 0")?;
        check(v.grasp_rotation_max_rad >= 0.0, "variation.grasp_rotation_max_rad", "must be >= 0")?;
        check(self.padding.pre_s >= 0.0, "padding.pre_s", "must be >= 0")?;
        check(self.padding.post_s >= 0.0, "padding.post_s", "must be >= 0")?;
        Ok(())
    }

    pub fn from_toml(name: &str, text: &str) -> Result<Self> {
        let spec: ScenarioSpec = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1);
            Error::Parse { path: name.to_string(), line, msg: e.message().to_string() }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&path.display().to_string(), &text)
    }

    pub fn placement_randomized(&self) -> bool {
        let v = &self.variation;
        v.placement_rotation_max_rad > 0.0 || v.placement_translation_m.iter().any(|x| *x != 0.0)
    }

    pub fn grasp_randomized(&self) -> bool {
        let v = &self.variation;
        v.grasp_rotation_max_rad > 0.0 || v.grasp_translation_m.iter().any(|x| *x != 0.0)
    }
}
