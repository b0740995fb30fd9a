use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::io::RawTrial;
use super::smooth::{smooth_poses, smooth_wrench};
use crate::error::{Error, Result};
use crate::geometry::{differentiate_poses, screw_transform, FrameTag, Pose, Screw};

/// A preprocessed trial: smoothed poses T_w←tl, their twists, and the
/// wrenches, each in both viewpoints (moments about the viewpoint origin).
#[derive(Clone, Debug, PartialEq)]
pub struct Trial {
    pub name: String,
    pub times: Vec<f64>,
    pub poses: Vec<Pose>,
    pub twists_world: Vec<Screw>,
    pub twists_tool: Vec<Screw>,
    pub wrenches_world: Vec<Screw>,
    pub wrenches_tool: Vec<Screw>,
}

impl Trial {
    pub fn len(&self) -> usize {
        self.times.len()
    }
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn twists(&self, vp: FrameTag) -> &[Screw] {
        match vp {
            FrameTag::World => &self.twists_world,
            FrameTag::Tool => &self.twists_tool,
        }
    }

    pub fn wrenches(&self, vp: FrameTag) -> &[Screw] {
        match vp {
            FrameTag::World => &self.wrenches_world,
            FrameTag::Tool => &self.wrenches_tool,
        }
    }

    pub fn slice(&self, r: Range<usize>) -> Trial {
        Trial {
            name: self.name.clone(),
            times: self.times[r.clone()].to_vec(),
            poses: self.poses[r.clone()].to_vec(),
            twists_world: self.twists_world[r.clone()].to_vec(),
            twists_tool: self.twists_tool[r.clone()].to_vec(),
            wrenches_world: self.wrenches_world[r.clone()].to_vec(),
            wrenches_tool: self.wrenches_tool[r].to_vec(),
        }
    }
}

/// All trials of one task; estimators see them concatenated in trial order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialBatch {
    pub trials: Vec<Trial>,
}

impl TrialBatch {
    pub fn new(trials: Vec<Trial>) -> Self {
        Self { trials }
    }
    pub fn len_samples(&self) -> usize {
        self.trials.iter().map(Trial::len).sum()
    }
    pub fn poses(&self) -> Vec<Pose> {
        self.trials.iter().flat_map(|t| t.poses.iter().copied()).collect()
    }
    pub fn twists(&self, vp: FrameTag) -> Vec<Screw> {
        self.trials.iter().flat_map(|t| t.twists(vp).iter().copied()).collect()
    }
    pub fn wrenches(&self, vp: FrameTag) -> Vec<Screw> {
        self.trials.iter().flat_map(|t| t.wrenches(vp).iter().copied()).collect()
    }
}

/// Tool-frame copies of world-frame screws, sample by sample.
pub fn expand_viewpoints(poses: &[Pose], world: &[Screw]) -> Vec<Screw> {
    poses.iter().zip(world).map(|(t, s)| screw_transform(&t.inverse(), s)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentThresholds {
    pub f_n: f64,
    pub m_nm: f64,
    pub omega_rad_per_s: f64,
    pub v_m_per_s: f64,
}

impl Default for SegmentThresholds {
    fn default() -> Self {
        Self { f_n: 1.0, m_nm: 0.1, omega_rad_per_s: 0.01, v_m_per_s: 0.002 }
    }
}

/// Longest run in contact (‖f‖ or ‖m‖ above threshold), then trimmed at both
/// ends while the tool barely moves (‖ω‖ and ‖v‖ at or below threshold).
/// Wrench and twist are read in the tool frame.
pub fn segment_contact(trial: &Trial, th: &SegmentThresholds) -> Result<Range<usize>> {
    if [th.f_n, th.m_nm, th.omega_rad_per_s, th.v_m_per_s].iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::invalid("segmentation thresholds", "must be >= 0"));
    }
    let in_contact = |w: &Screw| w.a.norm() > th.f_n || w.b.norm() > th.m_nm;
    let mut best = 0..0;
    let mut start = None;
    for (i, w) in trial.wrenches_tool.iter().enumerate() {
        match (in_contact(w), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s > best.len() {
                    best = s..i;
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        if trial.len() - s > best.len() {
            best = s..trial.len();
        }
    }
    let moving = |t: &Screw| t.a.norm() > th.omega_rad_per_s || t.b.norm() > th.v_m_per_s;
    let tw = &trial.twists_tool;
    let (mut lo, mut hi) = (best.start, best.end);
    while lo < hi && !moving(&tw[lo]) {
        lo += 1;
    }
    while hi > lo && !moving(&tw[hi - 1]) {
        hi -= 1;
    }
    if lo >= hi {
        return Err(Error::NoContact);
    }
    Ok(lo..hi)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    /// Gaussian smoothing std for wrenches [s]; 0 disables.
    pub wrench_sigma_s: f64,
    /// Gaussian smoothing std for poses before differentiation [s]; 0 disables.
    pub pose_sigma_s: f64,
    pub segment: bool,
    #[serde(default)]
    pub thresholds: SegmentThresholds,
    /// The caller asserts that wrenches are gravity compensated.
    pub gravity_compensated: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            wrench_sigma_s: 0.05,
            pose_sigma_s: 0.05,
            segment: true,
            thresholds: SegmentThresholds::default(),
            gravity_compensated: true,
        }
    }
}

/// Smooth, differentiate, expand to the tool viewpoint and segment.
pub fn preprocess_trial(raw: &RawTrial, cfg: &PreprocessConfig) -> Result<Trial> {
    if !cfg.gravity_compensated {
        return Err(Error::invalid("gravity_compensated", "wrenches must be gravity compensated upstream"));
    }
    let poses = smooth_poses(&raw.times, &raw.poses, cfg.pose_sigma_s);
    let wrenches_world = smooth_wrench(&raw.times, &raw.wrenches, cfg.wrench_sigma_s);
    let twists_world = differentiate_poses(&poses, &raw.times)?;
    let trial = Trial {
        name: raw.name.clone(),
        times: raw.times.clone(),
        twists_tool: expand_viewpoints(&poses, &twists_world),
        wrenches_tool: expand_viewpoints(&poses, &wrenches_world),
        poses,
        twists_world,
        wrenches_world,
    };
    if !cfg.segment {
        return Ok(trial);
    }
    let range = segment_contact(&trial, &cfg.thresholds).map_err(|e| e.with_candidate(raw.name.clone()))?;
    if range.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: range.len() }.with_candidate(raw.name.clone()));
    }
    Ok(trial.slice(range))
}

pub fn preprocess(raws: &[RawTrial], cfg: &PreprocessConfig) -> Result<TrialBatch> {
    raws.iter().map(|r| preprocess_trial(r, cfg)).collect::<Result<Vec<_>>>().map(TrialBatch::new)
}
