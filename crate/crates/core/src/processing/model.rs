use std::path::Path;

use serde::{Deserialize, Serialize};

use super::average::AveragedSignals;
use crate::error::{Error, Result};
use crate::geometry::{interpolate, quat_to_rot, Pose, Screw, ScrewKind, Vec3};
use crate::pipeline::TaskFrame;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

/// Where an artifact came from: input content hashes and the full config.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub inputs: Vec<InputHash>,
    pub config: serde_json::Value,
}

impl Provenance {
    pub fn new(inputs: Vec<InputHash>, config: serde_json::Value) -> Self {
        Self { generator: format!("taskframe {}", env!("CARGO_PKG_VERSION")), inputs, config }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoseRef {
    /// Tool position relative to its initial pose, seen from the task frame [m].
    pub position_m: Vec<[f64; 3]>,
    /// Matching orientation as unit quaternions (w, x, y, z).
    pub quaternion_wxyz: Vec<[f64; 4]>,
}

/// Task frame plus averaged reference signals on a normalized progress grid.
///
/// Twists are stored per unit progress (dX/dξ); multiply by a progress rate
/// ξ̇ to get a time-domain twist. Wrenches are in tf, moments about its origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskModel {
    pub task_frame: TaskFrame,
    pub grid: Vec<f64>,
    pub pose_ref: PoseRef,
    pub twist_ref: Vec<[f64; 6]>,
    pub wrench_ref: Vec<[f64; 6]>,
    /// Mean total progress of the demonstrations [rad or m].
    pub xi_max_avg: f64,
    /// Mean duration of the demonstrations [s].
    pub duration_avg_s: f64,
    pub provenance: Provenance,
}

/// Reference signals at one progress value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefSample {
    pub pose: Pose,
    pub twist_per_xi: Screw,
    pub wrench: Screw,
}

impl TaskModel {
    pub fn from_signals(task_frame: TaskFrame, s: &AveragedSignals) -> Self {
        TaskModel {
            task_frame,
            grid: s.grid.clone(),
            pose_ref: PoseRef {
                position_m: s.positions.iter().map(|p| [p.x, p.y, p.z]).collect(),
                quaternion_wxyz: s.quaternions.clone(),
            },
            twist_ref: s.twists.iter().map(Screw::to_array).collect(),
            wrench_ref: s.wrenches.iter().map(Screw::to_array).collect(),
            xi_max_avg: s.xi_max_avg,
            duration_avg_s: s.duration_avg_s,
            provenance: Provenance::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid.len();
        if n < 2 {
            return Err(Error::invalid("grid", "needs at least two points"));
        }
        if self.grid[0] != 0.0 || self.grid[n - 1] != 1.0 || self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid", "must increase strictly from 0 to 1"));
        }
        let lens = [
            self.pose_ref.position_m.len(),
            self.pose_ref.quaternion_wxyz.len(),
            self.twist_ref.len(),
            self.wrench_ref.len(),
        ];
        if lens.iter().any(|&l| l != n) {
            return Err(Error::invalid("reference signals", "length differs from grid"));
        }
        for q in &self.pose_ref.quaternion_wxyz {
            let nq = q.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (nq - 1.0).abs() > 1e-9 {
                return Err(Error::invalid("pose_ref.quaternion_wxyz", format!("norm {nq} is not 1")));
            }
        }
        if !(self.xi_max_avg > 0.0) || !(self.duration_avg_s > 0.0) {
            return Err(Error::invalid("xi_max_avg/duration_avg_s", "must be > 0"));
        }
        Ok(())
    }

    pub fn pose_at_index(&self, j: usize) -> Pose {
        let p = self.pose_ref.position_m[j];
        Pose::from_parts(quat_to_rot(self.pose_ref.quaternion_wxyz[j]), Vec3::new(p[0], p[1], p[2]))
    }

    /// Reference signals at normalized progress `xb` (clamped to [0, 1]).
    pub fn sample(&self, xb: f64) -> RefSample {
        let n = self.grid.len();
        let xb = xb.clamp(0.0, 1.0);
        let k = self.grid.partition_point(|g| *g <= xb).clamp(1, n - 1) - 1;
        let s = ((xb - self.grid[k]) / (self.grid[k + 1] - self.grid[k])).clamp(0.0, 1.0);
        let lerp = |a: &[f64; 6], b: &[f64; 6]| -> [f64; 6] { std::array::from_fn(|c| a[c] * (1.0 - s) + b[c] * s) };
        RefSample {
            pose: interpolate(&self.pose_at_index(k), &self.pose_at_index(k + 1), s),
            twist_per_xi: Screw::from_array(ScrewKind::Twist, lerp(&self.twist_ref[k], &self.twist_ref[k + 1])),
            wrench: Screw::from_array(ScrewKind::Wrench, lerp(&self.wrench_ref[k], &self.wrench_ref[k + 1])),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("task model serializes")
    }

    pub fn from_json(name: &str, text: &str) -> Result<Self> {
        let m: TaskModel = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: name.to_string(),
            line: e.line(),
            msg: e.to_string(),
        })?;
        m.validate()?;
        Ok(m)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&path.display().to_string(), &text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}
