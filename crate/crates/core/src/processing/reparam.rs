use super::express::TaskFrameTrial;
use crate::error::{Error, Result};
use crate::geometry::{interpolate, Pose, Screw};
use crate::pipeline::ProgressKind;

/// Rates below this are clamped so ξ(t) stays invertible.
pub const MIN_RATE: f64 = 1e-9;

/// A trial resampled on a uniform grid of normalized progress ξ̄ ∈ [0, 1].
/// Twists are derivatives w.r.t. ξ (not t); wrenches and poses are values.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgressTrial {
    pub grid: Vec<f64>,
    pub poses: Vec<Pose>,
    pub twists: Vec<Screw>,
    pub wrenches: Vec<Screw>,
    /// Total progress [rad or m].
    pub xi_max: f64,
    pub duration_s: f64,
}

pub fn progress_rate(t: &Screw, kind: ProgressKind) -> f64 {
    match kind {
        ProgressKind::RotationAngle => t.a.norm(),
        ProgressKind::ArcLength => t.b.norm(),
    }
}

pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|j| j as f64 / (n - 1) as f64).collect(),
    }
}

pub fn reparameterize(trial: &TaskFrameTrial, kind: ProgressKind, n: usize) -> Result<ProgressTrial> {
    let m = trial.times.len();
    if m < 2 || n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: m.min(n) });
    }
    let raw: Vec<f64> = trial.twists.iter().map(|t| progress_rate(t, kind)).collect();
    let dwell = raw.iter().filter(|r| **r < MIN_RATE).count();
    if dwell as f64 > 0.05 * m as f64 {
        log::warn!("{}: progress rate is below {MIN_RATE:e} for {dwell} of {m} samples", trial.name);
    }
    let rate: Vec<f64> = raw.iter().map(|r| r.max(MIN_RATE)).collect();
    let mut xi = vec![0.0; m];
    for i in 1..m {
        xi[i] = xi[i - 1] + 0.5 * (rate[i] + rate[i - 1]) * (trial.times[i] - trial.times[i - 1]);
    }
    let xi_max = xi[m - 1];
    if !(xi_max >= 1e-6) {
        return Err(Error::DegenerateProgress(xi_max));
    }
    let xb: Vec<f64> = xi.iter().map(|x| x / xi_max).collect();
    let grid = uniform_grid(n);
    let mut out = ProgressTrial {
        grid: grid.clone(),
        poses: Vec::with_capacity(n),
        twists: Vec::with_capacity(n),
        wrenches: Vec::with_capacity(n),
        xi_max,
        duration_s: trial.times[m - 1] - trial.times[0],
    };
    let mut k = 0;
    for &g in &grid {
        while k + 2 < m && xb[k + 1] < g {
            k += 1;
        }
        let span = xb[k + 1] - xb[k];
        let s = if span > 0.0 { ((g - xb[k]) / span).clamp(0.0, 1.0) } else { 0.0 };
        let lerp = |a: &Screw, b: &Screw| a.scale(1.0 - s).try_add(&b.scale(s)).expect("same kind");
        let r = rate[k] * (1.0 - s) + rate[k + 1] * s;
        out.poses.push(interpolate(&trial.poses[k], &trial.poses[k + 1], s));
        out.twists.push(lerp(&trial.twists[k], &trial.twists[k + 1]).scale(1.0 / r));
        out.wrenches.push(lerp(&trial.wrenches[k], &trial.wrenches[k + 1]));
    }
    Ok(out)
}
