use serde::{Deserialize, Serialize};

use super::{det3, significance, Model, Significance};
use crate::error::Result;
use crate::geometry::{FrameTag, Mat3, ScrewKind, Vec3};
use crate::processing::TrialBatch;
use crate::statistics::{asip, mean_subtract, AsipResult};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OriginConfig {
    pub epsilon: f64,
    pub p0_m: [f64; 3],
}

impl Default for OriginConfig {
    fn default() -> Self {
        Self { epsilon: 0.0, p0_m: [0.0; 3] }
    }
}

/// One of the eight ASIP applications.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OriginCandidate {
    pub viewpoint: FrameTag,
    pub screw: ScrewKind,
    pub model: Model,
    pub asip: AsipResult,
    pub det: f64,
}

impl OriginCandidate {
    pub fn label(viewpoint: FrameTag, screw: ScrewKind, model: Model) -> String {
        let s = match screw {
            ScrewKind::Twist => "twist",
            ScrewKind::Wrench => "wrench",
            ScrewKind::Displacement => "displacement",
        };
        format!("{viewpoint}/{s}/{model}")
    }
}

/// Twist and wrench winners of one viewpoint, fused.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ViewpointOrigin {
    pub viewpoint: FrameTag,
    pub motion_model: Model,
    pub wrench_model: Model,
    pub motion_model_ratio: Significance,
    pub wrench_model_ratio: Significance,
    pub point: Vec3,
    #[serde(with = "crate::serde_util::mat3")]
    pub covariance: Mat3,
    pub det: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OriginRatios {
    pub viewpoint: Significance,
    pub motion_model: Significance,
    pub wrench_model: Significance,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OriginDecision {
    pub viewpoint: FrameTag,
    /// Origin in the coordinates of `viewpoint`.
    pub origin: Vec3,
    #[serde(with = "crate::serde_util::mat3")]
    pub covariance: Mat3,
    pub motion_model: Model,
    pub wrench_model: Model,
    pub ratios: OriginRatios,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OriginResult {
    pub decision: OriginDecision,
    /// Fixed order: viewpoint (world, tool) × screw (twist, wrench) × model.
    pub candidates: Vec<OriginCandidate>,
    pub per_viewpoint: Vec<ViewpointOrigin>,
}

/// Inverse-covariance weighted mean of two point estimates. An exact
/// estimate (σ̂² = 0) wins outright; two exact ones are averaged.
pub fn fuse_points(a: &AsipResult, b: &AsipResult) -> (Vec3, Mat3) {
    let ia = (a.sigma_hat_sq > 0.0).then(|| a.covariance.try_inverse()).flatten();
    let ib = (b.sigma_hat_sq > 0.0).then(|| b.covariance.try_inverse()).flatten();
    match (ia, ib) {
        (Some(ia), Some(ib)) => {
            let c = (ia + ib).try_inverse().unwrap_or_else(Mat3::zeros);
            let c = 0.5 * (c + c.transpose());
            (c * (ia * a.point + ib * b.point), c)
        }
        (None, Some(_)) => (a.point, a.covariance),
        (Some(_), None) => (b.point, b.covariance),
        (None, None) => (0.5 * (a.point + b.point), Mat3::zeros()),
    }
}

/// Model 1 unless Model 2 has a strictly smaller determinant.
fn pick_model(m1: &OriginCandidate, m2: &OriginCandidate) -> Model {
    if m2.det < m1.det {
        Model::Model2
    } else {
        Model::Model1
    }
}

pub fn derive_origin(batch: &TrialBatch, cfg: &OriginConfig) -> Result<OriginResult> {
    let p0 = Vec3::from(cfg.p0_m);
    let mut candidates = Vec::with_capacity(8);
    for vp in [FrameTag::World, FrameTag::Tool] {
        for kind in [ScrewKind::Twist, ScrewKind::Wrench] {
            let screws = match kind {
                ScrewKind::Twist => batch.twists(vp),
                _ => batch.wrenches(vp),
            };
            for model in [Model::Model1, Model::Model2] {
                let label = OriginCandidate::label(vp, kind, model);
                let res = match model {
                    Model::Model1 => asip(&screws, cfg.epsilon, &p0),
                    Model::Model2 => mean_subtract(&screws).and_then(|s| asip(&s, cfg.epsilon, &p0)),
                }
                .map_err(|e| e.with_candidate(label))?;
                let det = det3(&res.covariance);
                candidates.push(OriginCandidate { viewpoint: vp, screw: kind, model, asip: res, det });
            }
        }
    }
    let mut per_viewpoint = Vec::with_capacity(2);
    for v in 0..2 {
        let c = &candidates[4 * v..4 * v + 4];
        let (tm, wm) = (pick_model(&c[0], &c[1]), pick_model(&c[2], &c[3]));
        let t = if tm == Model::Model1 { &c[0] } else { &c[1] };
        let w = if wm == Model::Model1 { &c[2] } else { &c[3] };
        let (point, covariance) = fuse_points(&t.asip, &w.asip);
        per_viewpoint.push(ViewpointOrigin {
            viewpoint: c[0].viewpoint,
            motion_model: tm,
            wrench_model: wm,
            motion_model_ratio: significance(&c[0].asip.covariance, &c[1].asip.covariance),
            wrench_model_ratio: significance(&c[2].asip.covariance, &c[3].asip.covariance),
            point,
            covariance,
            det: det3(&covariance),
        });
    }
    let (world, tool) = (&per_viewpoint[0], &per_viewpoint[1]);
    let chosen = if tool.det <= world.det { tool } else { world };
    if tool.det == world.det {
        log::info!("origin viewpoint tie (det {:.3e}); choosing tool", tool.det);
    }
    let decision = OriginDecision {
        viewpoint: chosen.viewpoint,
        origin: chosen.point,
        covariance: chosen.covariance,
        motion_model: chosen.motion_model,
        wrench_model: chosen.wrench_model,
        ratios: OriginRatios {
            viewpoint: significance(&world.covariance, &tool.covariance),
            motion_model: chosen.motion_model_ratio,
            wrench_model: chosen.wrench_model_ratio,
        },
    };
    Ok(OriginResult { decision, candidates, per_viewpoint })
}
