use serde::{Deserialize, Serialize};

use super::origin::OriginDecision;
use super::{det3, significance, MotionVector, Significance, VectorSelection, WrenchVector};
use crate::error::{Error, Result};
use crate::geometry::{change_reference_point, inv_jacobian_coeff, rot_distance, rot_exp, rot_log, skew, FrameTag, Mat3, RotationMatrix, Screw, Vec3};
use crate::processing::TrialBatch;
use crate::statistics::{avof, sorted_eigen, AvofResult};

pub const MAX_AVERAGING_ITERATIONS: usize = 100;

/// Reference magnitudes for the optional orientation weighting. Defaults
/// are the values used for the demonstrations of rigid-tool contact tasks.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightingConfig {
    pub enabled: bool,
    pub omega_ref_rad_per_s: f64,
    pub v_ref_m_per_s: f64,
    pub f_ref_n: f64,
    pub m_ref_nm: f64,
}

impl Default for WeightingConfig {
    fn default() -> Self {
        Self { enabled: false, omega_ref_rad_per_s: 0.05, v_ref_m_per_s: 0.005, f_ref_n: 1.0, m_ref_nm: 0.1 }
    }
}

impl WeightingConfig {
    pub fn validate(&self) -> Result<()> {
        let refs = [
            ("omega_ref_rad_per_s", self.omega_ref_rad_per_s),
            ("v_ref_m_per_s", self.v_ref_m_per_s),
            ("f_ref_n", self.f_ref_n),
            ("m_ref_nm", self.m_ref_nm),
        ];
        for (name, v) in refs {
            if self.enabled && !(v > 0.0) {
                return Err(Error::invalid(name, "reference magnitude must be > 0"));
            }
        }
        Ok(())
    }

    fn motion_ref(&self, v: MotionVector) -> f64 {
        match v {
            MotionVector::Omega => self.omega_ref_rad_per_s,
            MotionVector::V => self.v_ref_m_per_s,
        }
    }

    fn wrench_ref(&self, v: WrenchVector) -> f64 {
        match v {
            WrenchVector::F => self.f_ref_n,
            WrenchVector::M => self.m_ref_nm,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Alignment {
    #[serde(with = "crate::serde_util::mat3")]
    pub r1: RotationMatrix,
    #[serde(with = "crate::serde_util::mat3")]
    pub r2: RotationMatrix,
    /// Signed permutation with r2 = U2 · permutation.
    #[serde(with = "crate::serde_util::mat3")]
    pub permutation: Mat3,
    /// The greedy choice was left-handed and one column was flipped.
    pub handedness_fixed: bool,
}

/// Greedy column matching of `u2` onto `u1`: for each column of u1 take the
/// best-aligned remaining column of u2 (by |cosine|) with its sign.
pub fn align_frames(u1: &RotationMatrix, u2: &RotationMatrix) -> Alignment {
    let delta = u2.transpose() * u1;
    let mut work = delta;
    let mut p = Mat3::zeros();
    let mut rows = [0usize; 3];
    for c in 0..3 {
        let r = (0..3).max_by(|&i, &j| work[(i, c)].abs().total_cmp(&work[(j, c)].abs())).unwrap();
        p[(r, c)] = if work[(r, c)] < 0.0 { -1.0 } else { 1.0 };
        rows[c] = r;
        for k in 0..3 {
            work[(r, k)] = 0.0;
        }
    }
    // The greedy pass can produce a reflection; flip the weakest match.
    let handedness_fixed = p.determinant() * u2.determinant() < 0.0;
    if handedness_fixed {
        let c = (0..3)
            .min_by(|&a, &b| delta[(rows[a], a)].abs().total_cmp(&delta[(rows[b], b)].abs()))
            .unwrap();
        p[(rows[c], c)] = -p[(rows[c], c)];
    }
    let r2 = u2 * p;
    if let Some((best, d)) = best_signed_permutation(u1, u2) {
        let dg = rot_distance(u1, &r2);
        if dg > d + 1e-9 {
            log::debug!("greedy alignment {dg:.4} rad vs exhaustive {d:.4} rad (P = {best:?})");
        }
    }
    Alignment { r1: *u1, r2, permutation: p, handedness_fixed }
}

/// Exhaustive search over the 24 proper signed column permutations of `u2`
/// for the one closest to `u1`. Diagnostic only.
pub fn best_signed_permutation(u1: &RotationMatrix, u2: &RotationMatrix) -> Option<(Mat3, f64)> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best: Option<(Mat3, f64)> = None;
    for perm in PERMS {
        for signs in 0..8u8 {
            let mut p = Mat3::zeros();
            for c in 0..3 {
                p[(perm[c], c)] = if signs & (1 << c) != 0 { -1.0 } else { 1.0 };
            }
            if p.determinant() * u2.determinant() < 0.0 {
                continue;
            }
            let d = rot_distance(u1, &(u2 * p));
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((p, d));
            }
        }
    }
    best
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RotationAverage {
    #[serde(with = "crate::serde_util::mat3")]
    pub rotation: RotationMatrix,
    #[serde(with = "crate::serde_util::mat3")]
    pub covariance: Mat3,
    pub iterations: usize,
}

/// Covariance-weighted average of two rotations (left perturbations in the
/// common expression frame). The combined covariance is (C1⁻¹ + C2⁻¹)⁻¹.
pub fn average_rotations(
    r1: &RotationMatrix,
    r2: &RotationMatrix,
    c1: &Mat3,
    c2: &Mat3,
    tol: f64,
) -> Result<RotationAverage> {
    let i1 = c1.try_inverse().ok_or_else(|| Error::invalid("C1", "covariance is not invertible"))?;
    let i2 = c2.try_inverse().ok_or_else(|| Error::invalid("C2", "covariance is not invertible"))?;
    let c = (i1 + i2).try_inverse().ok_or_else(|| Error::invalid("C1+C2", "information is not invertible"))?;
    // Stationarity: F(R) = C1⁻¹ log(R1 Rᵀ) + C2⁻¹ log(R2 Rᵀ) = 0, solved by
    // Newton steps on left perturbations with a backtracking safeguard.
    let residual = |r: &RotationMatrix| {
        let rt = r.transpose();
        let (p1, p2) = (rot_log(&(r1 * rt)), rot_log(&(r2 * rt)));
        (i1 * p1 + i2 * p2, i1 * right_jacobian_inv(&p1) + i2 * right_jacobian_inv(&p2))
    };
    let merit = |f: &Vec3| (c * f).norm();
    let mut r = *r1;
    let (mut f, mut jac) = residual(&r);
    let mut last = f64::INFINITY;
    for it in 1..=MAX_AVERAGING_ITERATIONS {
        let delta = jac.try_inverse().map_or(c * f, |j| j * f);
        last = delta.norm();
        if last < tol {
            return Ok(RotationAverage { rotation: r, covariance: 0.5 * (c + c.transpose()), iterations: it });
        }
        let m0 = merit(&f);
        let mut step = 1.0;
        loop {
            let next = rot_exp(&(delta * step)) * r;
            let (nf, nj) = residual(&next);
            if merit(&nf) < m0 || step < 1e-6 {
                r = next;
                f = nf;
                jac = nj;
                break;
            }
            step *= 0.5;
        }
    }
    Err(Error::NoConvergence { iterations: MAX_AVERAGING_ITERATIONS, last })
}

// J_r⁻¹(φ) = I + ½[φ] + (1/θ² − (1 + cosθ)/(2θ sinθ)) [φ]²
fn right_jacobian_inv(phi: &Vec3) -> Mat3 {
    let k = skew(phi);
    Mat3::identity() + k * 0.5 + k * k * inv_jacobian_coeff(phi.norm())
}

/// Raise eigenvalues below `rel · trace` so an exactly degenerate AVOF
/// covariance (noise-free data) can still be inverted.
pub fn floor_covariance(c: &Mat3, rel: f64) -> Mat3 {
    let (vals, vecs) = sorted_eigen(c);
    let floor = rel * c.trace().abs().max(f64::MIN_POSITIVE);
    vecs * Mat3::from_diagonal(&vals.map(|v| v.max(floor))) * vecs.transpose()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientationCandidate {
    pub viewpoint: FrameTag,
    /// "omega", "v", "f" or "m".
    pub vector: String,
    pub avof: AvofResult,
    /// Covariance entering the average (after optional weighting).
    #[serde(with = "crate::serde_util::mat3")]
    pub covariance: Mat3,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ViewpointOrientation {
    pub viewpoint: FrameTag,
    pub alignment: Alignment,
    pub average: RotationAverage,
    pub det: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientationDecision {
    pub viewpoint: FrameTag,
    #[serde(with = "crate::serde_util::mat3_row_major")]
    pub rotation: RotationMatrix,
    #[serde(with = "crate::serde_util::mat3")]
    pub covariance: Mat3,
    pub motion_vector: MotionVector,
    pub wrench_vector: WrenchVector,
    pub ratio: Significance,
    pub weighting_applied: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientationResult {
    pub decision: OrientationDecision,
    /// Fixed order: viewpoint (world, tool) × (motion, wrench).
    pub candidates: Vec<OrientationCandidate>,
    pub per_viewpoint: Vec<ViewpointOrientation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrientationConfig {
    #[serde(default)]
    pub weighting: WeightingConfig,
    /// Stop the rotation averaging once the update norm is below this [rad].
    pub averaging_tol_rad: f64,
    /// Relative eigenvalue floor applied to AVOF covariances before averaging.
    pub covariance_floor: f64,
}

impl Default for OrientationConfig {
    fn default() -> Self {
        Self { weighting: WeightingConfig::default(), averaging_tol_rad: 1e-10, covariance_floor: 1e-12 }
    }
}

/// Selected origin expressed in `vp` at every sample of the batch.
fn origin_track(batch: &TrialBatch, origin: &OriginDecision, vp: FrameTag) -> Vec<Vec3> {
    let poses = batch.poses();
    match (origin.viewpoint, vp) {
        (a, b) if a == b => vec![origin.origin; poses.len()],
        (FrameTag::Tool, _) => poses.iter().map(|t| t.transform_point(&origin.origin)).collect(),
        (FrameTag::World, _) => poses.iter().map(|t| t.inverse().transform_point(&origin.origin)).collect(),
    }
}

fn vectors_at(screws: &[Screw], points: &[Vec3], directional: bool) -> Vec<Vec3> {
    if directional {
        return screws.iter().map(|s| s.a).collect();
    }
    screws
        .iter()
        .zip(points)
        .map(|(s, p)| change_reference_point(s, &Vec3::zeros(), p).b)
        .collect()
}

pub fn derive_orientation(
    batch: &TrialBatch,
    origin: &OriginDecision,
    sel: &VectorSelection,
    cfg: &OrientationConfig,
) -> Result<OrientationResult> {
    cfg.weighting.validate()?;
    let mut candidates = Vec::with_capacity(4);
    let mut per_viewpoint = Vec::with_capacity(2);
    for vp in [FrameTag::World, FrameTag::Tool] {
        let points = origin_track(batch, origin, vp);
        let mv = vectors_at(&batch.twists(vp), &points, sel.motion == MotionVector::Omega);
        let wv = vectors_at(&batch.wrenches(vp), &points, sel.wrench == WrenchVector::F);
        let tag = |v: &str| format!("{vp}/{v}");
        let am = avof(&mv).map_err(|e| e.with_candidate(tag(sel.motion.name())))?;
        let aw = avof(&wv).map_err(|e| e.with_candidate(tag(sel.wrench.name())))?;
        let (cm, cw) = if cfg.weighting.enabled {
            (
                am.weighted_covariance(cfg.weighting.motion_ref(sel.motion)),
                aw.weighted_covariance(cfg.weighting.wrench_ref(sel.wrench)),
            )
        } else {
            (am.covariance, aw.covariance)
        };
        let alignment = align_frames(&am.frame, &aw.frame);
        let average = average_rotations(
            &alignment.r1,
            &alignment.r2,
            &floor_covariance(&cm, cfg.covariance_floor),
            &floor_covariance(&cw, cfg.covariance_floor),
            cfg.averaging_tol_rad,
        )
        .map_err(|e| e.with_candidate(format!("{vp}/average")))?;
        let det = det3(&average.covariance);
        candidates.push(OrientationCandidate { viewpoint: vp, vector: sel.motion.name().into(), avof: am, covariance: cm });
        candidates.push(OrientationCandidate { viewpoint: vp, vector: sel.wrench.name().into(), avof: aw, covariance: cw });
        per_viewpoint.push(ViewpointOrientation { viewpoint: vp, alignment, average, det });
    }
    let (world, tool) = (&per_viewpoint[0], &per_viewpoint[1]);
    let chosen = if tool.det <= world.det { tool } else { world };
    let decision = OrientationDecision {
        viewpoint: chosen.viewpoint,
        rotation: chosen.average.rotation,
        covariance: chosen.average.covariance,
        motion_vector: sel.motion,
        wrench_vector: sel.wrench,
        ratio: significance(&world.average.covariance, &tool.average.covariance),
        weighting_applied: cfg.weighting.enabled,
    };
    Ok(OrientationResult { decision, candidates, per_viewpoint })
}
