use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::spec::{triad, MotionModelKind, ScenarioSpec, WrenchModelKind};
use crate::error::{Error, Result};
use crate::geometry::{change_reference_point, pose_exp, rot_exp, screw_transform, FrameTag, Pose, Screw, Vec3};
use crate::pipeline::{select_vectors_of_interest, Model, MotionVector, ProgressKind, WrenchVector};
use crate::processing::{write_trial, RawTrial, WrenchDecl};

/// Tolerance under which an anchor is considered fixed in a frame [m].
const ANCHOR_CONSISTENT_M: f64 = 1e-6;
/// Minimum RMS direction-spread difference for an orientation expectation [rad].
const ORIENTATION_MARGIN_RAD: f64 = 1.0_f64.to_radians();

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialTruth {
    pub name: String,
    pub placement: Pose,
    pub grasp: Pose,
    /// Sample indices [start, end] of the motion phase.
    pub contact_window: [usize; 2],
}

/// Spread of an anchor point's coordinates over all samples of all trials.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnchorTruth {
    pub frame: FrameTag,
    pub point_m: Vec3,
    pub spread_world_m: f64,
    pub spread_tool_m: f64,
    pub mean_world_m: Vec3,
    pub mean_tool_m: Vec3,
}

/// Magnitude-weighted direction statistics of a vector of interest.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionTruth {
    pub mean_world: Vec3,
    pub mean_tool: Vec3,
    pub rms_angle_world_rad: f64,
    pub rms_angle_tool_rad: f64,
}

impl DirectionTruth {
    pub fn mean_in(&self, vp: FrameTag) -> Vec3 {
        match vp {
            FrameTag::World => self.mean_world,
            FrameTag::Tool => self.mean_tool,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroundTruth {
    pub scenario: String,
    pub motion_model: Model,
    pub wrench_model: Model,
    pub motion_vector: MotionVector,
    pub wrench_vector: WrenchVector,
    pub progress: ProgressKind,
    pub motion_anchor: AnchorTruth,
    pub wrench_anchor: AnchorTruth,
    pub motion_direction: DirectionTruth,
    pub wrench_direction: DirectionTruth,
    /// Viewpoint in which both anchors stay fixed while they move in the
    /// other one; `None` when that is not the case.
    pub expected_origin_viewpoint: Option<FrameTag>,
    pub expected_orientation_viewpoint: Option<FrameTag>,
    pub trials: Vec<TrialTruth>,
}

impl GroundTruth {
    /// Anchor of the motion model in `vp` coordinates (trial/time mean).
    pub fn origin_in(&self, vp: FrameTag) -> Vec3 {
        match vp {
            FrameTag::World => self.motion_anchor.mean_world_m,
            FrameTag::Tool => self.motion_anchor.mean_tool_m,
        }
    }
}

/// Generated demonstrations: noisy recordings, their noise-free
/// counterparts, and the ground truth.
#[derive(Clone, Debug)]
pub struct SynthOutput {
    pub trials: Vec<RawTrial>,
    pub ideal: Vec<RawTrial>,
    pub truth: GroundTruth,
}

fn random_rotation(rng: &mut impl Rng, max_angle: f64) -> Vec3 {
    if max_angle <= 0.0 {
        return Vec3::zeros();
    }
    let axis = loop {
        let v = Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        if v.norm() > 1e-9 {
            break v.normalize();
        }
    };
    axis * rng.random_range(0.0..=max_angle)
}

fn random_box(rng: &mut impl Rng, half: &[f64; 3]) -> Vec3 {
    Vec3::from_fn(|i, _| if half[i] > 0.0 { rng.random_range(-half[i]..=half[i]) } else { 0.0 })
}

/// Sinusoidally wobbling direction with modulated magnitude.
struct Wobble {
    axes: [Vec3; 3],
    magnitude: f64,
    modulation: f64,
    amp: [f64; 2],
    cycles: [f64; 2],
    phase: [f64; 2],
    period: f64,
}

impl Wobble {
    fn eval(&self, u: f64) -> Vec3 {
        let s = u / self.period;
        let d = self.axes[0]
            + self.axes[1] * self.amp[0] * (TAU * self.cycles[0] * s + self.phase[0]).sin()
            + self.axes[2] * self.amp[1] * (TAU * self.cycles[1] * s + self.phase[1]).sin();
        d.normalize() * self.magnitude * (1.0 + self.modulation * (TAU * s).sin())
    }
}

/// Per-trial kinematic and wrench laws, all in anchor-frame coordinates.
struct TrialLaw {
    omega: Wobble,
    velocity: Vec3,
    force: Wobble,
    moment: Vec3,
}

struct Ctx<'a> {
    spec: &'a ScenarioSpec,
    q_motion: Vec3,
    q_wrench: Vec3,
}

impl Ctx<'_> {
    /// Motion twist at the anchor-frame origin: body twist (tool anchor)
    /// or spatial twist in environment coordinates (world anchor).
    fn anchor_twist(&self, law: &TrialLaw, u: f64) -> Screw {
        let w = law.omega.eval(u);
        Screw::twist(w, law.velocity - w.cross(&self.q_motion))
    }

    /// Tool wrench in world coordinates about the world origin.
    fn world_wrench(&self, law: &TrialLaw, u: f64, t_we: &Pose, t_wtl: &Pose) -> Screw {
        let f = law.force.eval(u);
        let at_anchor = Screw::wrench(f, law.moment);
        let local = change_reference_point(&at_anchor, &self.q_wrench, &Vec3::zeros());
        match self.spec.wrench.anchor_frame {
            FrameTag::Tool => screw_transform(t_wtl, &local),
            FrameTag::World => screw_transform(t_we, &local),
        }
    }

    fn world_twist(&self, law: &TrialLaw, u: f64, t_we: &Pose, t_wtl: &Pose) -> Screw {
        let s = self.anchor_twist(law, u);
        match self.spec.motion.anchor_frame {
            FrameTag::Tool => screw_transform(t_wtl, &s),
            FrameTag::World => screw_transform(t_we, &s),
        }
    }
}

/// Accumulates anchor coordinates and vector directions over samples.
#[derive(Default)]
struct Acc {
    pts: [Vec<Vec3>; 2],
    vecs: [Vec<Vec3>; 2],
}

fn spread(pts: &[Vec3]) -> (Vec3, f64) {
    let mean = pts.iter().sum::<Vec3>() / pts.len() as f64;
    (mean, pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max))
}

fn direction_stats(v: &[Vec3]) -> (Vec3, f64) {
    let sum: Vec3 = v.iter().sum();
    let mean = if sum.norm() > 1e-12 { sum.normalize() } else { Vec3::zeros() };
    let (mut num, mut den) = (0.0, 0.0);
    for x in v {
        let n2 = x.norm_squared();
        if n2 > 1e-24 {
            let c = (x.dot(&mean) / n2.sqrt()).clamp(-1.0, 1.0);
            num += n2 * c.acos().powi(2);
            den += n2;
        }
    }
    (mean, if den > 0.0 { (num / den).sqrt() } else { 0.0 })
}

impl Acc {
    fn anchor(&self, frame: FrameTag, point: Vec3) -> AnchorTruth {
        let (mean_world_m, spread_world_m) = spread(&self.pts[0]);
        let (mean_tool_m, spread_tool_m) = spread(&self.pts[1]);
        AnchorTruth { frame, point_m: point, spread_world_m, spread_tool_m, mean_world_m, mean_tool_m }
    }
    fn direction(&self) -> DirectionTruth {
        let (mean_world, rms_angle_world_rad) = direction_stats(&self.vecs[0]);
        let (mean_tool, rms_angle_tool_rad) = direction_stats(&self.vecs[1]);
        DirectionTruth { mean_world, mean_tool, rms_angle_world_rad, rms_angle_tool_rad }
    }
}

fn model_of_motion(k: MotionModelKind) -> Model {
    match k {
        MotionModelKind::PureRotationAboutPoint => Model::Model1,
        MotionModelKind::ConstantPointTranslation => Model::Model2,
    }
}

fn model_of_wrench(k: WrenchModelKind) -> Model {
    match k {
        WrenchModelKind::PureForceThroughPoint => Model::Model1,
        WrenchModelKind::ConstantMomentThroughPoint => Model::Model2,
    }
}

fn expected_origin(m: &AnchorTruth, w: &AnchorTruth) -> Option<FrameTag> {
    let fixed = |s: f64| s < ANCHOR_CONSISTENT_M;
    let tool = fixed(m.spread_tool_m) && fixed(w.spread_tool_m);
    let world = fixed(m.spread_world_m) && fixed(w.spread_world_m);
    match (world, tool) {
        (false, true) => Some(FrameTag::Tool),
        (true, false) => Some(FrameTag::World),
        _ => None,
    }
}

fn expected_orientation(m: &DirectionTruth, w: &DirectionTruth) -> Option<FrameTag> {
    let world = m.rms_angle_world_rad.hypot(w.rms_angle_world_rad);
    let tool = m.rms_angle_tool_rad.hypot(w.rms_angle_tool_rad);
    if world > tool + ORIENTATION_MARGIN_RAD {
        Some(FrameTag::Tool)
    } else if tool > world + ORIENTATION_MARGIN_RAD {
        Some(FrameTag::World)
    } else {
        None
    }
}

/// Generate the demonstrations of a scenario. Deterministic in `spec.seed`.
pub fn generate(spec: &ScenarioSpec) -> Result<SynthOutput> {
    spec.validate()?;
    let (ms, ws) = (&spec.motion, &spec.wrench);
    if ms.anchor_frame != ws.anchor_frame {
        log::warn!("motion and wrench anchors live in different frames; no single viewpoint may explain both");
    }
    let m_axes = triad("motion.axis", ms.axis, ms.secondary_axis)?;
    let w_axes = triad("wrench.direction", ws.direction, ws.secondary_axis)?;
    let ctx = Ctx { spec, q_motion: Vec3::from(ms.anchor_point_m), q_wrench: Vec3::from(ws.anchor_point_m) };

    let n_pre = (spec.padding.pre_s * spec.rate_hz).round() as usize;
    let n_mot = (spec.duration_s * spec.rate_hz).round() as usize;
    let n_post = (spec.padding.post_s * spec.rate_hz).round() as usize;
    let n = n_pre + n_mot + n_post + 1;
    let period = n_mot as f64 / spec.rate_hz;
    let h = 1.0 / (spec.rate_hz * spec.substeps as f64);

    let sel = select_vectors_of_interest(model_of_motion(ms.model), model_of_wrench(ws.model));
    let noise = &spec.noise;
    let normal = |s: f64| Normal::new(0.0, s).expect("validated std dev");

    let mut acc_m = Acc::default();
    let mut acc_w = Acc::default();
    let mut vec_m = Acc::default();
    let mut vec_w = Acc::default();
    let mut trials = Vec::with_capacity(spec.n_trials);
    let mut ideal = Vec::with_capacity(spec.n_trials);
    let mut truths = Vec::with_capacity(spec.n_trials);

    for k in 0..spec.n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(k as u64 + 1);
        let var = &spec.variation;
        let t_we = spec.nominal.placement()
            * Pose::from_parts(
                rot_exp(&random_rotation(&mut rng, var.placement_rotation_max_rad)),
                random_box(&mut rng, &var.placement_translation_m),
            );
        let grasp = Pose::from_parts(
            rot_exp(&random_rotation(&mut rng, var.grasp_rotation_max_rad)),
            random_box(&mut rng, &var.grasp_translation_m),
        );
        let mut t_etl = spec.nominal.grasp() * grasp;
        let mut jitter = || 1.0 + var.magnitude_jitter * rng.random_range(-1.0..=1.0);
        let (jm, jw) = (jitter(), jitter());
        let mut phase = || if var.random_phase { rng.random_range(0.0..TAU) } else { 0.0 };
        let (pm, pw) = ([phase(), phase()], [phase(), phase()]);
        let law = TrialLaw {
            omega: Wobble {
                axes: m_axes,
                magnitude: ms.omega_rad_per_s * jm,
                modulation: ms.omega_modulation,
                amp: ms.axis_wobble_rad,
                cycles: ms.wobble_cycles.map(f64::from),
                phase: pm,
                period,
            },
            velocity: Vec3::from(ms.velocity_m_per_s) * jm,
            force: Wobble {
                axes: w_axes,
                magnitude: ws.force_n * jw,
                modulation: ws.force_modulation,
                amp: ws.direction_wobble_rad,
                cycles: ws.wobble_cycles.map(f64::from),
                phase: pw,
                period,
            },
            moment: Vec3::from(ws.moment_nm) * jw,
        };

        let name = format!("trial_{:02}", k + 1);
        let mut times = Vec::with_capacity(n);
        let mut poses = Vec::with_capacity(n);
        let mut wrenches = Vec::with_capacity(n);
        for i in 0..n {
            if i > n_pre && i <= n_pre + n_mot {
                let u0 = (i - 1 - n_pre) as f64 / spec.rate_hz;
                for s in 0..spec.substeps {
                    let tw = ctx.anchor_twist(&law, u0 + (s as f64 + 0.5) * h);
                    let step = pose_exp(&Screw::displacement(tw.a * h, tw.b * h));
                    t_etl = match ms.anchor_frame {
                        FrameTag::Tool => t_etl * step,
                        FrameTag::World => step * t_etl,
                    };
                }
            }
            let t_wtl = t_we * t_etl;
            let in_motion = i >= n_pre && i <= n_pre + n_mot;
            let u = (i.saturating_sub(n_pre)).min(n_mot) as f64 / spec.rate_hz;
            let wrench = if in_motion { ctx.world_wrench(&law, u, &t_we, &t_wtl) } else { Screw::zero(crate::geometry::ScrewKind::Wrench) };
            if in_motion {
                let inv = t_wtl.inverse();
                let anchor_w = |frame: FrameTag, q: &Vec3| match frame {
                    FrameTag::Tool => t_wtl.transform_point(q),
                    FrameTag::World => t_we.transform_point(q),
                };
                for (acc, frame, q) in [(&mut acc_m, ms.anchor_frame, &ctx.q_motion), (&mut acc_w, ws.anchor_frame, &ctx.q_wrench)] {
                    let pw = anchor_w(frame, q);
                    acc.pts[0].push(pw);
                    acc.pts[1].push(inv.transform_point(&pw));
                }
                let tw_w = ctx.world_twist(&law, u, &t_we, &t_wtl);
                let qm = anchor_w(ms.anchor_frame, &ctx.q_motion);
                let qw = anchor_w(ws.anchor_frame, &ctx.q_wrench);
                let at_m = change_reference_point(&tw_w, &Vec3::zeros(), &qm);
                let at_w = change_reference_point(&wrench, &Vec3::zeros(), &qw);
                let vm = match sel.motion {
                    MotionVector::Omega => at_m.a,
                    MotionVector::V => at_m.b,
                };
                let vw = match sel.wrench {
                    WrenchVector::F => at_w.a,
                    WrenchVector::M => at_w.b,
                };
                vec_m.vecs[0].push(vm);
                vec_m.vecs[1].push(inv.r * vm);
                vec_w.vecs[0].push(vw);
                vec_w.vecs[1].push(inv.r * vw);
            }
            times.push(i as f64 / spec.rate_hz);
            poses.push(t_wtl);
            wrenches.push(wrench);
        }

        let clean = RawTrial { name: name.clone(), times: times.clone(), poses: poses.clone(), wrenches: wrenches.clone() };
        let (np, nr, nf, nm) = (normal(noise.pos_m), normal(noise.rot_rad), normal(noise.force_n), normal(noise.moment_nm));
        let mut g = |d: &Normal<f64>| Vec3::new(d.sample(&mut rng), d.sample(&mut rng), d.sample(&mut rng));
        let mut noisy_poses = Vec::with_capacity(n);
        let mut noisy_wrenches = Vec::with_capacity(n);
        for (pose, w) in poses.iter().zip(&wrenches) {
            let noisy = Pose::from_parts(rot_exp(&g(&nr)) * pose.r, pose.p + g(&np));
            // Sensor noise is added where the sensor sits: tool frame, tool origin.
            let local = screw_transform(&pose.inverse(), w);
            let local = Screw::wrench(local.a + g(&nf), local.b + g(&nm));
            noisy_wrenches.push(screw_transform(&noisy, &local));
            noisy_poses.push(noisy);
        }
        trials.push(RawTrial { name: name.clone(), times, poses: noisy_poses, wrenches: noisy_wrenches });
        ideal.push(clean);
        truths.push(TrialTruth { name, placement: t_we, grasp, contact_window: [n_pre, n_pre + n_mot] });
    }

    let motion_anchor = acc_m.anchor(ms.anchor_frame, ctx.q_motion);
    let wrench_anchor = acc_w.anchor(ws.anchor_frame, ctx.q_wrench);
    let motion_direction = vec_m.direction();
    let wrench_direction = vec_w.direction();
    let expected_origin_viewpoint = expected_origin(&motion_anchor, &wrench_anchor);
    let expected_orientation_viewpoint = expected_orientation(&motion_direction, &wrench_direction);
    if expected_origin_viewpoint.is_none() && (spec.placement_randomized() || spec.grasp_randomized()) {
        log::warn!("scenario {}: anchors do not single out an origin viewpoint", spec.name);
    }
    Ok(SynthOutput {
        trials,
        ideal,
        truth: GroundTruth {
            scenario: spec.name.clone(),
            motion_model: model_of_motion(ms.model),
            wrench_model: model_of_wrench(ws.model),
            motion_vector: sel.motion,
            wrench_vector: sel.wrench,
            progress: sel.progress,
            motion_anchor,
            wrench_anchor,
            motion_direction,
            wrench_direction,
            expected_origin_viewpoint,
            expected_orientation_viewpoint,
            trials: truths,
        },
    })
}

/// Write `trial_XX.csv` files (wrench in tool frame about the tool origin)
/// and `ground_truth.json` into `dir`. Returns the trial file paths.
pub fn write_output(dir: impl AsRef<Path>, out: &SynthOutput) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let decl = WrenchDecl::default();
    let mut paths = Vec::with_capacity(out.trials.len());
    for t in &out.trials {
        let p = dir.join(format!("{}.csv", t.name));
        write_trial(&p, t, &decl)?;
        paths.push(p);
    }
    let gt = dir.join("ground_truth.json");
    let json = serde_json::to_string_pretty(&out.truth).expect("ground truth serializes");
    std::fs::write(&gt, json).map_err(|e| Error::io(&gt, e))?;
    Ok(paths)
}
