use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{ControllerConfig, EnvironmentModel, Overrides, SimScenario};
use super::control::{blend, blend_and_step, environment_wrench, pose_constraint_twist, wrench_constraint_twist};
use crate::error::{Error, Result};
use crate::geometry::{rot_exp, rot_log, rot_to_quat, screw_transform, similarity_transform, FrameTag, Pose, Screw, Vec3};
use crate::pipeline::{assemble_task_frame, ProgressKind};
use crate::processing::TaskModel;

/// Position error beyond which a run is declared diverged [m].
pub const DIVERGENCE_M: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimStep {
    pub t: f64,
    pub xi: f64,
    pub pose_act: Pose,
    pub pose_des: Pose,
    pub twist_act: Screw,
    pub twist_des: Screw,
    pub wrench_act: Screw,
    pub wrench_des: Screw,
}

/// Root-mean-square tracking errors over a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rmse {
    pub rot_deg: f64,
    pub pos_mm: f64,
    pub omega_deg_per_s: f64,
    pub v_mm_per_s: f64,
    pub f_n: f64,
    pub m_nm: f64,
}

impl Rmse {
    pub fn fields(&self) -> [(&'static str, f64); 6] {
        [
            ("rot_deg", self.rot_deg),
            ("pos_mm", self.pos_mm),
            ("omega_deg_per_s", self.omega_deg_per_s),
            ("v_mm_per_s", self.v_mm_per_s),
            ("f_n", self.f_n),
            ("m_nm", self.m_nm),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub rmse: Rmse,
    pub steps: usize,
    pub duration_s: f64,
    pub final_progress: f64,
    /// Reached the end of the task (ξ̄ ≥ 1) before the time cap.
    pub completed: bool,
}

/// Per-step record. Poses are the tool's relative motion seen from the task
/// frame (same convention as the task model's pose reference); twists and
/// wrenches are in the task frame.
#[derive(Clone, Debug, PartialEq)]
pub struct SimLog {
    pub steps: Vec<SimStep>,
    pub summary: SimSummary,
}

#[derive(Default)]
struct Acc {
    sums: [f64; 6],
    n: usize,
}

impl Acc {
    fn add(&mut self, s: &SimStep) {
        let e = [
            rot_log(&(s.pose_act.r.transpose() * s.pose_des.r)).norm().to_degrees(),
            1e3 * (s.pose_act.p - s.pose_des.p).norm(),
            (s.twist_act.a - s.twist_des.a).norm().to_degrees(),
            1e3 * (s.twist_act.b - s.twist_des.b).norm(),
            (s.wrench_act.a - s.wrench_des.a).norm(),
            (s.wrench_act.b - s.wrench_des.b).norm(),
        ];
        for (acc, x) in self.sums.iter_mut().zip(e) {
            *acc += x * x;
        }
        self.n += 1;
    }
    fn rmse(&self) -> Rmse {
        let r = |i: usize| if self.n == 0 { 0.0 } else { (self.sums[i] / self.n as f64).sqrt() };
        Rmse { rot_deg: r(0), pos_mm: r(1), omega_deg_per_s: r(2), v_mm_per_s: r(3), f_n: r(4), m_nm: r(5) }
    }
}

fn progress_rate(kind: ProgressKind, t: &Screw) -> f64 {
    match kind {
        ProgressKind::RotationAngle => t.a.norm(),
        ProgressKind::ArcLength => t.b.norm(),
    }
}

/// Closed-loop execution of `model` against `env`.
///
/// Every control step reads the references at the current normalized
/// progress, forms the pose and wrench constraint twists in the task frame,
/// blends them, and moves the tool. Progress advances with the realized
/// rate (‖ω‖ or ‖v‖ of the commanded twist).
///
/// A task-frame perturbation re-expresses the references in the perturbed
/// frame, so only the controller's frame dependence shows up.
pub fn run_simulation(
    model: &TaskModel,
    env: &EnvironmentModel,
    ctrl: &ControllerConfig,
    initial: &Pose,
    ov: &Overrides,
) -> Result<SimLog> {
    ctrl.validate()?;
    env.validate()?;
    ov.validate()?;
    model.validate()?;
    let tf = &model.task_frame;
    let dt = 1.0 / ctrl.control_rate_hz;
    let nominal_rate = model.xi_max_avg / model.duration_avg_s * ov.speed_scale;
    let max_t = ov.max_duration_s.unwrap_or(3.0 * model.duration_avg_s / ov.speed_scale);
    let off = ov.tf_offset();
    let off_inv = off.inverse();

    let t0 = Pose::from_parts(rot_exp(&Vec3::from(ov.initial_rotation_offset_rad)) * initial.r, initial.p + Vec3::from(ov.initial_position_offset_m));
    let t0_inv = t0.inverse();
    let tf_world = |t: &Pose| -> Result<Pose> { Ok(assemble_task_frame(tf, FrameTag::World, Some(t))? * off) };
    let tf0 = tf_world(&t0)?;

    let mut t = t0;
    let mut xi = 0.0;
    let mut time = 0.0;
    let mut steps = Vec::new();
    let mut acc = Acc::default();
    let mut completed = false;
    while time <= max_t + 1e-12 {
        let r = model.sample(xi);
        let pose_des = similarity_transform(&r.pose, &off);
        let twist_des = screw_transform(&off_inv, &r.twist_per_xi).scale(nominal_rate);
        let wrench_des = screw_transform(&off_inv, &r.wrench).scale(ov.wrench_scale);

        let w_tf = tf_world(&t)?;
        let w_tf_inv = w_tf.inverse();
        let c = t0_inv * w_tf;
        let pose_act = similarity_transform(&(t0_inv * t), &c);
        // Frame whose pose `pose_act` describes, as seen from the task frame.
        let tf_m = w_tf_inv * tf0 * pose_act;
        let m_tf = tf_m.inverse();

        let wrench_act = screw_transform(&w_tf_inv, &environment_wrench(env, &t)).scale(-1.0);
        let t_p = screw_transform(&tf_m, &pose_constraint_twist(&pose_act, &pose_des, &screw_transform(&m_tf, &twist_des), ctrl.k_p_per_s));
        let t_w = wrench_constraint_twist(&wrench_act, &wrench_des, &twist_des, ctrl.k_w_per_s, ctrl.c_f_m_per_n, ctrl.c_m_rad_per_nm);
        let cmd = blend(&t_p, &t_w, ctrl.w_p, ctrl.w_w);

        let step = SimStep { t: time, xi, pose_act, pose_des, twist_act: cmd, twist_des, wrench_act, wrench_des };
        let dp = (pose_act.p - pose_des.p).norm();
        if !(dp <= DIVERGENCE_M) {
            return Err(Error::Divergence { time, dp });
        }
        acc.add(&step);
        steps.push(step);
        if xi >= 1.0 {
            completed = true;
            break;
        }

        // Integrate in world: the blend is linear, so blending the world
        // images of both twists equals mapping the blended one.
        let (next, _) = blend_and_step(&screw_transform(&w_tf, &t_p), &screw_transform(&w_tf, &t_w), ctrl.w_p, ctrl.w_w, dt, &t);
        t = next;
        xi = (xi + dt * progress_rate(tf.progress, &cmd) / model.xi_max_avg).min(1.0);
        time += dt;
    }
    let summary = SimSummary { rmse: acc.rmse(), steps: steps.len(), duration_s: time, final_progress: xi, completed };
    Ok(SimLog { steps, summary })
}

pub fn run_scenario(model: &TaskModel, sc: &SimScenario) -> Result<SimLog> {
    run_simulation(model, &sc.environment, &sc.controller, &sc.initial_pose.pose(), &sc.overrides)
}

fn push6(out: &mut String, s: &Screw) {
    for v in s.to_array() {
        let _ = write!(out, ",{v}");
    }
}

fn push_pose(out: &mut String, p: &Pose) {
    let q = rot_to_quat(&p.r);
    for v in [p.p.x, p.p.y, p.p.z, q[0], q[1], q[2], q[3]] {
        let _ = write!(out, ",{v}");
    }
}

pub const LOG_COLUMNS: &str = "t,xi,\
act_px,act_py,act_pz,act_qw,act_qx,act_qy,act_qz,\
des_px,des_py,des_pz,des_qw,des_qx,des_qy,des_qz,\
act_wx,act_wy,act_wz,act_vx,act_vy,act_vz,\
des_wx,des_wy,des_wz,des_vx,des_vy,des_vz,\
act_fx,act_fy,act_fz,act_mx,act_my,act_mz,\
des_fx,des_fy,des_fz,des_mx,des_my,des_mz";

impl SimLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.steps.len() * 400);
        out.push_str(LOG_COLUMNS);
        out.push('\n');
        for s in &self.steps {
            let _ = write!(out, "{},{}", s.t, s.xi);
            push_pose(&mut out, &s.pose_act);
            push_pose(&mut out, &s.pose_des);
            push6(&mut out, &s.twist_act);
            push6(&mut out, &s.twist_des);
            push6(&mut out, &s.wrench_act);
            push6(&mut out, &s.wrench_des);
            out.push('\n');
        }
        out
    }

    /// Per-signal (ξ̄, desired xyz, actual xyz) tables keyed by file stem.
    pub fn plot_tables(&self) -> Vec<(&'static str, String)> {
        type Get = fn(&SimStep) -> (Vec3, Vec3);
        let signals: [(&str, Get); 6] = [
            ("rotation", |s| (rot_log(&s.pose_des.r), rot_log(&s.pose_act.r))),
            ("position", |s| (s.pose_des.p, s.pose_act.p)),
            ("omega", |s| (s.twist_des.a, s.twist_act.a)),
            ("velocity", |s| (s.twist_des.b, s.twist_act.b)),
            ("force", |s| (s.wrench_des.a, s.wrench_act.a)),
            ("moment", |s| (s.wrench_des.b, s.wrench_act.b)),
        ];
        signals
            .iter()
            .map(|(name, get)| {
                let mut out = String::from("xi,des_x,des_y,des_z,act_x,act_y,act_z\n");
                for s in &self.steps {
                    let (d, a) = get(s);
                    let _ = writeln!(out, "{},{},{},{},{},{},{}", s.xi, d.x, d.y, d.z, a.x, a.y, a.z);
                }
                (*name, out)
            })
            .collect()
    }

    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let put = |name: String, text: String| {
            let p = dir.join(name);
            std::fs::write(&p, text).map_err(|e| Error::io(&p, e))
        };
        put("sim_log.csv".into(), self.to_csv())?;
        for (name, text) in self.plot_tables() {
            put(format!("plot_{name}.csv"), text)?;
        }
        Ok(())
    }
}
