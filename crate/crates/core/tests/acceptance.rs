//! Acceptance criteria A1–A8. Runs as a plain binary (no libtest harness)
//! so it prints exactly one PASS/FAIL line per criterion, in order, and
//! exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use taskframe::cli::RunConfig;
use taskframe::geometry::{
    interpolate, pose_exp, pose_log, rot_exp, rot_log, screw_transform, FrameTag, Mat3, Pose,
    Screw, Vec3,
};
use taskframe::pipeline::{average_rotations, derive_task_frame, Model, PipelineConfig, TaskFrame, TaskFrameReport};
use taskframe::processing::{
    derive_task_model, express_in_task_frame, preprocess, preprocess_trial, reparameterize, uniform_grid,
    PoseRef, PreprocessConfig, Provenance, RawTrial, TaskModel,
};
use taskframe::sim::{run_scenario, run_simulation, ControllerConfig, EnvironmentModel, Overrides, Rmse, SimScenario};
use taskframe::statistics::{asip, avof, avof_asip_consistency};
use taskframe::synth::{generate, ScenarioSpec};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
const EXAMPLES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn vec3(rng: &mut impl Rng, scale: f64) -> Vec3 {
    Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)) * scale
}

/// Random rotation vector with angle uniform in [0, max).
fn rotvec(rng: &mut impl Rng, max: f64) -> Vec3 {
    let axis = loop {
        let v = vec3(rng, 1.0);
        if v.norm() > 1e-6 {
            break v.normalize();
        }
    };
    axis * rng.random_range(0.0..max)
}

fn random_pose(rng: &mut impl Rng) -> Pose {
    Pose::from_parts(rot_exp(&rotvec(rng, 3.1)), vec3(rng, 1.0))
}

fn scenario(dir: &str, name: &str) -> ScenarioSpec {
    ScenarioSpec::read(format!("{dir}/{name}.toml")).expect("scenario parses")
}

fn pipeline(raws: &[RawTrial]) -> TaskFrameReport {
    let batch = preprocess(raws, &PreprocessConfig::default()).expect("preprocess");
    derive_task_frame(&batch, &PipelineConfig::default()).expect("pipeline")
}

/// Angle between two lines [deg].
fn line_angle_deg(a: &Vec3, b: &Vec3) -> f64 {
    (a.dot(b) / (a.norm() * b.norm())).abs().min(1.0).acos().to_degrees()
}

// A1: exp/log round trips, screw-transform composition and pitch invariance.
fn a1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut so3, mut se3, mut comp, mut pitch) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        // Keep away from θ = π, where log is not unique.
        let w = rotvec(&mut rng, std::f64::consts::PI - 1e-3);
        so3 = so3.max((rot_log(&rot_exp(&w)) - w).norm());
        let r = rot_exp(&w);
        so3 = so3.max((rot_exp(&rot_log(&r)) - r).amax());

        let d = Screw::displacement(w, vec3(&mut rng, 1.0));
        let back = pose_log(&pose_exp(&d));
        se3 = se3.max((back.a - d.a).norm().max((back.b - d.b).norm()));
        let t = random_pose(&mut rng);
        se3 = se3.max((pose_exp(&pose_log(&t)).to_matrix() - t.to_matrix()).amax());

        let (tab, tbc) = (random_pose(&mut rng), random_pose(&mut rng));
        let s = Screw::twist(vec3(&mut rng, 1.0), vec3(&mut rng, 1.0));
        let two = screw_transform(&tab, &screw_transform(&tbc, &s));
        let one = screw_transform(&(tab * tbc), &s);
        comp = comp.max((two.a - one.a).norm().max((two.b - one.b).norm()));
        let p0 = s.pitch().expect("nonzero a");
        let p1 = screw_transform(&tab, &s).pitch().expect("nonzero a");
        pitch = pitch.max((p1 - p0).abs());
    }
    let pass = so3 < 1e-9 && se3 < 1e-9 && comp < 1e-10 && pitch < 1e-10;
    outcome(pass, format!("10^4 draws: SO(3) {so3:.1e}, SE(3) {se3:.1e} (tol 1e-9); composition {comp:.1e}, pitch {pitch:.1e} (tol 1e-10)"))
}

/// Objective minimized by ASIP, evaluated directly.
fn asip_objective(screws: &[Screw], p: &Vec3, eps: f64, p0: &Vec3) -> f64 {
    screws.iter().map(|s| (s.a.cross(p) + s.b).norm_squared()).sum::<f64>() / screws.len() as f64 + eps * (p - p0).norm_squared()
}

/// Brute-force minimizer: coarse grid, then a compass search that halves
/// its step down to 1e-12 m.
fn brute_force_point(screws: &[Screw], eps: f64, p0: &Vec3) -> Vec3 {
    let f = |p: &Vec3| asip_objective(screws, p, eps, p0);
    let mut best = Vec3::zeros();
    let mut fb = f(&best);
    let n = 20;
    for i in -n..=n {
        for j in -n..=n {
            for k in -n..=n {
                let p = Vec3::new(i as f64, j as f64, k as f64) * 0.05;
                let fp = f(&p);
                if fp < fb {
                    best = p;
                    fb = fp;
                }
            }
        }
    }
    let mut step = 0.05;
    let dirs: Vec<Vec3> = (0..3)
        .flat_map(|c| [1.0, -1.0].map(|s| Vec3::from_fn(|r, _| if r == c { s } else { 0.0 })))
        .chain([Vec3::new(1.0, 1.0, 1.0), Vec3::new(-1.0, -1.0, -1.0), Vec3::new(1.0, -1.0, 0.0), Vec3::new(-1.0, 1.0, 0.0)])
        .collect();
    while step > 1e-12 {
        let mut moved = false;
        for d in &dirs {
            let p = best + d * step;
            let fp = f(&p);
            if fp < fb {
                best = p;
                fb = fp;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

// A2: ASIP against a brute-force minimizer; AVOF against a direct SVD;
// the covariance relation between the two.
fn a2() -> Outcome {
    let mut worst_pt = 0.0f64;
    let mut worst_axis = 0.0f64;
    let mut worst_rel = 0.0f64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let anchor = vec3(&mut rng, 0.3);
        let eps = if seed % 2 == 0 { 0.0 } else { 1e-3 };
        let p0 = vec3(&mut rng, 0.1);
        let main = vec3(&mut rng, 1.0).normalize();
        let screws: Vec<Screw> = (0..200)
            .map(|_| {
                let a = main * rng.random_range(0.5..1.5) + vec3(&mut rng, 0.3);
                Screw::twist(a, anchor.cross(&a) + vec3(&mut rng, 0.01))
            })
            .collect();
        let est = asip(&screws, eps, &p0).expect("asip");
        let bf = brute_force_point(&screws, eps, &p0);
        worst_pt = worst_pt.max((est.point - bf).norm());

        let vectors: Vec<Vec3> = screws.iter().map(|s| s.a).collect();
        let av = avof(&vectors).expect("avof");
        let m = vectors.iter().fold(Mat3::zeros(), |acc, v| acc + v * v.transpose()) / vectors.len() as f64;
        let svd = m.svd(true, false);
        let k = svd.singular_values.imax();
        let u = svd.u.expect("u").column(k).into_owned();
        worst_axis = worst_axis.max(line_angle_deg(&u, &av.frame.column(0).into_owned()).to_radians());

        let rel = avof_asip_consistency(&vectors, &screws).expect("consistency").relative_residual;
        worst_rel = worst_rel.max(rel);
    }
    let pass = worst_pt < 1e-6 && worst_axis < 1e-9 && worst_rel < 1e-8;
    outcome(
        pass,
        format!("20 scenarios: ASIP vs brute force {worst_pt:.1e} m (tol 1e-6); AVOF axis vs SVD {worst_axis:.1e} rad; relation residual {worst_rel:.1e} (tol 1e-8)"),
    )
}

// A3: decisions, vectors of interest and anchor recovery on the four
// motion × wrench composites.
fn a3() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for name in ["rot_force", "rot_moment", "trans_force", "trans_moment"] {
        let base = scenario(DATA, name);
        let mut ok = 0;
        for seed in 0..100 {
            let spec = ScenarioSpec { seed, ..base.clone() };
            let out = generate(&spec).expect("generate");
            let gt = &out.truth;
            let batch = preprocess(&out.trials, &PreprocessConfig::default()).expect("preprocess");
            let Ok(r) = derive_task_frame(&batch, &PipelineConfig::default()) else { continue };
            let tf = &r.task_frame;
            let axis = tf.orientation.rotation.column(0).into_owned();
            let good = tf.origin.motion_model == gt.motion_model
                && tf.origin.wrench_model == gt.wrench_model
                && tf.orientation.motion_vector == gt.motion_vector
                && tf.orientation.wrench_vector == gt.wrench_vector
                && tf.progress == gt.progress
                && Some(tf.origin.viewpoint) == gt.expected_origin_viewpoint
                && (tf.origin.origin - gt.origin_in(tf.origin.viewpoint)).norm() < 5e-3
                && line_angle_deg(&axis, &gt.motion_direction.mean_in(tf.orientation.viewpoint)) < 2.0;
            ok += good as usize;
        }
        pass &= ok >= 95;
        details.push(format!("{name} {ok}/100"));
    }
    outcome(pass, format!("{} (need >= 95 each)", details.join(", ")))
}

// A4: what varies across trials decides the viewpoint.
fn a4() -> Outcome {
    let hinge = scenario(DATA, "hinge_world");
    let mut placed = hinge.clone();
    placed.variation.grasp_rotation_max_rad = 0.0;
    placed.variation.grasp_translation_m = [0.0; 3];
    placed.variation.placement_rotation_max_rad = 0.6;
    placed.variation.placement_translation_m = [0.2, 0.2, 0.1];
    let (mut tool, mut world) = (0, 0);
    for seed in 0..20 {
        let r = pipeline(&generate(&ScenarioSpec { seed, ..placed.clone() }).expect("generate").trials);
        let o = &r.task_frame.origin;
        tool += (o.viewpoint == FrameTag::Tool && o.ratios.viewpoint.ratio > 3.0) as usize;
        let r = pipeline(&generate(&ScenarioSpec { seed, ..hinge.clone() }).expect("generate").trials);
        world += (r.task_frame.origin.viewpoint == FrameTag::World) as usize;
    }
    outcome(
        tool >= 18 && world >= 18,
        format!("placement randomized -> tool with ratio > 3 in {tool}/20; grasp randomized -> world in {world}/20 (need >= 18)"),
    )
}

// A5: rotation averaging against the geodesic midpoint and the combined
// covariance against Monte Carlo.
fn a5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mid_err = 0.0f64;
    for _ in 0..200 {
        let r1 = rot_exp(&rotvec(&mut rng, 3.1));
        let r2 = rot_exp(&rotvec(&mut rng, 2.5)) * r1;
        let c = Mat3::identity() * rng.random_range(1e-4..1e-2);
        let avg = average_rotations(&r1, &r2, &c, &c, 1e-13).expect("average");
        let mid = rot_exp(&(rot_log(&(r2 * r1.transpose())) * 0.5)) * r1;
        mid_err = mid_err.max((avg.rotation - mid).amax());
    }

    let spd = |rng: &mut ChaCha8Rng| {
        let l = Mat3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        (l * l.transpose() + Mat3::identity() * 0.5) * 1e-4
    };
    let (c1, c2) = (spd(&mut rng), spd(&mut rng));
    let truth = rot_exp(&Vec3::new(0.3, -1.2, 0.8));
    let chol = |c: &Mat3| c.cholesky().expect("spd").l();
    let (l1, l2) = (chol(&c1), chol(&c2));
    let n = 10_000;
    let mut samples = Vec::with_capacity(n);
    let mut predicted = Mat3::zeros();
    for _ in 0..n {
        let r1 = rot_exp(&(l1 * vec3(&mut rng, 1.0))) * truth;
        let r2 = rot_exp(&(l2 * vec3(&mut rng, 1.0))) * truth;
        let avg = average_rotations(&r1, &r2, &c1, &c2, 1e-12).expect("average");
        predicted = avg.covariance;
        samples.push(rot_log(&(avg.rotation * truth.transpose())));
    }
    let mean: Vec3 = samples.iter().sum::<Vec3>() / n as f64;
    let sample_cov = samples.iter().fold(Mat3::zeros(), |acc, e| acc + (e - mean) * (e - mean).transpose()) / (n - 1) as f64;
    let rel = (sample_cov - predicted).norm() / predicted.norm();
    outcome(
        mid_err < 1e-10 && rel < 0.10,
        format!("midpoint error {mid_err:.1e} (tol 1e-10); Monte-Carlo covariance deviation {:.1}% (tol 10%)", 100.0 * rel),
    )
}

/// Stationary task model with a constant desired wrench.
fn hold_model(tf: TaskFrame, wrench: Screw) -> TaskModel {
    let grid = uniform_grid(11);
    let n = grid.len();
    TaskModel {
        task_frame: tf,
        grid,
        pose_ref: PoseRef { position_m: vec![[0.0; 3]; n], quaternion_wxyz: vec![[1.0, 0.0, 0.0, 0.0]; n] },
        twist_ref: vec![[0.0; 6]; n],
        wrench_ref: vec![wrench.to_array(); n],
        xi_max_avg: 1.0,
        duration_avg_s: 1.0,
        provenance: Provenance::default(),
    }
}

// A6: equivalent stiffness of the blended controller on a 1-DoF spring.
fn a6() -> Outcome {
    let start = Pose::from_translation(Vec3::new(0.4, 0.1, 0.3));
    let tf = TaskFrame::fixed(FrameTag::World, &start, Model::Model2, Model::Model1);
    let f_des = 5.0;
    let model = hold_model(tf, Screw::wrench(Vec3::new(f_des, 0.0, 0.0), Vec3::zeros()));
    let k_env = 200.0;
    let env = EnvironmentModel::Spring1D { stiffness_n_per_m: k_env, rest_position_m: [0.4, 0.1, 0.3], axis: [1.0, 0.0, 0.0] };
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (w_p, c_f) in [(0.01, 0.4e-3), (0.1, 1e-3), (0.3, 2e-3)] {
        let ctrl = ControllerConfig { w_p, w_w: 1.0 - w_p, c_f_m_per_n: c_f, ..ControllerConfig::default() };
        let ov = Overrides { max_duration_s: Some(120.0), ..Overrides::default() };
        let log = run_simulation(&model, &env, &ctrl, &start, &ov).expect("simulation");
        let last = log.steps.last().expect("steps");
        let d = last.pose_act.p.x;
        let df = last.wrench_des.a.x - last.wrench_act.a.x;
        let k_sim = df / d;
        let rel = (k_sim / ctrl.k_eq() - 1.0).abs();
        worst = worst.max(rel);
        rows.push(format!("k_eq {:.1} vs {:.1} N/m", k_sim, ctrl.k_eq()));
    }
    outcome(worst < 0.05, format!("{}; worst deviation {:.2}% (tol 5%)", rows.join(", "), 100.0 * worst))
}

struct A7 {
    nominal: Rmse,
    slow: Rmse,
    shifted: Rmse,
    rotated: Rmse,
    elapsed: Duration,
}

fn a7_runs() -> A7 {
    let t0 = Instant::now();
    let spec = scenario(EXAMPLES, "revolute");
    let cfg = RunConfig::read(format!("{EXAMPLES}/revolute_run.toml")).expect("run config");
    let demos = generate(&spec).expect("generate");
    let (_, model) = derive_task_model(&demos.trials, &cfg.derive).expect("derive");
    let base = SimScenario::read(format!("{EXAMPLES}/revolute_sim.toml")).expect("sim scenario");
    let run = |ov: Overrides| run_scenario(&model, &SimScenario { overrides: ov, ..base.clone() }).expect("simulation").summary.rmse;
    A7 {
        nominal: run(Overrides::default()),
        slow: run(Overrides { speed_scale: 0.25, ..Overrides::default() }),
        shifted: run(Overrides { tf_origin_offset_m: [0.025, 0.0, 0.0], ..Overrides::default() }),
        rotated: run(Overrides { tf_rotation_offset_rad: [0.3, -0.5, 0.2], ..Overrides::default() }),
        elapsed: t0.elapsed(),
    }
}

fn a7_speed(r: &A7) -> Outcome {
    let worse: Vec<&str> = r.nominal.fields().iter().zip(r.slow.fields()).filter(|(n, s)| s.1 > n.1).map(|(n, _)| n.0).collect();
    let ratios: Vec<String> = r.nominal.fields().iter().zip(r.slow.fields()).map(|(n, s)| format!("{} {:.3}", n.0, s.1 / n.1)).collect();
    outcome(worse.is_empty(), format!("speed x0.25 / nominal: {}; worse: [{}]", ratios.join(", "), worse.join(", ")))
}

fn a7_origin(r: &A7) -> Outcome {
    let ratio = r.shifted.f_n / r.nominal.f_n;
    outcome(ratio >= 2.0, format!("25 mm origin shift: df {:.3} N vs {:.3} N nominal, ratio {ratio:.3} (need >= 2)", r.shifted.f_n, r.nominal.f_n))
}

fn a7_rotation(r: &A7) -> Outcome {
    let worst = r.nominal.fields().iter().zip(r.rotated.fields()).map(|(n, s)| (s.1 / n.1 - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        worst <= 0.10 && r.elapsed < Duration::from_secs(60),
        format!("rotated task frame: worst RMSE change {:.2}% (tol 10%); four runs in {:.1} s", 100.0 * worst, r.elapsed.as_secs_f64()),
    )
}

fn transform_trial(raw: &RawTrial, g: &Pose) -> RawTrial {
    RawTrial {
        name: raw.name.clone(),
        times: raw.times.clone(),
        poses: raw.poses.iter().map(|p| *g * *p).collect(),
        wrenches: raw.wrenches.iter().map(|w| screw_transform(g, w)).collect(),
    }
}

fn same_decisions(a: &TaskFrameReport, b: &TaskFrameReport) -> bool {
    let (x, y) = (&a.task_frame, &b.task_frame);
    x.origin.viewpoint == y.origin.viewpoint
        && x.origin.motion_model == y.origin.motion_model
        && x.origin.wrench_model == y.origin.wrench_model
        && x.orientation.viewpoint == y.orientation.viewpoint
        && x.progress == y.progress
}

/// Largest difference between the numeric outputs of two reports.
fn report_diff(a: &TaskFrameReport, b: &TaskFrameReport) -> f64 {
    let (x, y) = (&a.task_frame, &b.task_frame);
    let mut d = (x.origin.origin - y.origin.origin).amax();
    d = d.max((x.orientation.rotation - y.orientation.rotation).amax());
    for (p, q) in a.origin.candidates.iter().zip(&b.origin.candidates) {
        d = d.max((p.asip.point - q.asip.point).amax());
    }
    d
}

/// Resample `hi` (dense) at times `ts`, read through the time map `warp`.
fn resample(hi: &RawTrial, ts: &[f64], warp: impl Fn(f64) -> f64) -> RawTrial {
    let dt = hi.times[1] - hi.times[0];
    let last = hi.times.len() - 1;
    let mut out = RawTrial { name: hi.name.clone(), times: ts.to_vec(), poses: vec![], wrenches: vec![] };
    for &t in ts {
        let u = warp(t) / dt;
        let k = (u.floor() as usize).min(last - 1);
        let s = (u - k as f64).clamp(0.0, 1.0);
        out.poses.push(interpolate(&hi.poses[k], &hi.poses[k + 1], s));
        let w = hi.wrenches[k].scale(1.0 - s).try_add(&hi.wrenches[k + 1].scale(s)).expect("wrenches");
        out.wrenches.push(w);
    }
    out
}

// A8: invariances of the full pipeline.
fn a8() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    // World re-placement.
    let g = Pose::from_parts(rot_exp(&Vec3::new(0.4, -0.9, 1.3)), Vec3::new(1.5, -0.7, 0.2));
    let mut replace_err = 0.0f64;
    for name in ["rot_force", "hinge_world"] {
        let raws = generate(&scenario(DATA, name)).expect("generate").trials;
        let moved: Vec<RawTrial> = raws.iter().map(|r| transform_trial(r, &g)).collect();
        let (a, b) = (pipeline(&raws), pipeline(&moved));
        pass &= same_decisions(&a, &b);
        let (x, y) = (&a.task_frame, &b.task_frame);
        let origin = match x.origin.viewpoint {
            FrameTag::Tool => x.origin.origin,
            FrameTag::World => g.transform_point(&x.origin.origin),
        };
        let rot = match x.orientation.viewpoint {
            FrameTag::Tool => x.orientation.rotation,
            FrameTag::World => g.r * x.orientation.rotation,
        };
        replace_err = replace_err.max((origin - y.origin.origin).amax()).max((rot - y.orientation.rotation).amax());
    }
    pass &= replace_err < 1e-9;
    notes.push(format!("re-placement {replace_err:.1e} (tol 1e-9)"));

    // Trial permutation.
    let raws = generate(&scenario(DATA, "trans_moment")).expect("generate").trials;
    let mut rev = raws.clone();
    rev.reverse();
    let (a, b) = (pipeline(&raws), pipeline(&rev));
    let perm = report_diff(&a, &b);
    pass &= same_decisions(&a, &b) && perm < 1e-12;
    notes.push(format!("permutation {perm:.1e} (tol 1e-12)"));

    // Wrench scaling with weighting off.
    let mut scale_ok = true;
    for name in ["rot_force", "rot_moment", "trans_force", "trans_moment", "hinge_world"] {
        let raws = generate(&scenario(DATA, name)).expect("generate").trials;
        let scaled: Vec<RawTrial> =
            raws.iter().map(|r| RawTrial { wrenches: r.wrenches.iter().map(|w| w.scale(7.5)).collect(), ..r.clone() }).collect();
        scale_ok &= same_decisions(&pipeline(&raws), &pipeline(&scaled));
    }
    pass &= scale_ok;
    notes.push(format!("wrench scaling decisions {}", if scale_ok { "unchanged" } else { "CHANGED" }));

    // Time warp t -> t²/T of a noise-free trial. The trial is placed on
    // [T/2, T] so the warp keeps a finite slope; no padding, so the motion
    // has no velocity jump for the two samplings to resolve differently.
    let mut spec = scenario(DATA, "rot_force");
    spec.rate_hz = 2000.0;
    let hi = &generate(&spec).expect("generate").ideal[0];
    let d = *hi.times.last().expect("samples");
    let big_t = 2.0 * d;
    let axis = |start: f64, len: f64| -> Vec<f64> { (0..=(len * 100.0).round() as usize).map(|i| start + (i as f64 / 100.0).min(len)).collect() };
    let plain = resample(hi, &axis(d, d), |t| t - d);
    let warped = resample(hi, &axis(0.5 * d, 1.5 * d), |t| (t * big_t).sqrt() - d);
    let cfg = PreprocessConfig { pose_sigma_s: 0.0, wrench_sigma_s: 0.0, segment: false, ..PreprocessConfig::default() };
    let tf = TaskFrame::fixed(FrameTag::Tool, &Pose::from_translation(Vec3::new(0.05, -0.25, 0.1)), Model::Model1, Model::Model1);
    let xi_signals = |raw: &RawTrial| {
        let t = preprocess_trial(raw, &cfg).expect("preprocess");
        reparameterize(&express_in_task_frame(&t, &tf).expect("express"), tf.progress, 100).expect("reparameterize")
    };
    let (p, w) = (xi_signals(&plain), xi_signals(&warped));
    let mut warp_err = 0.0f64;
    for j in 0..p.grid.len() {
        warp_err = warp_err
            .max((p.poses[j].p - w.poses[j].p).amax())
            .max((p.poses[j].r - w.poses[j].r).amax())
            .max((p.twists[j].a - w.twists[j].a).amax())
            .max((p.twists[j].b - w.twists[j].b).amax())
            .max((p.wrenches[j].a - w.wrenches[j].a).amax() / spec.wrench.force_n)
            .max((p.wrenches[j].b - w.wrenches[j].b).amax() / spec.wrench.force_n);
    }
    pass &= warp_err < 2e-3;
    notes.push(format!("time warp {warp_err:.1e} (tol 2e-3)"));

    outcome(pass, notes.join("; "))
}

fn main() {
    // Allow `cargo test -- <filter>` style invocations to pass harmlessly.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |id: &str| filter.is_empty() || filter.iter().any(|f| id.to_lowercase().contains(&f.to_lowercase()));

    type Check = (&'static str, f64, fn() -> Outcome);
    let checks: [Check; 6] = [("A1", 10.0, a1), ("A2", 30.0, a2), ("A3", 120.0, a3), ("A4", f64::INFINITY, a4), ("A5", 60.0, a5), ("A6", f64::INFINITY, a6)];
    let mut failed = 0;
    let mut report = |id: &str, o: Outcome, secs: f64| {
        println!("{id:<7} {}  {}  [{secs:.1} s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.pass as usize;
    };
    for (id, limit, f) in checks {
        if !wanted(id) {
            continue;
        }
        let t = Instant::now();
        let mut o = f();
        let secs = t.elapsed().as_secs_f64();
        if secs > limit {
            o.pass = false;
            o.detail.push_str(&format!("; runtime {secs:.1} s exceeds {limit} s"));
        }
        report(id, o, secs);
    }
    if wanted("A7") {
        let r = a7_runs();
        let secs = r.elapsed.as_secs_f64();
        report("A7(i)", a7_speed(&r), secs);
        report("A7(ii)", a7_origin(&r), secs);
        report("A7(iii)", a7_rotation(&r), secs);
    }
    if wanted("A8") {
        let t = Instant::now();
        let mut o = a8();
        let secs = t.elapsed().as_secs_f64();
        if secs > 60.0 {
            o.pass = false;
            o.detail.push_str(&format!("; runtime {secs:.1} s exceeds 60 s"));
        }
        report("A8", o, secs);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
