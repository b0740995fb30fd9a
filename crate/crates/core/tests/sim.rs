use approx::assert_relative_eq;
use taskframe::geometry::*;
use taskframe::pipeline::{Model, TaskFrame};
use taskframe::processing::{uniform_grid, PoseRef, Provenance, TaskModel};
use taskframe::sim::*;
use taskframe::Error;

fn zero_twist() -> Screw {
    Screw::twist(Vec3::zeros(), Vec3::zeros())
}

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

fn start() -> Pose {
    Pose::from_translation(Vec3::new(0.4, 0.1, 0.3))
}

fn hold(force_x: f64) -> TaskModel {
    let tf = TaskFrame::fixed(FrameTag::World, &start(), Model::Model2, Model::Model1);
    hold_model(tf, Screw::wrench(Vec3::new(force_x, 0.0, 0.0), Vec3::zeros()))
}

fn far_plane() -> EnvironmentModel {
    EnvironmentModel::PointOnPlane { plane_point_m: [0.0, 0.0, -10.0], normal: [0.0, 0.0, 1.0], stiffness_n_per_m: 1e4 }
}

#[test]
fn pose_constraint_examples() {
    let p = Pose::from_parts(rot_exp(&Vec3::new(0.1, -0.2, 0.3)), Vec3::new(0.2, 0.0, 0.1));
    let ff = Screw::twist(Vec3::new(0.01, 0.02, 0.03), Vec3::new(-0.1, 0.2, 0.0));
    let t = pose_constraint_twist(&p, &p, &zero_twist(), 3.0);
    assert_eq!((t.a.norm(), t.b.norm()), (0.0, 0.0));
    let t = pose_constraint_twist(&p, &p, &ff, 3.0);
    assert_eq!((t.a, t.b), (ff.a, ff.b));
    let t = pose_constraint_twist(&Pose::identity(), &Pose::from_translation(Vec3::new(0.01, 0.0, 0.0)), &zero_twist(), 3.0);
    assert_relative_eq!(t.b, Vec3::new(0.03, 0.0, 0.0), epsilon = 1e-15);
    assert_relative_eq!(t.a, Vec3::zeros());
}

#[test]
fn wrench_constraint_examples() {
    let w = Screw::wrench(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.1, 0.2, 0.3));
    let ff = Screw::twist(Vec3::new(0.01, 0.0, 0.0), Vec3::new(0.0, 0.5, 0.0));
    let t = wrench_constraint_twist(&w, &w, &ff, 3.0, 1e-3, 0.1);
    assert_eq!((t.a, t.b), (ff.a, ff.b));
    let zero = Screw::wrench(Vec3::zeros(), Vec3::zeros());
    let df = Screw::wrench(Vec3::new(5.0, 0.0, 0.0), Vec3::zeros());
    let t = wrench_constraint_twist(&zero, &df, &zero_twist(), 3.0, 1e-3, 0.1);
    assert_relative_eq!(t.b, Vec3::new(0.015, 0.0, 0.0), epsilon = 1e-15);
    assert_eq!(t.a, Vec3::zeros());
    let dm = Screw::wrench(Vec3::zeros(), Vec3::new(0.0, 0.0, 0.5));
    let t = wrench_constraint_twist(&zero, &dm, &zero_twist(), 3.0, 1e-3, 0.1);
    assert_relative_eq!(t.a, Vec3::new(0.0, 0.0, 0.15), epsilon = 1e-15);
    assert_eq!(t.b, Vec3::zeros());
}

#[test]
fn blend_examples() {
    let tp = Screw::twist(Vec3::new(0.1, 0.2, 0.3), Vec3::new(0.4, 0.5, 0.6));
    let tw = Screw::twist(Vec3::new(-0.3, 0.0, 0.1), Vec3::new(0.0, 0.1, 0.0));
    let b = blend(&tp, &tp, 0.3, 0.7);
    assert_relative_eq!(b.a, tp.a, epsilon = 1e-15);
    assert_relative_eq!(b.b, tp.b, epsilon = 1e-15);
    let b = blend(&tp, &tw, 1.0, 0.0);
    assert_eq!((b.a, b.b), (tp.a, tp.b));

    let t = Pose::from_parts(rot_exp(&Vec3::new(0.0, 0.2, 0.0)), Vec3::new(1.0, 0.0, 0.0));
    let (next, cmd) = blend_and_step(&tp, &tw, 0.5, 0.5, 0.01, &t);
    let expect = pose_exp(&Screw::displacement(cmd.a * 0.01, cmd.b * 0.01)) * t;
    assert_relative_eq!(next.r, expect.r, epsilon = 1e-15);
    assert_relative_eq!(next.p, expect.p, epsilon = 1e-15);
}

#[test]
fn environment_examples() {
    let spring = EnvironmentModel::Spring1D { stiffness_n_per_m: 1e4, rest_position_m: [0.5, 0.0, 0.0], axis: [1.0, 0.0, 0.0] };
    let w = environment_wrench(&spring, &Pose::from_translation(Vec3::new(0.5, 0.0, 0.0)));
    assert_eq!(w.a, Vec3::zeros());
    // 2 mm compression pushes back with 20 N.
    let w = environment_wrench(&spring, &Pose::from_translation(Vec3::new(0.502, 0.0, 0.0)));
    assert_relative_eq!(w.a, Vec3::new(-20.0, 0.0, 0.0), epsilon = 1e-9);
    // Off-axis displacement is free.
    let w = environment_wrench(&spring, &Pose::from_translation(Vec3::new(0.5, 0.3, -0.1)));
    assert_eq!(w.a.norm(), 0.0);

    let hinge = EnvironmentModel::RevoluteJoint {
        hinge_point_m: [0.5, 0.0, 0.3],
        axis: [0.0, 0.0, 1.0],
        radius_m: 0.3,
        radial_stiffness_n_per_m: 5000.0,
        axial_stiffness_n_per_m: 5000.0,
    };
    for k in 0..12 {
        let th = k as f64 * 0.5;
        let p = Vec3::new(0.5 + 0.3 * th.cos(), 0.3 * th.sin(), 0.3);
        let tool = Pose::from_parts(rot_exp(&Vec3::new(0.0, 0.0, th)), p);
        assert!(environment_wrench(&hinge, &tool).a.norm() < 1e-9);
    }
    let w = environment_wrench(&hinge, &Pose::from_translation(Vec3::new(0.5, 0.31, 0.302)));
    assert_relative_eq!(w.a, Vec3::new(0.0, -50.0, -10.0), epsilon = 1e-9);
    // The moment is that of the force acting at the tool origin.
    assert_relative_eq!(w.b, Vec3::new(0.5, 0.31, 0.302).cross(&w.a), epsilon = 1e-12);
}

#[test]
fn plane_is_one_sided() {
    let plane = EnvironmentModel::PointOnPlane { plane_point_m: [0.0, 0.0, 0.1], normal: [0.0, 0.0, 1.0], stiffness_n_per_m: 2000.0 };
    for z in [0.1, 0.2, 5.0] {
        let w = environment_wrench(&plane, &Pose::from_translation(Vec3::new(0.3, -0.2, z)));
        assert_eq!((w.a.norm(), w.b.norm()), (0.0, 0.0));
    }
    let w = environment_wrench(&plane, &Pose::from_translation(Vec3::new(0.3, -0.2, 0.095)));
    assert_relative_eq!(w.a, Vec3::new(0.0, 0.0, 10.0), epsilon = 1e-9);
}

#[test]
fn pose_tracking_converges_at_k_p() {
    let ctrl = ControllerConfig { w_p: 1.0, w_w: 0.0, ..ControllerConfig::default() };
    // A constant reference a few millimetres and a degree away from the start.
    let mut model = hold(0.0);
    let q = rot_to_quat(&rot_exp(&Vec3::new(0.01, 0.0, -0.02)));
    model.pose_ref.position_m.fill([0.004, -0.002, 0.003]);
    model.pose_ref.quaternion_wxyz.fill(q);
    let ov = Overrides { max_duration_s: Some(1.0), ..Overrides::default() };
    let log = run_simulation(&model, &far_plane(), &ctrl, &start(), &ov).unwrap();
    let err = |s: &SimStep| pose_log(&(s.pose_act.inverse() * s.pose_des)).to_array().iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (&log.steps[50], &log.steps[450]);
    let rate = -(err(b).ln() - err(a).ln()) / (b.t - a.t);
    assert!((rate / ctrl.k_p_per_s - 1.0).abs() < 0.1, "rate {rate}");
}

#[test]
fn force_converges_at_predicted_rate() {
    let k_env = 2500.0;
    let ctrl = ControllerConfig { w_p: 0.0, w_w: 1.0, c_f_m_per_n: 1.0 / k_env, ..ControllerConfig::default() };
    let p = start().p;
    let env = EnvironmentModel::Spring1D { stiffness_n_per_m: k_env, rest_position_m: p.into(), axis: [1.0, 0.0, 0.0] };
    let log = run_simulation(&hold(5.0), &env, &ctrl, &start(), &Overrides { max_duration_s: Some(1.5), ..Overrides::default() }).unwrap();
    let err = |s: &SimStep| (s.wrench_des.a - s.wrench_act.a).norm();
    let (a, b) = (&log.steps[25], &log.steps[500]);
    let rate = -(err(b).ln() - err(a).ln()) / (b.t - a.t);
    let expect = ctrl.w_w * ctrl.k_w_per_s * ctrl.c_f_m_per_n * k_env;
    assert!((rate / expect - 1.0).abs() < 0.1, "rate {rate} vs {expect}");
}

#[test]
fn free_space_offset_matches_equivalent_stiffness() {
    // Free space settles at rate w_p·k_p; keep that fast enough to finish.
    let ctrl = ControllerConfig { w_p: 0.1, w_w: 0.9, ..ControllerConfig::default() };
    let f = 2.0;
    let log = run_simulation(&hold(f), &far_plane(), &ctrl, &start(), &Overrides { max_duration_s: Some(40.0), ..Overrides::default() }).unwrap();
    let x = log.steps.last().unwrap().pose_act.p.x;
    let expect = f / ctrl.k_eq();
    assert!((x / expect - 1.0).abs() < 0.05, "offset {x} vs {expect}");
}

#[test]
fn overrides_reexpress_references() {
    let ctrl = ControllerConfig::default();
    let ov = Overrides { wrench_scale: 2.0, tf_origin_offset_m: [0.0, 0.1, 0.0], max_duration_s: Some(0.01), ..Overrides::default() };
    let log = run_simulation(&hold(5.0), &far_plane(), &ctrl, &start(), &ov).unwrap();
    let w = log.steps[0].wrench_des;
    assert_relative_eq!(w.a, Vec3::new(10.0, 0.0, 0.0), epsilon = 1e-12);
    // The same force seen from an origin 0.1 m along y carries a moment.
    assert_relative_eq!(w.b, Vec3::new(0.0, 0.0, 1.0), epsilon = 1e-12);
}

#[test]
fn simulation_is_deterministic() {
    let env = EnvironmentModel::Spring1D { stiffness_n_per_m: 500.0, rest_position_m: start().p.into(), axis: [1.0, 0.0, 0.0] };
    let ov = Overrides { initial_rotation_offset_rad: [0.05, 0.0, 0.0], max_duration_s: Some(0.5), ..Overrides::default() };
    let run = || run_simulation(&hold(3.0), &env, &ControllerConfig::default(), &start(), &ov).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn log_csv_has_one_row_per_step() {
    let log = run_simulation(&hold(1.0), &far_plane(), &ControllerConfig::default(), &start(), &Overrides { max_duration_s: Some(0.1), ..Overrides::default() }).unwrap();
    let csv = log.to_csv();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert_eq!(header, LOG_COLUMNS);
    let ncol = header.split(',').count();
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), log.steps.len());
    assert!(rows.iter().all(|r| r.split(',').count() == ncol));
}

#[test]
fn stiff_contact_diverges_with_diagnostic() {
    let ctrl = ControllerConfig { c_f_m_per_n: 1e-3, ..ControllerConfig::default() };
    let env = EnvironmentModel::Spring1D { stiffness_n_per_m: 1e7, rest_position_m: start().p.into(), axis: [1.0, 0.0, 0.0] };
    match run_simulation(&hold(5.0), &env, &ctrl, &start(), &Overrides::default()) {
        Err(Error::Divergence { dp, .. }) => assert!(dp > DIVERGENCE_M),
        other => panic!("expected divergence, got {:?}", other.map(|l| l.summary)),
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = ControllerConfig { w_p: 0.5, w_w: 0.6, ..ControllerConfig::default() };
    assert!(matches!(bad.validate(), Err(Error::Invalid { .. })));
    let bad = ControllerConfig { k_p_per_s: 0.0, ..ControllerConfig::default() };
    assert!(matches!(bad.validate(), Err(Error::Invalid { field, .. }) if field == "k_p_per_s"));
    let env = EnvironmentModel::PointOnPlane { plane_point_m: [0.0; 3], normal: [0.0, 0.0, 2.0], stiffness_n_per_m: 1.0 };
    assert!(matches!(env.validate(), Err(Error::Invalid { field, .. }) if field == "environment.normal"));
    let text = "[environment]\ntype = \"Spring1D\"\nstiffness_n_per_m = 1.0\nrest_position_m = [0.0, 0.0, 0.0]\naxis = [1.0, 0.0, 0.0]\nbogus = 1\n[initial_pose]\nposition_m = [0.0, 0.0, 0.0]\n";
    let r = SimScenario::from_toml("s.toml", text);
    // Tagged tables are parsed as a whole, so the line may point at the header.
    assert!(matches!(r, Err(Error::Parse { line: 1..=6, .. })), "{r:?}");
}
