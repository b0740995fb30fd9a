//! Equivalent stiffness of the blended pose/wrench controller: hold a
//! desired force against a 1-DoF spring and compare the settled offset
//! with w_p·k_p / (w_w·k_w·C_f).
//!
//! cargo run --example controller_stiffness

use taskframe::geometry::{FrameTag, Pose, Screw, Vec3};
use taskframe::pipeline::{Model, TaskFrame};
use taskframe::processing::{uniform_grid, PoseRef, Provenance, TaskModel};
use taskframe::sim::{run_simulation, ControllerConfig, EnvironmentModel, Overrides};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = Pose::from_translation(Vec3::new(0.4, 0.1, 0.3));
    let f_des = 5.0;
    let grid = uniform_grid(11);
    let n = grid.len();
    let model = TaskModel {
        task_frame: TaskFrame::fixed(FrameTag::World, &start, Model::Model2, Model::Model1),
        grid,
        pose_ref: PoseRef { position_m: vec![[0.0; 3]; n], quaternion_wxyz: vec![[1.0, 0.0, 0.0, 0.0]; n] },
        twist_ref: vec![[0.0; 6]; n],
        wrench_ref: vec![Screw::wrench(Vec3::new(f_des, 0.0, 0.0), Vec3::zeros()).to_array(); n],
        xi_max_avg: 1.0,
        duration_avg_s: 1.0,
        provenance: Provenance::default(),
    };
    let k_env = 200.0;
    let env = EnvironmentModel::Spring1D { stiffness_n_per_m: k_env, rest_position_m: [0.4, 0.1, 0.3], axis: [1.0, 0.0, 0.0] };
    println!("{:>5} {:>9} {:>12} {:>12} {:>12}", "w_p", "C_f", "offset [mm]", "k_sim [N/m]", "k_eq [N/m]");
    for (w_p, c_f) in [(0.01, 0.4e-3), (0.1, 1e-3), (0.3, 2e-3)] {
        let ctrl = ControllerConfig { w_p, w_w: 1.0 - w_p, c_f_m_per_n: c_f, ..ControllerConfig::default() };
        let log = run_simulation(&model, &env, &ctrl, &start, &Overrides { max_duration_s: Some(120.0), ..Overrides::default() })?;
        let last = log.steps.last().ok_or("no steps")?;
        let d = last.pose_act.p.x;
        let k_sim = (last.wrench_des.a.x - last.wrench_act.a.x) / d;
        println!("{w_p:>5} {c_f:>9.1e} {:>12.3} {k_sim:>12.2} {:>12.2}", 1e3 * d, ctrl.k_eq());
    }
    Ok(())
}
