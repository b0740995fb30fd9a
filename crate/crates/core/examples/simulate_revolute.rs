//! Derive a task model from synthetic door-opening demonstrations and
//! replay it in closed loop: nominal, slower, with a shifted task-frame
//! origin and with a rotated task frame.
//!
//! cargo run --example simulate_revolute

use taskframe::cli::RunConfig;
use taskframe::processing::derive_task_model;
use taskframe::sim::{run_scenario, Overrides, SimScenario};
use taskframe::synth::{generate, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let spec = ScenarioSpec::read(format!("{data}/revolute.toml"))?;
    let demos = generate(&spec)?;
    let cfg = RunConfig::read(format!("{data}/revolute_run.toml"))?;
    let (_, model) = derive_task_model(&demos.trials, &cfg.derive)?;
    let base = SimScenario::read(format!("{data}/revolute_sim.toml"))?;

    let variants: [(&str, Overrides); 4] = [
        ("nominal", Overrides::default()),
        ("speed x0.25", Overrides { speed_scale: 0.25, ..Default::default() }),
        ("origin +25 mm", Overrides { tf_origin_offset_m: [0.025, 0.0, 0.0], ..Default::default() }),
        ("rotated tf", Overrides { tf_rotation_offset_rad: [0.3, -0.5, 0.2], ..Default::default() }),
    ];
    println!("{:<14} {:>8} {:>8} {:>10} {:>10} {:>8} {:>8}  done", "run", "dR[deg]", "dp[mm]", "dw[deg/s]", "dv[mm/s]", "df[N]", "dm[Nm]");
    for (name, ov) in variants {
        let sc = SimScenario { overrides: ov, ..base.clone() };
        let log = run_scenario(&model, &sc)?;
        let r = log.summary.rmse;
        println!(
            "{name:<14} {:>8.3} {:>8.3} {:>10.3} {:>10.3} {:>8.3} {:>8.4}  {}",
            r.rot_deg, r.pos_mm, r.omega_deg_per_s, r.v_mm_per_s, r.f_n, r.m_nm, log.summary.completed
        );
    }
    Ok(())
}
