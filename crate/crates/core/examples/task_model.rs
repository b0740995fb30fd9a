//! Full derivation: task frame, re-expression in it, progress
//! reparameterization and averaging into a task model.
//!
//! cargo run --example task_model -- [scenario.toml] [task_model.json]

use taskframe::cli::RunConfig;
use taskframe::processing::derive_task_model;
use taskframe::synth::{generate, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| format!("{data}/revolute.toml"));
    let spec = ScenarioSpec::read(&path)?;
    let cfg = RunConfig::read(format!("{data}/revolute_run.toml"))?;
    let demos = generate(&spec)?;
    let (report, model) = derive_task_model(&demos.trials, &cfg.derive)?;
    let tf = &report.task_frame;
    println!("task frame: origin {} {:.4?}, orientation {}, progress {:?}", tf.origin.viewpoint, tf.origin.origin.as_slice(), tf.orientation.viewpoint, tf.progress);
    println!("mean progress {:.4} over {:.3} s\n", model.xi_max_avg, model.duration_avg_s);
    println!("{:>5} {:>24} {:>24} {:>24}", "xi", "position [m]", "twist/xi (w)", "force [N]");
    for k in 0..=10 {
        let xb = k as f64 / 10.0;
        let r = model.sample(xb);
        println!("{xb:>5.2} {:>24} {:>24} {:>24}", fmt(&r.pose.p), fmt(&r.twist_per_xi.a), fmt(&r.wrench.a));
    }
    if let Some(out) = args.next() {
        model.write(&out)?;
        println!("\nwrote {out}");
    }
    Ok(())
}

fn fmt(v: &taskframe::geometry::Vec3) -> String {
    format!("({:.3}, {:.3}, {:.3})", v.x, v.y, v.z)
}
