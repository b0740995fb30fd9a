//! Generate every bundled scenario and summarize its ground truth; with an
//! output directory, also write the trial files.
//!
//! cargo run --example synth_scenarios -- [out_dir]

use taskframe::synth::{generate, write_output, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let out_dir = std::env::args().nth(1);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let mut files: Vec<_> = std::fs::read_dir(dir)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|e| e == "toml")).collect();
    files.sort();
    println!("{:<14} {:>7} {:>7} {:>6} {:>6} {:>13}  {:>9} {:>9}", "scenario", "motion", "wrench", "m-vec", "w-vec", "progress", "origin vp", "spread[mm]");
    for f in files {
        let spec = ScenarioSpec::read(&f)?;
        let out = generate(&spec)?;
        let gt = &out.truth;
        let vp = gt.expected_origin_viewpoint.map_or("-".to_string(), |v| v.to_string());
        let a = &gt.motion_anchor;
        println!(
            "{:<14} {:>7} {:>7} {:>6} {:>6} {:>13}  {:>9} {:>4.1}/{:<4.1}",
            gt.scenario,
            gt.motion_model.to_string(),
            gt.wrench_model.to_string(),
            gt.motion_vector.name(),
            gt.wrench_vector.name(),
            format!("{:?}", gt.progress),
            vp,
            1e3 * a.spread_world_m,
            1e3 * a.spread_tool_m
        );
        if let Some(d) = &out_dir {
            write_output(format!("{d}/{}", spec.name), &out)?;
        }
    }
    Ok(())
}
