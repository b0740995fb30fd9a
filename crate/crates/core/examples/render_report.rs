//! Derive a task frame from a synthetic bundle and print the candidate
//! report, including the comparison with the ground truth.
//!
//! cargo run --example render_report -- [scenario.toml]

use taskframe::cli::{render_report, ReportFile};
use taskframe::pipeline::{derive_task_frame, PipelineConfig};
use taskframe::processing::{preprocess, PreprocessConfig, Provenance};
use taskframe::synth::{generate, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/trans_moment.toml").into());
    let out = generate(&ScenarioSpec::read(&path)?)?;
    let batch = preprocess(&out.trials, &PreprocessConfig::default())?;
    let report = derive_task_frame(&batch, &PipelineConfig::default())?;
    let file = ReportFile { provenance: Provenance::default(), report, ground_truth: Some(out.truth) };
    print!("{}", render_report(&file));
    Ok(())
}
