//! Generate a scenario, derive its task frame and compare with the truth.
//!
//! cargo run --example derive_task_frame -- [scenario.toml]

use taskframe::geometry::FrameTag;
use taskframe::processing::{preprocess, PreprocessConfig};
use taskframe::pipeline::{derive_task_frame, OriginCandidate, PipelineConfig};
use taskframe::synth::{generate, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/revolute.toml").into());
    let spec = ScenarioSpec::read(&path)?;
    let out = generate(&spec)?;
    let batch = preprocess(&out.trials, &PreprocessConfig::default())?;
    let report = derive_task_frame(&batch, &PipelineConfig::default())?;
    let (tf, gt) = (&report.task_frame, &out.truth);

    println!("candidate                 det            sigma2");
    for c in &report.origin.candidates {
        let label = OriginCandidate::label(c.viewpoint, c.screw, c.model);
        println!("{label:<24}  {:<13.4e}  {:.4e}", c.det, c.asip.sigma_hat_sq);
    }
    let o = &tf.origin;
    println!("\norigin viewpoint {} (expected {:?}), ratio {}", o.viewpoint, gt.expected_origin_viewpoint, o.ratios.viewpoint.ratio);
    println!("models: motion {} wrench {} (expected {} / {})", o.motion_model, o.wrench_model, gt.motion_model, gt.wrench_model);
    let truth = gt.origin_in(o.viewpoint);
    println!("origin {:.4?}  truth {:.4?}  error {:.2} mm", o.origin.as_slice(), truth.as_slice(), 1e3 * (o.origin - truth).norm());

    let r = &tf.orientation;
    println!("\norientation viewpoint {} (expected {:?}), ratio {}", r.viewpoint, gt.expected_orientation_viewpoint, r.ratio.ratio);
    let rot = r.rotation;
    let main = rot.column(0).into_owned();
    let want = gt.motion_direction.mean_in(r.viewpoint);
    println!("main axis {:.4?}  truth {:.4?}  error {:.2} deg", main.as_slice(), want.as_slice(), main.angle(&want).to_degrees());
    println!("vectors of interest: {} / {}, progress {:?}", r.motion_vector.name(), r.wrench_vector.name(), tf.progress);
    if o.viewpoint == FrameTag::Tool {
        println!("(origin expressed in tool coordinates)");
    }
    Ok(())
}
