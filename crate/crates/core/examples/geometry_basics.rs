//! Rigid-body basics: exponential coordinates, screws seen from other
//! frames and points, and twists differentiated from a sampled helix.
//!
//! cargo run --example geometry_basics

use taskframe::geometry::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = rot_exp(&Vec3::new(0.0, 0.0, std::f64::consts::FRAC_PI_2));
    println!("Rz(90°) =\n{r:.3}");
    println!("log back: {:.6?}", rot_log(&r).as_slice());

    // A twist rotating about the z-axis through (1, 0, 0).
    let c = Vec3::new(1.0, 0.0, 0.0);
    let w = Vec3::new(0.0, 0.0, 0.5);
    let t = Screw::twist(w, -w.cross(&c));
    println!("\ntwist at world origin: ω {:?} v {:?}, pitch {:?}", t.a.as_slice(), t.b.as_slice(), t.pitch());
    let at_c = change_reference_point(&t, &Vec3::zeros(), &c);
    println!("same twist referred to its axis point: v = {:?}", at_c.b.as_slice());
    let frame = Pose::from_parts(r, Vec3::new(0.2, 0.0, 0.0));
    let local = screw_transform(&frame.inverse(), &t);
    println!("expressed in a frame rotated 90° about z: ω {:.3?} v {:.3?}", local.a.as_slice(), local.b.as_slice());

    // Sampled helix: rotate 0.4 rad/s about z while climbing 0.05 m/s.
    let ts: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
    let poses: Vec<Pose> = ts.iter().map(|&s| pose_exp(&Screw::displacement(Vec3::new(0.0, 0.0, 0.4 * s), Vec3::new(0.0, 0.0, 0.05 * s)))).collect();
    let twists = differentiate_poses(&poses, &ts)?;
    let mid = &twists[50];
    println!("\nhelix twist at t = 0.5 s: ω {:.6?} v {:.6?}", mid.a.as_slice(), mid.b.as_slice());
    println!("pitch {:.4} m/rad (exact 0.125)", mid.pitch().unwrap_or(f64::NAN));
    let d = pose_log(&poses[100]);
    println!("displacement after 1 s: rotation {:.4?} translation {:.4?}", d.a.as_slice(), d.b.as_slice());
    Ok(())
}
