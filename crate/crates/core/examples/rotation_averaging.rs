//! Covariance-weighted averaging of two frame estimates: a confident one
//! pulls the average towards itself.
//!
//! cargo run --example rotation_averaging

use taskframe::geometry::{rot_exp, rot_log, Mat3, Vec3};
use taskframe::pipeline::average_rotations;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r1 = rot_exp(&Vec3::new(0.0, 0.0, 0.0));
    let r2 = rot_exp(&Vec3::new(0.0, 0.0, 0.6));
    for (k1, k2) in [(1.0, 1.0), (1.0, 4.0), (1.0, 100.0), (100.0, 1.0)] {
        let avg = average_rotations(&r1, &r2, &(Mat3::identity() * k1), &(Mat3::identity() * k2), 1e-12)?;
        let angle = rot_log(&avg.rotation).z;
        println!("C1 = {k1:>5} I, C2 = {k2:>5} I -> {angle:.4} rad about z ({} iterations)", avg.iterations);
    }
    // Anisotropic: r1 is sure about x and y but not about z.
    let c1 = Mat3::from_diagonal(&Vec3::new(0.01, 0.01, 10.0));
    let avg = average_rotations(&r1, &r2, &c1, &Mat3::identity(), 1e-12)?;
    println!("anisotropic C1 -> {:.4?}", rot_log(&avg.rotation).as_slice());
    Ok(())
}
