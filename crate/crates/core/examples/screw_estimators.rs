//! The two screw estimators on noisy twists whose axes pass near a common
//! point: the intersection point with its covariance, and the average
//! orientation frame of the angular velocities.
//!
//! cargo run --example screw_estimators

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use taskframe::geometry::{Screw, Vec3};
use taskframe::statistics::{asip, avof, avof_asip_consistency};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut g = |s: f64| Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)) * s;
    let anchor = Vec3::new(0.1, -0.3, 0.2);
    let mut twists = Vec::new();
    let mut omegas = Vec::new();
    for _ in 0..200 {
        // Mostly about z, with some spread.
        let w = Vec3::new(0.0, 0.0, 0.4) + g(0.1);
        let v = -w.cross(&anchor) + g(1e-3);
        twists.push(Screw::twist(w, v));
        omegas.push(w);
    }
    let p = asip(&twists, 0.0, &Vec3::zeros())?;
    println!("intersection point {:.4?} (true {:?})", p.point.as_slice(), anchor.as_slice());
    println!("error {:.3} mm, sigma² {:.3e}", 1e3 * (p.point - anchor).norm(), p.sigma_hat_sq);
    println!("covariance diagonal [mm²] {:.4?}", (p.covariance.diagonal() * 1e6).as_slice());

    let a = avof(&omegas)?;
    println!("\ndominant ω direction {:.4?}", a.frame.column(0).as_slice());
    println!("singular values {:.4e}", a.singular_values.transpose());

    let c = avof_asip_consistency(&omegas, &twists)?;
    println!("\nconsistency: relative residual {:.2e}, axis angle {:.2e} rad", c.relative_residual, c.max_axis_angle);
    Ok(())
}
