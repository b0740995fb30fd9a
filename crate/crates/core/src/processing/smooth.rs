//! Gaussian-weighted moving averages, truncated at ±3σ and renormalized
//! where the window runs past either end of the series.

use crate::geometry::{rot_exp, rot_log, Pose, Screw, Vec3};

/// For each sample, the window indices and normalized weights.
fn windows(times: &[f64], sigma_s: f64) -> Vec<(usize, Vec<f64>)> {
    let n = times.len();
    let reach = 3.0 * sigma_s;
    let mut lo = 0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        while times[i] - times[lo] > reach {
            lo += 1;
        }
        let mut w = Vec::new();
        let mut j = lo;
        while j < n && times[j] - times[i] <= reach {
            let d = (times[j] - times[i]) / sigma_s;
            w.push((-0.5 * d * d).exp());
            j += 1;
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        out.push((lo, w));
    }
    out
}

/// Smooth a scalar series sampled at `times` with a Gaussian of std
/// `sigma_s` seconds. `sigma_s ≤ 0` returns the input unchanged.
pub fn smooth_scalar(times: &[f64], xs: &[f64], sigma_s: f64) -> Vec<f64> {
    if !(sigma_s > 0.0) {
        return xs.to_vec();
    }
    windows(times, sigma_s)
        .into_iter()
        .map(|(lo, w)| w.iter().enumerate().map(|(k, wk)| wk * xs[lo + k]).sum())
        .collect()
}

pub fn smooth_vec3(times: &[f64], xs: &[Vec3], sigma_s: f64) -> Vec<Vec3> {
    if !(sigma_s > 0.0) {
        return xs.to_vec();
    }
    windows(times, sigma_s)
        .into_iter()
        .map(|(lo, w)| w.iter().enumerate().fold(Vec3::zeros(), |acc, (k, wk)| acc + xs[lo + k] * *wk))
        .collect()
}

/// Componentwise smoothing of a wrench (or any screw) series.
pub fn smooth_wrench(times: &[f64], series: &[Screw], sigma_s: f64) -> Vec<Screw> {
    let a: Vec<Vec3> = series.iter().map(|s| s.a).collect();
    let b: Vec<Vec3> = series.iter().map(|s| s.b).collect();
    let (a, b) = (smooth_vec3(times, &a, sigma_s), smooth_vec3(times, &b, sigma_s));
    series.iter().zip(a.into_iter().zip(b)).map(|(s, (a, b))| Screw::new(s.kind(), a, b)).collect()
}

/// Positions are averaged componentwise; rotations in the tangent space of
/// each sample: R̃ᵢ = exp(Σ wₖ log(Rₖ Rᵢᵀ)) Rᵢ.
pub fn smooth_poses(times: &[f64], poses: &[Pose], sigma_s: f64) -> Vec<Pose> {
    if !(sigma_s > 0.0) {
        return poses.to_vec();
    }
    windows(times, sigma_s)
        .into_iter()
        .enumerate()
        .map(|(i, (lo, w))| {
            let ri_t = poses[i].r.transpose();
            let mut p = Vec3::zeros();
            let mut r = Vec3::zeros();
            for (k, wk) in w.iter().enumerate() {
                let j = lo + k;
                p += poses[j].p * *wk;
                if j != i {
                    r += rot_log(&(poses[j].r * ri_t)) * *wk;
                }
            }
            Pose::from_parts(rot_exp(&r) * poses[i].r, p)
        })
        .collect()
}
