//! The two screw estimators: the average vector orientation frame (AVOF)
//! and the average screw-axes intersection point (ASIP).

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Mat3, RotationMatrix, Screw, Vec3};

/// Condition number above which `A + εI` counts as singular.
pub const MAX_CONDITION: f64 = 1e12;

// Residual tolerance, in units of rounding error, for an exact fit.
const EXACT_FIT_ULPS: f64 = 256.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvofResult {
    /// Columns: dominant direction, then decreasing variation; right-handed.
    #[serde(with = "crate::serde_util::mat3")]
    pub frame: RotationMatrix,
    /// Uncentered covariance divided by its trace.
    #[serde(with = "crate::serde_util::mat3")]
    pub covariance: Mat3,
    /// Eigenvalues of the uncentered covariance, descending.
    pub singular_values: Vec3,
    /// Mean squared norm of the input vectors (the trace).
    pub mean_sq_norm: f64,
}

impl AvofResult {
    /// Scale the covariance by `c_ref² / mean_sq_norm`, so weak signals get
    /// a wide covariance when averaged against strong ones.
    pub fn weighted_covariance(&self, c_ref: f64) -> Mat3 {
        self.covariance * (c_ref * c_ref / self.mean_sq_norm)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsipResult {
    pub point: Vec3,
    #[serde(with = "crate::serde_util::mat3")]
    pub covariance: Mat3,
    pub sigma_hat_sq: f64,
    /// Eigenvectors of the covariance, largest variance first, right-handed.
    #[serde(with = "crate::serde_util::mat3")]
    pub singular_vectors: RotationMatrix,
}

/// Eigen-decomposition of a symmetric matrix, sorted descending.
pub(crate) fn sorted_eigen(m: &Mat3) -> (Vec3, Mat3) {
    let eig = SymmetricEigen::new(0.5 * (m + m.transpose()));
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let vals = Vec3::new(eig.eigenvalues[idx[0]], eig.eigenvalues[idx[1]], eig.eigenvalues[idx[2]]);
    let vecs = Mat3::from_columns(&[
        eig.eigenvectors.column(idx[0]).into_owned(),
        eig.eigenvectors.column(idx[1]).into_owned(),
        eig.eigenvectors.column(idx[2]).into_owned(),
    ]);
    (vals, vecs)
}

/// Sign for an axis `u` that makes the output depend only on the data, so
/// rotating the inputs rotates the frame: mean direction first, then the
/// third moment, then the largest component as a last resort.
fn axis_sign(u: &Vec3, mean: &Vec3, vectors: &[Vec3], scale: f64) -> f64 {
    let d = u.dot(mean);
    if d.abs() > 1e-9 * scale {
        return d.signum();
    }
    let m3: f64 = vectors.iter().map(|c| c.dot(u).powi(3)).sum::<f64>() / vectors.len() as f64;
    if m3.abs() > 1e-9 * scale.powi(3) {
        return m3.signum();
    }
    let k = u.iamax();
    if u[k] < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn avof(vectors: &[Vec3]) -> Result<AvofResult> {
    if vectors.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let n = vectors.len() as f64;
    let mut cc = Mat3::zeros();
    let mut mean = Vec3::zeros();
    for c in vectors {
        cc += c * c.transpose();
        mean += c;
    }
    cc /= n;
    mean /= n;
    let tr = cc.trace();
    if !(tr >= 1e-15) {
        return Err(Error::DegenerateVectors);
    }
    let (vals, vecs) = sorted_eigen(&cc);
    let scale = tr.sqrt();
    let mut u1: Vec3 = vecs.column(0).into_owned();
    let mut u2: Vec3 = vecs.column(1).into_owned();
    u1 *= axis_sign(&u1, &mean, vectors, scale);
    u2 *= axis_sign(&u2, &mean, vectors, scale);
    let u3 = u1.cross(&u2);
    Ok(AvofResult {
        frame: Mat3::from_columns(&[u1, u2, u3]),
        covariance: cc / tr,
        singular_values: vals.map(|v| v.max(0.0)),
        mean_sq_norm: tr,
    })
}

/// Point minimizing the mean squared moment ‖aᵢ × p + bᵢ‖² (regularized
/// towards `p0` with weight `epsilon`), with its covariance.
pub fn asip(screws: &[Screw], epsilon: f64, p0: &Vec3) -> Result<AsipResult> {
    let n = screws.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    if let Some(s) = screws.iter().find(|s| s.kind() != screws[0].kind()) {
        return Err(Error::MixedKinds(screws[0].kind(), s.kind()));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::invalid("epsilon", "must be >= 0"));
    }
    let nf = n as f64;
    let mut a_mat = Mat3::zeros();
    let mut rhs = Vec3::zeros();
    for s in screws {
        a_mat += Mat3::identity() * s.a.norm_squared() - s.a * s.a.transpose();
        rhs += s.a.cross(&s.b);
    }
    a_mat /= nf;
    rhs = rhs / nf + p0 * epsilon;
    let m = a_mat + Mat3::identity() * epsilon;
    let (vals, vecs) = sorted_eigen(&m);
    let cond = if vals[2] > 0.0 { vals[0] / vals[2] } else { f64::INFINITY };
    if !(cond <= MAX_CONDITION) {
        return Err(Error::SingularAsip { cond });
    }
    let m_inv = vecs * Mat3::from_diagonal(&vals.map(|v| 1.0 / v)) * vecs.transpose();
    let point = m_inv * rhs;
    // Residuals at rounding level mean an exact fit: report σ̂² = 0 so the
    // decision ratios see a true zero determinant.
    let mut ss = 0.0;
    let mut exact = true;
    for s in screws {
        let res = s.a.cross(&point) + s.b;
        exact &= res.norm() <= EXACT_FIT_ULPS * f64::EPSILON * (s.a.norm() * point.norm() + s.b.norm());
        ss += res.norm_squared();
    }
    let sigma_hat_sq = if exact { 0.0 } else { ss / (nf * (3.0 * nf - 3.0)) };
    let covariance = m_inv * sigma_hat_sq;
    // Largest covariance ↔ smallest eigenvalue of M.
    let u = Mat3::from_columns(&[vecs.column(2).into_owned(), vecs.column(1).into_owned(), Vec3::zeros()]);
    let c3 = u.column(0).cross(&u.column(1));
    let singular_vectors = Mat3::from_columns(&[u.column(0).into_owned(), u.column(1).into_owned(), c3]);
    Ok(AsipResult { point, covariance: 0.5 * (covariance + covariance.transpose()), sigma_hat_sq, singular_vectors })
}

/// Subtract the arithmetic mean screw from every screw.
pub fn mean_subtract(screws: &[Screw]) -> Result<Vec<Screw>> {
    if screws.len() < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: screws.len() });
    }
    let kind = screws[0].kind();
    let n = screws.len() as f64;
    let (mut ma, mut mb) = (Vec3::zeros(), Vec3::zeros());
    for s in screws {
        if s.kind() != kind {
            return Err(Error::MixedKinds(kind, s.kind()));
        }
        ma += s.a;
        mb += s.b;
    }
    ma /= n;
    mb /= n;
    Ok(screws.iter().map(|s| Screw::new(kind, s.a - ma, s.b - mb)).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// max |C_asip − σ̂²/tr(C_c)·(I − C_avof)⁻¹| / max |C_asip|.
    pub relative_residual: f64,
    /// Largest angle [rad] between matched eigenvectors of the two covariances.
    pub max_axis_angle: f64,
    pub avof: AvofResult,
    pub asip: AsipResult,
}

/// Check that ASIP (ε = 0) and AVOF on the same directional parts share
/// their eigenvectors and satisfy C_asip = σ̂²/tr(C_c) · (I − C_avof)⁻¹.
pub fn avof_asip_consistency(vectors: &[Vec3], screws: &[Screw]) -> Result<ConsistencyReport> {
    let av = avof(vectors)?;
    let asp = asip(screws, 0.0, &Vec3::zeros())?;
    let inv = (Mat3::identity() - av.covariance)
        .try_inverse()
        .ok_or(Error::DegenerateVectors)?;
    let rhs = inv * (asp.sigma_hat_sq / av.mean_sq_norm);
    let scale = asp.covariance.amax();
    let relative_residual = if scale > 0.0 {
        (asp.covariance - rhs).amax() / scale
    } else {
        rhs.amax()
    };
    // C_asip ∝ (I − C_avof)⁻¹: the point is least certain along the dominant
    // direction, so columns match in the same order.
    let mut max_axis_angle: f64 = 0.0;
    for k in 0..2 {
        let u = av.frame.column(k);
        let w = asp.singular_vectors.column(k);
        let c = u.dot(&w).abs().min(1.0);
        max_axis_angle = max_axis_angle.max(c.acos());
    }
    Ok(ConsistencyReport { relative_residual, max_axis_angle, avof: av, asip: asp })
}
