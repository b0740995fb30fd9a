use nalgebra::{DMatrix, DVector};

use super::reparam::ProgressTrial;
use crate::error::{Error, Result};
use crate::geometry::{rot_to_quat, Screw, ScrewKind, Vec3};

/// Averaged reference signals on the common ξ̄ grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AveragedSignals {
    pub grid: Vec<f64>,
    pub positions: Vec<Vec3>,
    /// Unit quaternions (w, x, y, z), hemisphere-continuous.
    pub quaternions: Vec<[f64; 4]>,
    pub twists: Vec<Screw>,
    pub wrenches: Vec<Screw>,
    pub xi_max_avg: f64,
    pub duration_avg_s: f64,
}

/// Cubic smoothing spline values at the knots: minimizes
/// Σ (yᵢ − g(xᵢ))² + λ ∫ g''² (Reinsch). λ = 0 returns `y`.
pub fn smoothing_spline(x: &[f64], y: &[f64], lambda: f64) -> Vec<f64> {
    let n = x.len();
    if !(lambda > 0.0) || n < 3 {
        return y.to_vec();
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut q = DMatrix::<f64>::zeros(n, n - 2);
    let mut r = DMatrix::<f64>::zeros(n - 2, n - 2);
    for j in 0..n - 2 {
        let i = j + 1;
        q[(i - 1, j)] = 1.0 / h[i - 1];
        q[(i, j)] = -1.0 / h[i - 1] - 1.0 / h[i];
        q[(i + 1, j)] = 1.0 / h[i];
        r[(j, j)] = (h[i - 1] + h[i]) / 3.0;
        if j + 1 < n - 2 {
            r[(j, j + 1)] = h[i] / 6.0;
            r[(j + 1, j)] = h[i] / 6.0;
        }
    }
    let yv = DVector::from_column_slice(y);
    let lhs = &r + (q.transpose() * &q) * lambda;
    let gamma = lhs.lu().solve(&(q.transpose() * &yv)).expect("smoothing spline system is positive definite");
    let g = yv - (q * gamma) * lambda;
    g.iter().copied().collect()
}

fn smooth_columns<const K: usize>(grid: &[f64], rows: &[[f64; K]], lambda: f64) -> Vec<[f64; K]> {
    let mut out = rows.to_vec();
    for c in 0..K {
        let col: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        for (o, v) in out.iter_mut().zip(smoothing_spline(grid, &col, lambda)) {
            o[c] = v;
        }
    }
    out
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Componentwise mean over trials, then a smoothing spline per component.
pub fn average_trials(trials: &[ProgressTrial], lambda: f64) -> Result<AveragedSignals> {
    let first = trials.first().ok_or(Error::InsufficientSamples { needed: 1, got: 0 })?;
    let grid = first.grid.clone();
    let n = grid.len();
    if trials.iter().any(|t| t.grid.len() != n || t.grid.iter().zip(&grid).any(|(a, b)| (a - b).abs() > 1e-12)) {
        return Err(Error::invalid("trials", "progress grids differ"));
    }
    let k = trials.len() as f64;

    // Hemisphere reference: the first trial, made continuous along the grid.
    let mut reference: Vec<[f64; 4]> = first.poses.iter().map(|p| rot_to_quat(&p.r)).collect();
    for j in 1..n {
        if dot4(&reference[j], &reference[j - 1]) < 0.0 {
            reference[j] = reference[j].map(|v| -v);
        }
    }

    let mut pos = vec![[0.0; 3]; n];
    let mut quat = vec![[0.0; 4]; n];
    let mut tw = vec![[0.0; 6]; n];
    let mut wr = vec![[0.0; 6]; n];
    for t in trials {
        for j in 0..n {
            let p = t.poses[j].p;
            let mut q = rot_to_quat(&t.poses[j].r);
            if dot4(&q, &reference[j]) < 0.0 {
                q = q.map(|v| -v);
            }
            let (a, b) = (t.twists[j].to_array(), t.wrenches[j].to_array());
            for c in 0..3 {
                pos[j][c] += p[c] / k;
            }
            for c in 0..4 {
                quat[j][c] += q[c] / k;
            }
            for c in 0..6 {
                tw[j][c] += a[c] / k;
                wr[j][c] += b[c] / k;
            }
        }
    }
    let pos = smooth_columns(&grid, &pos, lambda);
    let quat = smooth_columns(&grid, &quat, lambda);
    let tw = smooth_columns(&grid, &tw, lambda);
    let wr = smooth_columns(&grid, &wr, lambda);
    let mut quaternions: Vec<[f64; 4]> = quat
        .iter()
        .map(|q| {
            let nq = dot4(q, q).sqrt();
            q.map(|v| v / nq)
        })
        .collect();
    // Canonical overall sign, independent of which trial came first.
    if quaternions.first().is_some_and(|q| q[0] < 0.0) {
        quaternions.iter_mut().for_each(|q| *q = q.map(|v| -v));
    }
    Ok(AveragedSignals {
        grid,
        positions: pos.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(),
        quaternions,
        twists: tw.iter().map(|x| Screw::from_array(ScrewKind::Twist, *x)).collect(),
        wrenches: wr.iter().map(|x| Screw::from_array(ScrewKind::Wrench, *x)).collect(),
        xi_max_avg: trials.iter().map(|t| t.xi_max).sum::<f64>() / k,
        duration_avg_s: trials.iter().map(|t| t.duration_s).sum::<f64>() / k,
    })
}
