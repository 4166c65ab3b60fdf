//! Error norms and convergence-order estimation.

use crate::error::{CsfError, Result};
use crate::mesh::{Mesh1d, Mesh2d};
use crate::quadrature::GAUSS_4;

/// Relative L2 error ||T - T_ref|| / ||T_ref|| over the trial mesh, with the
/// reference evaluated at the trial quadrature points.
pub fn l2_relative_error_1d<F: Fn(f64) -> f64>(mesh: &Mesh1d, values: &[f64], reference: F) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for e in 0..mesh.n_elements() {
        let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        let half = 0.5 * (x1 - x0);
        let mid = 0.5 * (x0 + x1);
        for &(xi, w) in GAUSS_4.iter() {
            let x = mid + half * xi;
            let nl = (x1 - x) / (x1 - x0);
            let t = values[e] * nl + values[e + 1] * (1.0 - nl);
            let r = reference(x);
            num += w * half * (t - r) * (t - r);
            den += w * half * r * r;
        }
    }
    relative(num, den)
}

/// 2D variant on a Cartesian mesh of bilinear elements.
pub fn l2_relative_error_2d<F: Fn(f64, f64) -> f64>(
    mesh: &Mesh2d,
    values: &[f64],
    reference: F,
) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..mesh.ny_cells() {
        for i in 0..mesh.nx_cells() {
            let (x0, x1) = (mesh.xs()[i], mesh.xs()[i + 1]);
            let (y0, y1) = (mesh.ys()[j], mesh.ys()[j + 1]);
            let (hx, hy) = (0.5 * (x1 - x0), 0.5 * (y1 - y0));
            let nodes = mesh.cell_nodes(i, j);
            for &(xi, wx) in GAUSS_4.iter() {
                for &(eta, wy) in GAUSS_4.iter() {
                    let x = 0.5 * (x0 + x1) + hx * xi;
                    let y = 0.5 * (y0 + y1) + hy * eta;
                    let n = [
                        0.25 * (1.0 - xi) * (1.0 - eta),
                        0.25 * (1.0 + xi) * (1.0 - eta),
                        0.25 * (1.0 + xi) * (1.0 + eta),
                        0.25 * (1.0 - xi) * (1.0 + eta),
                    ];
                    let mut t = 0.0;
                    for a in 0..4 {
                        t += n[a] * values[nodes[a]];
                    }
                    let r = reference(x, y);
                    let jw = wx * wy * hx * hy;
                    num += jw * (t - r) * (t - r);
                    den += jw * r * r;
                }
            }
        }
    }
    relative(num, den)
}

fn relative(num_sq: f64, den_sq: f64) -> f64 {
    if den_sq == 0.0 {
        if num_sq == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (num_sq / den_sq).sqrt()
    }
}

/// Least-squares fit of log(error) against log(eps).
#[derive(Debug, Clone)]
pub struct ConvergenceFit {
    /// Fitted slope of the log-log regression.
    pub order: f64,
    /// Pairwise orders between consecutive points (sorted by eps).
    pub pairwise: Vec<f64>,
}

/// Convergence order from (eps, error) samples; needs at least three
/// distinct eps values with positive errors.
pub fn convergence_order(points: &[(f64, f64)]) -> Result<ConvergenceFit> {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(eps, err)| eps > 0.0 && err > 0.0)
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eps"));
    pts.dedup_by(|a, b| a.0 == b.0);
    if pts.len() < 3 {
        return Err(CsfError::invalid(format!(
            "convergence fit needs at least 3 distinct eps points, got {}",
            pts.len()
        )));
    }
    let logs: Vec<(f64, f64)> = pts.iter().map(|&(e, v)| (e.ln(), v.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let pairwise = logs
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    Ok(ConvergenceFit { order, pairwise })
}
