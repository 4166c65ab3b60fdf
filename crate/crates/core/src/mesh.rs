//! Interval and Cartesian tensor-product meshes.
//!
//! Benchmark meshes resolve the diffuse band with a prescribed number of
//! elements across the interface thickness and grade geometrically towards
//! capped coarser sizes away from it; all meshes are conforming by
//! construction.

use crate::error::{CsfError, Result};

use serde::{Deserialize, Serialize};

/// Target element size caps away from the fine band: `(up_to, size)` pairs
/// in increasing `up_to` order; beyond the last entry the last size applies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradingSpec {
    pub caps: Vec<(f64, f64)>,
    /// Geometric growth ratio used to transition from the fine band size to
    /// the local cap.
    pub growth: f64,
}

impl GradingSpec {
    pub fn uniform_cap(size: f64) -> Self {
        GradingSpec {
            caps: vec![(f64::INFINITY, size)],
            growth: 1.5,
        }
    }

    fn cap_at(&self, x: f64) -> f64 {
        for &(limit, size) in &self.caps {
            if x < limit {
                return size;
            }
        }
        self.caps.last().map(|&(_, s)| s).unwrap_or(f64::INFINITY)
    }
}

/// 1D mesh over an interval with strictly increasing node coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh1d {
    nodes: Vec<f64>,
}

impl Mesh1d {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(CsfError::invalid("a 1D mesh needs at least two nodes"));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(CsfError::invalid(format!(
                    "1D mesh nodes must strictly increase, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Mesh1d { nodes })
    }

    /// Uniform mesh with `n` elements over [left, right].
    pub fn uniform(left: f64, right: f64, n: usize) -> Result<Self> {
        if !(right > left) || n == 0 {
            return Err(CsfError::invalid("uniform mesh needs right > left and n > 0"));
        }
        let h = (right - left) / n as f64;
        let mut nodes: Vec<f64> = (0..=n).map(|i| left + h * i as f64).collect();
        // Pin the endpoints exactly.
        nodes[0] = left;
        nodes[n] = right;
        Mesh1d::from_nodes(nodes)
    }

    /// Symmetric graded mesh over [-half_width, half_width] with a node at 0:
    /// uniform size `h_fine` inside `|x| <= fine_halfwidth` (rounded up to a
    /// whole number of fine elements), then geometric growth towards the
    /// grading caps. The outermost run is stretched uniformly so the last
    /// node lands exactly on the boundary.
    pub fn graded_symmetric(
        half_width: f64,
        h_fine: f64,
        fine_halfwidth: f64,
        grading: &GradingSpec,
    ) -> Result<Self> {
        if !(half_width > 0.0 && h_fine > 0.0 && fine_halfwidth > 0.0) {
            return Err(CsfError::invalid("graded mesh sizes must be positive"));
        }
        if fine_halfwidth >= half_width {
            return Err(CsfError::invalid(
                "fine band must be narrower than the domain half-width",
            ));
        }
        if grading.growth <= 1.0 {
            return Err(CsfError::invalid("grading growth ratio must exceed 1"));
        }
        let mut right = vec![0.0f64];
        let n_fine = (fine_halfwidth / h_fine).ceil().max(1.0) as usize;
        for i in 1..=n_fine {
            right.push(h_fine * i as f64);
        }
        let mut h = h_fine;
        loop {
            let x = *right.last().unwrap();
            if x >= half_width - 1e-12 * half_width {
                break;
            }
            h = (h * grading.growth).min(grading.cap_at(x));
            let remaining = half_width - x;
            if remaining <= h * (1.0 + grading.growth) {
                // Close out with a uniform run that lands exactly on the boundary.
                let n = (remaining / h).ceil().max(1.0) as usize;
                let hh = remaining / n as f64;
                for i in 1..=n {
                    right.push(x + hh * i as f64);
                }
                break;
            }
            right.push(x + h);
        }
        *right.last_mut().unwrap() = half_width;
        let mut nodes: Vec<f64> = right.iter().skip(1).rev().map(|&x| -x).collect();
        nodes.extend_from_slice(&right);
        Mesh1d::from_nodes(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn element_size(&self, e: usize) -> f64 {
        self.nodes[e + 1] - self.nodes[e]
    }

    pub fn left(&self) -> f64 {
        self.nodes[0]
    }

    pub fn right(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Index of the node closest to `x`.
    pub fn nearest_node(&self, x: f64) -> usize {
        let e = self.locate(x);
        if (x - self.nodes[e]).abs() <= (self.nodes[e + 1] - x).abs() {
            e
        } else {
            e + 1
        }
    }

    /// Element containing `x` (clamped to the domain).
    pub fn locate(&self, x: f64) -> usize {
        match self
            .nodes
            .binary_search_by(|n| n.partial_cmp(&x).expect("finite node"))
        {
            Ok(i) => i.min(self.n_elements() - 1),
            Err(i) => i.clamp(1, self.n_elements()) - 1,
        }
    }

    /// Piecewise-linear interpolation of nodal `values` at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let e = self.locate(x);
        let (x0, x1) = (self.nodes[e], self.nodes[e + 1]);
        let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        values[e] * (1.0 - t) + values[e + 1] * t
    }
}

/// Cartesian tensor-product mesh of bilinear quadrilaterals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh2d {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Mesh2d {
    pub fn from_lines(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        for lines in [&xs, &ys] {
            if lines.len() < 2 {
                return Err(CsfError::invalid("a 2D mesh needs at least two grid lines per axis"));
            }
            for w in lines.windows(2) {
                if !(w[1] > w[0]) {
                    return Err(CsfError::invalid("2D grid lines must strictly increase"));
                }
            }
        }
        Ok(Mesh2d { xs, ys })
    }

    /// Uniform nx-by-ny cell grid over [-half_width, half_width]^2.
    pub fn uniform_square(half_width: f64, cells_per_side: usize) -> Result<Self> {
        let m = Mesh1d::uniform(-half_width, half_width, cells_per_side)?;
        Mesh2d::from_lines(m.nodes().to_vec(), m.nodes().to_vec())
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn nx_cells(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn ny_cells(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn n_cells(&self) -> usize {
        self.nx_cells() * self.ny_cells()
    }

    #[inline]
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * self.xs.len() + i
    }

    pub fn node_coords(&self, idx: usize) -> (f64, f64) {
        let i = idx % self.xs.len();
        let j = idx / self.xs.len();
        (self.xs[i], self.ys[j])
    }

    /// Corner node indices of cell (i, j), counter-clockwise from lower-left.
    #[inline]
    pub fn cell_nodes(&self, i: usize, j: usize) -> [usize; 4] {
        [
            self.node_index(i, j),
            self.node_index(i + 1, j),
            self.node_index(i + 1, j + 1),
            self.node_index(i, j + 1),
        ]
    }

    fn locate_line(lines: &[f64], v: f64) -> usize {
        match lines.binary_search_by(|n| n.partial_cmp(&v).expect("finite grid line")) {
            Ok(i) => i.min(lines.len() - 2),
            Err(i) => i.clamp(1, lines.len() - 1) - 1,
        }
    }

    /// Cell containing (x, y), clamped to the domain.
    pub fn locate(&self, x: f64, y: f64) -> (usize, usize) {
        (
            Self::locate_line(&self.xs, x),
            Self::locate_line(&self.ys, y),
        )
    }

    /// Bilinear interpolation of nodal `values` at (x, y).
    pub fn interpolate(&self, values: &[f64], x: f64, y: f64) -> f64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let (i, j) = self.locate(x, y);
        let tx = ((x - self.xs[i]) / (self.xs[i + 1] - self.xs[i])).clamp(0.0, 1.0);
        let ty = ((y - self.ys[j]) / (self.ys[j + 1] - self.ys[j])).clamp(0.0, 1.0);
        let [n00, n10, n11, n01] = self.cell_nodes(i, j);
        values[n00] * (1.0 - tx) * (1.0 - ty)
            + values[n10] * tx * (1.0 - ty)
            + values[n11] * tx * ty
            + values[n01] * (1.0 - tx) * ty
    }
}

/// A mesh of either dimensionality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Mesh {
    Interval(Mesh1d),
    Cartesian(Mesh2d),
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        match self {
            Mesh::Interval(m) => m.n_nodes(),
            Mesh::Cartesian(m) => m.n_nodes(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mesh_has_exact_bounds() {
        let m = Mesh1d::uniform(-1e-4, 1e-4, 7).unwrap();
        assert_eq!(m.left(), -1e-4);
        assert_eq!(m.right(), 1e-4);
        assert_eq!(m.n_elements(), 7);
    }

    #[test]
    fn graded_mesh_is_symmetric_with_center_node() {
        let grading = GradingSpec {
            caps: vec![(40e-6, 0.125e-6), (f64::INFINITY, 0.5e-6)],
            growth: 1.5,
        };
        let m = Mesh1d::graded_symmetric(100e-6, 0.375e-6, 6e-6, &grading).unwrap();
        assert_eq!(m.left(), -100e-6);
        assert_eq!(m.right(), 100e-6);
        let nodes = m.nodes();
        let center = nodes.iter().position(|&x| x == 0.0).expect("center node");
        // Mirror symmetry.
        for k in 0..center.min(nodes.len() - center - 1) {
            assert!((nodes[center - k] + nodes[center + k]).abs() < 1e-18);
        }
        // Fine band resolved at h_fine.
        assert!((m.element_size(center) - 0.375e-6).abs() < 1e-18);
        // Marching outward from the band, sizes never grow faster than the
        // growth ratio (they may shrink where a cap is finer than the band).
        for e in center..m.n_elements() - 1 {
            let r = m.element_size(e + 1) / m.element_size(e);
            assert!(r < 1.51, "outward growth {r} at element {e}");
        }
        // Caps respected.
        for e in 0..m.n_elements() {
            let mid = 0.5 * (nodes[e] + nodes[e + 1]);
            if mid.abs() > 6e-6 && mid.abs() < 40e-6 {
                assert!(m.element_size(e) <= 0.375e-6 + 1e-18);
            }
        }
    }

    #[test]
    fn graded_mesh_handles_tiny_band() {
        let grading = GradingSpec {
            caps: vec![(40e-6, 0.125e-6), (f64::INFINITY, 0.5e-6)],
            growth: 1.5,
        };
        let eps = 0.01e-6;
        let m = Mesh1d::graded_symmetric(100e-6, eps / 128.0, eps, &grading).unwrap();
        assert!(m.n_elements() > 256);
        assert!(m.n_elements() < 4000, "unexpectedly large: {}", m.n_elements());
    }

    #[test]
    fn locate_and_interpolate() {
        let m = Mesh1d::from_nodes(vec![0.0, 1.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.locate(0.5), 0);
        assert_eq!(m.locate(1.0), 1);
        assert_eq!(m.locate(2.9), 1);
        assert_eq!(m.locate(4.0), 2);
        assert_eq!(m.locate(-7.0), 0);
        let v = vec![0.0, 1.0, 5.0, 6.0];
        assert_eq!(m.interpolate(&v, 2.0), 3.0);
        assert_eq!(m.interpolate(&v, 0.0), 0.0);
        assert_eq!(m.interpolate(&v, 10.0), 6.0);
    }

    #[test]
    fn cartesian_indexing_and_interpolation() {
        let m = Mesh2d::uniform_square(1.0, 4).unwrap();
        assert_eq!(m.n_cells(), 16);
        assert_eq!(m.n_nodes(), 25);
        let mut v = vec![0.0; m.n_nodes()];
        for idx in 0..m.n_nodes() {
            let (x, y) = m.node_coords(idx);
            v[idx] = 2.0 * x + 3.0 * y + 0.5;
        }
        // Bilinear interpolation reproduces affine fields exactly.
        assert!((m.interpolate(&v, 0.3, -0.7) - (0.6 - 2.1 + 0.5)).abs() < 1e-14);
        assert!((m.interpolate(&v, -1.0, 1.0) - (-2.0 + 3.0 + 0.5)).abs() < 1e-14);
    }
}
