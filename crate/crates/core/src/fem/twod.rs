//! 2D two-phase heat conduction on Cartesian meshes of bilinear
//! quadrilaterals.
//!
//! The system matrix (consistent mass over dt plus stiffness) is constant in
//! time and kept in a 9-point stencil layout; each implicit Euler step is
//! solved by Jacobi-preconditioned conjugate gradients warm-started from the
//! previous step. Dirichlet rows at the top and bottom boundaries are
//! eliminated symmetrically so the operator stays SPD; the lateral
//! boundaries are adiabatic (natural).

use crate::delta::{CaseKind, ScaledDelta};
use crate::error::{CsfError, Result};
use crate::evaporation::{FluxEval, LaserModel};
use crate::fem::{physical_temperature, EvaporationSpec, SolveOptions, SolveReport};
use crate::geometry::{InterfaceGeometry, Point2};
use crate::indicator::indicator_value;
use crate::material::MaterialSet;
use crate::mesh::Mesh2d;
use crate::quadrature::GAUSS_4;

use std::time::Instant;

/// Symmetric 9-point stencil matrix on a tensor grid. Entry k of a node
/// holds the coupling to the neighbor at offset OFFSETS[k]; couplings to
/// neighbors outside the grid are zero.
pub struct Stencil9 {
    nx1: usize,
    ny1: usize,
    coef: Vec<[f64; 9]>,
}

const OFFSETS: [(i64, i64); 9] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (0, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

impl Stencil9 {
    pub fn zeros(nx1: usize, ny1: usize) -> Self {
        Stencil9 {
            nx1,
            ny1,
            coef: vec![[0.0; 9]; nx1 * ny1],
        }
    }

    #[inline]
    fn offset_index(di: i64, dj: i64) -> usize {
        ((dj + 1) * 3 + (di + 1)) as usize
    }

    #[inline]
    fn add(&mut self, node: usize, neighbor: usize, v: f64) {
        let (i0, j0) = ((node % self.nx1) as i64, (node / self.nx1) as i64);
        let (i1, j1) = ((neighbor % self.nx1) as i64, (neighbor / self.nx1) as i64);
        self.coef[node][Self::offset_index(i1 - i0, j1 - j0)] += v;
    }

    pub fn n(&self) -> usize {
        self.coef.len()
    }

    pub fn diag(&self) -> Vec<f64> {
        self.coef.iter().map(|c| c[4]).collect()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let nx1 = self.nx1 as i64;
        let ny1 = self.ny1 as i64;
        for j in 0..ny1 {
            let interior_j = j > 0 && j < ny1 - 1;
            for i in 0..nx1 {
                let n = (j * nx1 + i) as usize;
                let c = &self.coef[n];
                if interior_j && i > 0 && i < nx1 - 1 {
                    let b = n - self.nx1;
                    let t = n + self.nx1;
                    y[n] = c[0] * x[b - 1]
                        + c[1] * x[b]
                        + c[2] * x[b + 1]
                        + c[3] * x[n - 1]
                        + c[4] * x[n]
                        + c[5] * x[n + 1]
                        + c[6] * x[t - 1]
                        + c[7] * x[t]
                        + c[8] * x[t + 1];
                } else {
                    let mut acc = 0.0;
                    for (k, &(di, dj)) in OFFSETS.iter().enumerate() {
                        let ii = i + di;
                        let jj = j + dj;
                        if ii >= 0 && ii < nx1 && jj >= 0 && jj < ny1 {
                            acc += c[k] * x[(jj * nx1 + ii) as usize];
                        }
                    }
                    y[n] = acc;
                }
            }
        }
    }

    /// self += s * other.
    pub fn axpy(&mut self, s: f64, other: &Stencil9) {
        for (a, b) in self.coef.iter_mut().zip(other.coef.iter()) {
            for k in 0..9 {
                a[k] += s * b[k];
            }
        }
    }

    /// Symmetric Dirichlet elimination for the given nodes: zero their rows
    /// and columns, put 1 on the diagonal, and return the column
    /// contribution vector `fix` with `fix[i] = sum_d A[i, d]` over
    /// eliminated neighbors d (used to move known boundary values to the
    /// right-hand side).
    pub fn constrain(&mut self, dirichlet: &[bool]) -> Vec<f64> {
        let nx1 = self.nx1 as i64;
        let ny1 = self.ny1 as i64;
        let mut fix = vec![0.0; self.n()];
        for j in 0..ny1 {
            for i in 0..nx1 {
                let n = (j * nx1 + i) as usize;
                if dirichlet[n] {
                    self.coef[n] = [0.0; 9];
                    self.coef[n][4] = 1.0;
                    continue;
                }
                for (k, &(di, dj)) in OFFSETS.iter().enumerate() {
                    let ii = i + di;
                    let jj = j + dj;
                    if ii >= 0 && ii < nx1 && jj >= 0 && jj < ny1 {
                        let m = (jj * nx1 + ii) as usize;
                        if dirichlet[m] {
                            fix[n] += self.coef[n][k];
                            self.coef[n][k] = 0.0;
                        }
                    }
                }
            }
        }
        fix
    }
}

/// Jacobi-preconditioned conjugate gradients; `x` carries the warm start and
/// receives the solution. Returns the iteration count.
pub fn pcg(
    a: &Stencil9,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<usize> {
    let n = b.len();
    let inv_diag: Vec<f64> = a.diag().iter().map(|&d| 1.0 / d).collect();
    let mut r = vec![0.0; n];
    a.matvec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = rel_tol * norm_b.max(f64::MIN_POSITIVE);
    let mut z: Vec<f64> = r.iter().zip(inv_diag.iter()).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        let res = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !res.is_finite() {
            return Err(CsfError::LinearSolve { residual: res, iterations: it });
        }
        if res <= target {
            return Ok(it);
        }
        a.matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(ap.iter()).map(|(a, b)| a * b).sum();
        if pap <= 0.0 || !pap.is_finite() {
            return Err(CsfError::LinearSolve { residual: res, iterations: it });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: f64 = r.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    Err(CsfError::LinearSolve { residual: res / norm_b.max(f64::MIN_POSITIVE), iterations: max_iter })
}

/// 2D diffuse-interface scenario: Dirichlet top and bottom, adiabatic
/// lateral boundaries, Gaussian laser plus optional evaporative cooling.
#[derive(Debug, Clone)]
pub struct Scenario2d {
    pub mesh: Mesh2d,
    pub materials: MaterialSet,
    pub case: CaseKind,
    pub geometry: InterfaceGeometry,
    pub eps: f64,
    pub initial_temperature: f64,
    pub dirichlet_temperature: f64,
    pub laser: LaserModel,
    pub evaporation: Option<EvaporationSpec>,
    pub options: SolveOptions,
}

/// Band quadrature point with everything needed to rebuild the cooling
/// source for an iterate: scatter targets, local shape values, and the
/// interpolation stencil at the closest midplane point for IV evaluation.
struct BandQp2 {
    nodes: [u32; 4],
    shape: [f64; 4],
    /// Gauss weight times Jacobian times delta_i.
    scaled_w: f64,
    proj_nodes: [u32; 4],
    proj_shape: [f64; 4],
}

pub struct Solver2d {
    scenario: Scenario2d,
    system: Stencil9,
    mass: Stencil9,
    rhs_fix: Vec<f64>,
    dirichlet: Vec<bool>,
    laser_source: Vec<f64>,
    band: Vec<BandQp2>,
    temperature: Vec<f64>,
    steps_taken: usize,
    picard_counts: Vec<usize>,
    cg_iterations: usize,
}

impl Solver2d {
    pub fn new(scenario: Scenario2d) -> Result<Self> {
        scenario.materials.validate()?;
        scenario.options.validate()?;
        if !(scenario.eps > 0.0 && scenario.eps.is_finite()) {
            return Err(CsfError::invalid("interface thickness must be positive"));
        }
        let mesh = &scenario.mesh;
        let nx1 = mesh.xs().len();
        let ny1 = mesh.ys().len();
        let mats = &scenario.materials;
        let case = scenario.case;
        let eps = scenario.eps;
        let geom = &scenario.geometry;

        let mut mass = Stencil9::zeros(nx1, ny1);
        let mut stiff = Stencil9::zeros(nx1, ny1);
        let delta = ScaledDelta::new(mats.heat_capacity_case(case))?;
        let mut band = Vec::new();
        let mut laser_source = vec![0.0; mesh.n_nodes()];

        for cj in 0..mesh.ny_cells() {
            for ci in 0..mesh.nx_cells() {
                let (x0, x1) = (mesh.xs()[ci], mesh.xs()[ci + 1]);
                let (y0, y1) = (mesh.ys()[cj], mesh.ys()[cj + 1]);
                let (hx, hy) = (x1 - x0, y1 - y0);
                let nodes = mesh.cell_nodes(ci, cj);
                let jac = 0.25 * hx * hy;
                let cc = Point2::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
                let diag = hx.hypot(hy);
                let near_band = geom.signed_distance(cc).abs() <= 0.5 * eps + diag;

                for &(xi, wx) in GAUSS_4.iter() {
                    for &(eta, wy) in GAUSS_4.iter() {
                        let p = Point2::new(cc.x + 0.5 * hx * xi, cc.y + 0.5 * hy * eta);
                        let d = geom.signed_distance(p);
                        let chi = indicator_value(d, eps);
                        let cv = mats.heat_capacity_eff(case, chi);
                        let k = mats.conductivity_eff(chi);
                        let jw = wx * wy * jac;
                        // Bilinear shapes in (xi, eta), counter-clockwise.
                        let n = [
                            0.25 * (1.0 - xi) * (1.0 - eta),
                            0.25 * (1.0 + xi) * (1.0 - eta),
                            0.25 * (1.0 + xi) * (1.0 + eta),
                            0.25 * (1.0 - xi) * (1.0 + eta),
                        ];
                        let dndx = [
                            -0.25 * (1.0 - eta) * 2.0 / hx,
                            0.25 * (1.0 - eta) * 2.0 / hx,
                            0.25 * (1.0 + eta) * 2.0 / hx,
                            -0.25 * (1.0 + eta) * 2.0 / hx,
                        ];
                        let dndy = [
                            -0.25 * (1.0 - xi) * 2.0 / hy,
                            -0.25 * (1.0 + xi) * 2.0 / hy,
                            0.25 * (1.0 + xi) * 2.0 / hy,
                            0.25 * (1.0 - xi) * 2.0 / hy,
                        ];
                        for a in 0..4 {
                            for b in 0..4 {
                                mass.add(nodes[a], nodes[b], jw * cv * n[a] * n[b]);
                                stiff.add(
                                    nodes[a],
                                    nodes[b],
                                    jw * k * (dndx[a] * dndx[b] + dndy[a] * dndy[b]),
                                );
                            }
                        }
                        if near_band {
                            let dv = delta.eval(d, eps);
                            if dv > 0.0 {
                                let scaled_w = jw * dv;
                                let proj = geom.closest_point(p);
                                let q_laser = scenario.laser.flux(p, proj.normal_into_liquid);
                                let (pn, ps) = interp_stencil(mesh, proj.point);
                                for a in 0..4 {
                                    laser_source[nodes[a]] += scaled_w * q_laser * n[a];
                                }
                                band.push(BandQp2 {
                                    nodes: nodes.map(|v| v as u32),
                                    shape: n,
                                    scaled_w,
                                    proj_nodes: pn,
                                    proj_shape: ps,
                                });
                            }
                        }
                    }
                }
            }
        }

        // Dirichlet at the bottom (j = 0) and top (j = ny) boundaries.
        let mut dirichlet = vec![false; mesh.n_nodes()];
        for i in 0..nx1 {
            dirichlet[mesh.node_index(i, 0)] = true;
            dirichlet[mesh.node_index(i, ny1 - 1)] = true;
        }

        let mut system = Stencil9::zeros(nx1, ny1);
        system.axpy(1.0 / scenario.options.dt, &mass);
        system.axpy(1.0, &stiff);
        let fix = system.constrain(&dirichlet);
        let rhs_fix: Vec<f64> = fix
            .iter()
            .map(|&v| v * scenario.dirichlet_temperature)
            .collect();

        let n = mesh.n_nodes();
        Ok(Solver2d {
            temperature: vec![scenario.initial_temperature; n],
            scenario,
            system,
            mass,
            rhs_fix,
            dirichlet,
            laser_source,
            band,
            steps_taken: 0,
            picard_counts: Vec::new(),
            cg_iterations: 0,
        })
    }

    pub fn temperature(&self) -> &[f64] {
        &self.temperature
    }

    pub fn cg_iterations(&self) -> usize {
        self.cg_iterations
    }

    fn cooling_source(&self, iterate: &[f64], out: &mut [f64]) -> Result<()> {
        let Some(evap) = &self.scenario.evaporation else {
            return Ok(());
        };
        let cp_liquid = self.scenario.materials.specific_heat_liquid;
        for qp in &self.band {
            let t_in = match evap.method {
                FluxEval::Continuous => {
                    let mut t = 0.0;
                    for a in 0..4 {
                        t += qp.shape[a] * iterate[qp.nodes[a] as usize];
                    }
                    t
                }
                FluxEval::InterfaceValue => {
                    let mut t = 0.0;
                    for a in 0..4 {
                        t += qp.proj_shape[a] * iterate[qp.proj_nodes[a] as usize];
                    }
                    t
                }
            };
            let q = evap.model.evaporative_cooling(physical_temperature(t_in)?, cp_liquid)?;
            let w = qp.scaled_w * q;
            for a in 0..4 {
                out[qp.nodes[a] as usize] += w * qp.shape[a];
            }
        }
        Ok(())
    }

    pub fn step(&mut self) -> Result<usize> {
        let opts = self.scenario.options.clone();
        let n = self.temperature.len();
        let dt = opts.dt;
        let t_bar = self.scenario.dirichlet_temperature;

        let mut rhs_base = vec![0.0; n];
        self.mass.matvec(&self.temperature, &mut rhs_base);
        for (i, v) in rhs_base.iter_mut().enumerate() {
            *v = *v / dt + self.laser_source[i] - self.rhs_fix[i];
        }

        let needs_picard = self.scenario.evaporation.is_some();
        let mut iterate = self.temperature.clone();
        let mut cooling = vec![0.0; n];
        let mut picard_used = 0;
        for it in 0..opts.picard_max {
            picard_used = it + 1;
            cooling.fill(0.0);
            self.cooling_source(&iterate, &mut cooling)?;
            let mut rhs = rhs_base.clone();
            for i in 0..n {
                rhs[i] += cooling[i];
                if self.dirichlet[i] {
                    rhs[i] = t_bar;
                }
            }
            let mut next = iterate.clone();
            self.cg_iterations +=
                pcg(&self.system, &rhs, &mut next, opts.cg_rel_tol, opts.cg_max_iter)?;
            let change = next
                .iter()
                .zip(iterate.iter())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if !change.is_finite() {
                return Err(CsfError::NonFinite { what: "temperature change", context: "picard iteration" });
            }
            iterate = next;
            if !needs_picard || change < opts.picard_tol {
                break;
            }
            if it + 1 == opts.picard_max {
                return Err(CsfError::PicardStalled { change, iterations: opts.picard_max });
            }
        }

        self.temperature = iterate;
        self.steps_taken += 1;
        self.picard_counts.push(picard_used);
        Ok(picard_used)
    }

    pub fn solve(mut self) -> Result<SolveReport> {
        let start = Instant::now();
        for _ in 0..self.scenario.options.n_steps() {
            self.step()?;
        }
        if self.temperature.iter().any(|v| !v.is_finite()) {
            return Err(CsfError::NonFinite { what: "temperature", context: "final field" });
        }
        let mesh = &self.scenario.mesh;
        let (peak_idx, peak) = self
            .temperature
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        // Interface temperature probe: projection of the beam-axis point of
        // the depression (its own closest point for the melt pool).
        let probe = match self.scenario.geometry {
            InterfaceGeometry::MeltPool2d { center_radius, .. } => Point2::new(0.0, -center_radius),
            InterfaceGeometry::Planar1d => Point2::new(0.0, 0.0),
        };
        let proj = self.scenario.geometry.closest_point(probe);
        let t_interface = mesh.interpolate(&self.temperature, proj.point.x, proj.point.y);
        Ok(SolveReport {
            interface_temperature: t_interface,
            peak_temperature: peak,
            peak_location: mesh.node_coords(peak_idx),
            wall_time: start.elapsed(),
            steps: self.steps_taken,
            picard_iterations: self.picard_counts,
            temperature: self.temperature,
        })
    }
}

/// Bilinear interpolation stencil (cell corner nodes and shape values) for a
/// fixed point; used to read iterate temperatures at projected points.
fn interp_stencil(mesh: &Mesh2d, p: Point2) -> ([u32; 4], [f64; 4]) {
    let (i, j) = mesh.locate(p.x, p.y);
    let tx = ((p.x - mesh.xs()[i]) / (mesh.xs()[i + 1] - mesh.xs()[i])).clamp(0.0, 1.0);
    let ty = ((p.y - mesh.ys()[j]) / (mesh.ys()[j + 1] - mesh.ys()[j])).clamp(0.0, 1.0);
    let nodes = mesh.cell_nodes(i, j);
    (
        nodes.map(|v| v as u32),
        [
            (1.0 - tx) * (1.0 - ty),
            tx * (1.0 - ty),
            tx * ty,
            (1.0 - tx) * ty,
        ],
    )
}
