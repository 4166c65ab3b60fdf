//! 1D two-phase heat transfer: diffuse CSF solver and sharp reference.
//!
//! Linear elements, consistent (optionally lumped) mass, 4-point Gauss
//! quadrature per element, implicit Euler stepping with direct tridiagonal
//! elimination. The diffuse solver regularizes the interface flux with the
//! scenario's parameter-scaled delta; the sharp solver applies the flux as a
//! nodal point source at the mesh-aligned interface with element-wise phase
//! properties, and serves as the convergence reference.

use crate::delta::{CaseKind, ScaledDelta};
use crate::error::{CsfError, Result};
use crate::evaporation::{FluxEval, LaserModel};
use crate::fem::{physical_temperature, EvaporationSpec, SolveOptions, SolveReport};
use crate::geometry::{InterfaceGeometry, Point2};
use crate::indicator::indicator_value;
use crate::material::MaterialSet;
use crate::mesh::Mesh1d;
use crate::quadrature::GAUSS_4;

use std::time::Instant;

/// Tridiagonal matrix with row-major bands.
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiag {
    pub fn zeros(n: usize) -> Self {
        Tridiag {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, v: f64) {
        match j as i64 - i as i64 {
            -1 => self.lower[j] += v,
            0 => self.diag[i] += v,
            1 => self.upper[i] += v,
            _ => unreachable!("tridiagonal stencil"),
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.upper[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// self += s * other.
    pub fn axpy(&mut self, s: f64, other: &Tridiag) {
        for (a, b) in self.diag.iter_mut().zip(other.diag.iter()) {
            *a += s * b;
        }
        for (a, b) in self.lower.iter_mut().zip(other.lower.iter()) {
            *a += s * b;
        }
        for (a, b) in self.upper.iter_mut().zip(other.upper.iter()) {
            *a += s * b;
        }
    }

    /// Replace row i by the identity row (Dirichlet constraint).
    pub fn constrain_row(&mut self, i: usize) {
        self.diag[i] = 1.0;
        if i > 0 {
            self.lower[i - 1] = 0.0;
        }
        if i + 1 < self.n() {
            self.upper[i] = 0.0;
        }
    }

    /// Thomas elimination; non-destructive, returns the solution.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        if denom == 0.0 {
            return Err(CsfError::LinearSolve { residual: f64::INFINITY, iterations: 0 });
        }
        c[0] = self.upper.first().copied().unwrap_or(0.0) / denom;
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if denom == 0.0 || !denom.is_finite() {
                return Err(CsfError::LinearSolve { residual: f64::INFINITY, iterations: i });
            }
            if i < n - 1 {
                c[i] = self.upper[i] / denom;
            }
            d[i] = (rhs[i] - self.lower[i - 1] * d[i - 1]) / denom;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= c[i] * next;
        }
        Ok(x)
    }
}

/// Assemble \int w(x) N_i N_j dx; `lumped` sums rows onto the diagonal.
pub fn assemble_mass(mesh: &Mesh1d, w: &dyn Fn(f64) -> f64, lumped: bool) -> Tridiag {
    let mut m = Tridiag::zeros(mesh.n_nodes());
    for e in 0..mesh.n_elements() {
        let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        let half = 0.5 * (x1 - x0);
        let mid = 0.5 * (x0 + x1);
        for &(xi, wq) in GAUSS_4.iter() {
            let x = mid + half * xi;
            let jw = wq * half * w(x);
            let nl = (x1 - x) / (x1 - x0);
            let nr = 1.0 - nl;
            if lumped {
                m.add(e, e, jw * nl);
                m.add(e + 1, e + 1, jw * nr);
            } else {
                m.add(e, e, jw * nl * nl);
                m.add(e, e + 1, jw * nl * nr);
                m.add(e + 1, e, jw * nr * nl);
                m.add(e + 1, e + 1, jw * nr * nr);
            }
        }
    }
    m
}

/// Assemble \int w(x) N_i' N_j' dx.
pub fn assemble_stiffness(mesh: &Mesh1d, w: &dyn Fn(f64) -> f64) -> Tridiag {
    let mut k = Tridiag::zeros(mesh.n_nodes());
    for e in 0..mesh.n_elements() {
        let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        let h = x1 - x0;
        let half = 0.5 * h;
        let mid = 0.5 * (x0 + x1);
        let mut we = 0.0;
        for &(xi, wq) in GAUSS_4.iter() {
            we += wq * half * w(mid + half * xi);
        }
        let g = we / (h * h);
        k.add(e, e, g);
        k.add(e, e + 1, -g);
        k.add(e + 1, e, -g);
        k.add(e + 1, e + 1, g);
    }
    k
}

/// Assemble \int w(x) N_i N_j' dx (standard Galerkin advection).
pub fn assemble_advection(mesh: &Mesh1d, w: &dyn Fn(f64) -> f64) -> Tridiag {
    let mut c = Tridiag::zeros(mesh.n_nodes());
    for e in 0..mesh.n_elements() {
        let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        let h = x1 - x0;
        let half = 0.5 * h;
        let mid = 0.5 * (x0 + x1);
        for &(xi, wq) in GAUSS_4.iter() {
            let x = mid + half * xi;
            let jw = wq * half * w(x);
            let nl = (x1 - x) / h;
            let nr = 1.0 - nl;
            let dnl = -1.0 / h;
            let dnr = 1.0 / h;
            c.add(e, e, jw * nl * dnl);
            c.add(e, e + 1, jw * nl * dnr);
            c.add(e + 1, e, jw * nr * dnl);
            c.add(e + 1, e + 1, jw * nr * dnr);
        }
    }
    c
}

/// Diffuse-interface 1D scenario: planar interface at x = 0 (gas on the
/// positive side), Dirichlet temperatures at both domain ends.
#[derive(Debug, Clone)]
pub struct Scenario1d {
    pub mesh: Mesh1d,
    pub materials: MaterialSet,
    pub case: CaseKind,
    /// Interface thickness [m].
    pub eps: f64,
    pub initial_temperature: f64,
    pub dirichlet_temperature: f64,
    pub laser: LaserModel,
    pub evaporation: Option<EvaporationSpec>,
    /// Evaporation-induced convection with harmonic-density velocity
    /// profile; requires `evaporation`.
    pub convection: bool,
    pub options: SolveOptions,
}

impl Scenario1d {
    fn validate(&self) -> Result<()> {
        self.materials.validate()?;
        self.options.validate()?;
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(CsfError::invalid(format!("interface thickness must be positive, got {}", self.eps)));
        }
        if self.convection && self.evaporation.is_none() {
            return Err(CsfError::invalid(
                "evaporation-induced convection requires an evaporation model",
            ));
        }
        if !self.initial_temperature.is_finite() || !self.dirichlet_temperature.is_finite() {
            return Err(CsfError::invalid("boundary/initial temperatures must be finite"));
        }
        Ok(())
    }
}

/// Band quadrature point of the regularized source.
struct BandQp {
    elem: usize,
    /// Quadrature weight times Jacobian times delta_i.
    scaled_w: f64,
    /// Shape function values (left, right) at the point.
    shape: (f64, f64),
}

/// Prepared diffuse solver; owns the current temperature state.
pub struct Solver1d {
    scenario: Scenario1d,
    mass: Tridiag,
    stiffness: Tridiag,
    /// Advection matrix per unit mass flux, \int cv/rho_h N_i N_j' dx.
    advection_unit: Option<Tridiag>,
    band: Vec<BandQp>,
    /// \int delta_i N_i dx, the source vector per unit interface flux.
    source_unit: Vec<f64>,
    laser_flux: f64,
    interface_node: usize,
    temperature: Vec<f64>,
    time: f64,
    steps_taken: usize,
    picard_counts: Vec<usize>,
}

impl Solver1d {
    pub fn new(scenario: Scenario1d) -> Result<Self> {
        scenario.validate()?;
        let geom = InterfaceGeometry::Planar1d;
        let mesh = &scenario.mesh;
        let mats = &scenario.materials;
        let case = scenario.case;
        let eps = scenario.eps;

        let chi_at = move |x: f64| indicator_value(-x, eps);
        let cv = |x: f64| mats.heat_capacity_eff(case, chi_at(x));
        let k = |x: f64| mats.conductivity_eff(chi_at(x));
        let mass = assemble_mass(mesh, &cv, scenario.options.lumped_mass);
        let stiffness = assemble_stiffness(mesh, &k);

        let advection_unit = if scenario.convection {
            let rho = mats.density();
            // u = mdot / rho_h; the mdot factor is applied per iterate.
            let w = |x: f64| {
                let chi = chi_at(x);
                let rho_h = 1.0 / ((1.0 - chi) / rho.gas + chi / rho.liquid);
                cv(x) / rho_h
            };
            Some(assemble_advection(mesh, &w))
        } else {
            None
        };

        let delta = ScaledDelta::new(mats.heat_capacity_case(case))?;
        let mut band = Vec::new();
        let mut source_unit = vec![0.0; mesh.n_nodes()];
        for e in 0..mesh.n_elements() {
            let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
            if x0.abs().min(x1.abs()) > 0.5 * eps && x0.signum() == x1.signum() {
                continue;
            }
            let half = 0.5 * (x1 - x0);
            let mid = 0.5 * (x0 + x1);
            for &(xi, wq) in GAUSS_4.iter() {
                let x = mid + half * xi;
                let dv = delta.eval(geom.signed_distance(Point2::new(x, 0.0)), eps);
                if dv == 0.0 {
                    continue;
                }
                let nl = (x1 - x) / (x1 - x0);
                let qp = BandQp {
                    elem: e,
                    scaled_w: wq * half * dv,
                    shape: (nl, 1.0 - nl),
                };
                source_unit[e] += qp.scaled_w * qp.shape.0;
                source_unit[e + 1] += qp.scaled_w * qp.shape.1;
                band.push(qp);
            }
        }

        let laser_flux = match scenario.laser {
            LaserModel::Constant { flux } => flux,
            _ => {
                return Err(CsfError::invalid(
                    "1D scenarios use the constant laser flux model",
                ))
            }
        };

        let n = mesh.n_nodes();
        let interface_node = mesh.nearest_node(0.0);
        Ok(Solver1d {
            temperature: vec![scenario.initial_temperature; n],
            scenario,
            mass,
            stiffness,
            advection_unit,
            band,
            source_unit,
            laser_flux,
            interface_node,
            time: 0.0,
            steps_taken: 0,
            picard_counts: Vec::new(),
        })
    }

    pub fn temperature(&self) -> &[f64] {
        &self.temperature
    }

    pub fn mesh(&self) -> &Mesh1d {
        &self.scenario.mesh
    }

    fn interface_temperature_of(&self, temps: &[f64]) -> f64 {
        self.scenario.mesh.interpolate(temps, 0.0)
    }

    /// Regularized source vector for the given iterate.
    fn source(&self, iterate: &[f64], out: &mut [f64]) -> Result<()> {
        out.fill(0.0);
        let Some(evap) = &self.scenario.evaporation else {
            for (o, s) in out.iter_mut().zip(self.source_unit.iter()) {
                *o = self.laser_flux * s;
            }
            return Ok(());
        };
        let cp_liquid = self.scenario.materials.specific_heat_liquid;
        match evap.method {
            FluxEval::InterfaceValue => {
                let t_gamma = physical_temperature(self.interface_temperature_of(iterate))?;
                let q = self.laser_flux + evap.model.evaporative_cooling(t_gamma, cp_liquid)?;
                for (o, s) in out.iter_mut().zip(self.source_unit.iter()) {
                    *o = q * s;
                }
            }
            FluxEval::Continuous => {
                for qp in &self.band {
                    let t_local = physical_temperature(
                        iterate[qp.elem] * qp.shape.0 + iterate[qp.elem + 1] * qp.shape.1,
                    )?;
                    let q = self.laser_flux + evap.model.evaporative_cooling(t_local, cp_liquid)?;
                    out[qp.elem] += q * qp.scaled_w * qp.shape.0;
                    out[qp.elem + 1] += q * qp.scaled_w * qp.shape.1;
                }
            }
        }
        Ok(())
    }

    fn mass_flux_of(&self, iterate: &[f64]) -> Result<f64> {
        match (&self.scenario.evaporation, self.scenario.convection) {
            (Some(evap), true) => {
                evap.model.mass_flux(physical_temperature(self.interface_temperature_of(iterate))?)
            }
            _ => Ok(0.0),
        }
    }

    /// One implicit Euler step; returns the Picard iteration count.
    pub fn step(&mut self) -> Result<usize> {
        let opts = &self.scenario.options;
        let dt = opts.dt;
        let n = self.temperature.len();
        let mut rhs_base = vec![0.0; n];
        self.mass.matvec(&self.temperature, &mut rhs_base);
        for v in rhs_base.iter_mut() {
            *v /= dt;
        }

        let needs_picard = self.scenario.evaporation.is_some();
        let mut iterate = self.temperature.clone();
        let mut source = vec![0.0; n];
        let mut picard_used = 0;

        for it in 0..opts.picard_max {
            picard_used = it + 1;
            let mut a = self.stiffness.clone();
            a.axpy(1.0 / dt, &self.mass);
            if let Some(adv) = &self.advection_unit {
                let mdot = self.mass_flux_of(&iterate)?;
                a.axpy(mdot, adv);
            }
            self.source(&iterate, &mut source)?;
            let mut rhs = rhs_base.clone();
            for (r, s) in rhs.iter_mut().zip(source.iter()) {
                *r += s;
            }
            let t_bar = self.scenario.dirichlet_temperature;
            a.constrain_row(0);
            a.constrain_row(n - 1);
            rhs[0] = t_bar;
            rhs[n - 1] = t_bar;
            let next = a.solve(&rhs)?;
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
        self.time += dt;
        self.steps_taken += 1;
        self.picard_counts.push(picard_used);
        Ok(picard_used)
    }

    /// Advance from t = 0 to t_end with the fixed time step.
    pub fn solve(mut self) -> Result<SolveReport> {
        let start = Instant::now();
        let steps = self.scenario.options.n_steps();
        for _ in 0..steps {
            self.step()?;
        }
        self.report(start)
    }

    /// Steady state K T = F for temperature-independent sources.
    pub fn solve_steady(mut self) -> Result<SolveReport> {
        if self.scenario.evaporation.is_some() || self.scenario.convection {
            return Err(CsfError::invalid(
                "steady solve supports temperature-independent sources only",
            ));
        }
        let start = Instant::now();
        let n = self.temperature.len();
        let mut rhs = vec![0.0; n];
        for (r, s) in rhs.iter_mut().zip(self.source_unit.iter()) {
            *r = self.laser_flux * s;
        }
        let mut a = self.stiffness.clone();
        a.constrain_row(0);
        a.constrain_row(n - 1);
        rhs[0] = self.scenario.dirichlet_temperature;
        rhs[n - 1] = self.scenario.dirichlet_temperature;
        self.temperature = a.solve(&rhs)?;
        self.steps_taken = 1;
        self.picard_counts.push(1);
        self.report(start)
    }

    fn report(self, start: Instant) -> Result<SolveReport> {
        if self.temperature.iter().any(|v| !v.is_finite()) {
            return Err(CsfError::NonFinite { what: "temperature", context: "final field" });
        }
        let (peak_idx, peak) = self
            .temperature
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| {
                if v > acc.1 {
                    (i, v)
                } else {
                    acc
                }
            });
        Ok(SolveReport {
            interface_temperature: self.interface_temperature_of(&self.temperature),
            peak_temperature: peak,
            peak_location: (self.scenario.mesh.nodes()[peak_idx], 0.0),
            wall_time: start.elapsed(),
            steps: self.steps_taken,
            picard_iterations: self.picard_counts,
            temperature: self.temperature,
        })
    }

    pub fn interface_node(&self) -> usize {
        self.interface_node
    }
}

/// Sharp-interface 1D reference: element-wise phase properties with the
/// material jump at the mesh-aligned interface node, interface flux applied
/// as a nodal point source there.
#[derive(Debug, Clone)]
pub struct SharpScenario1d {
    pub mesh: Mesh1d,
    pub materials: MaterialSet,
    pub initial_temperature: f64,
    pub dirichlet_temperature: f64,
    pub laser_flux: f64,
    pub evaporation: Option<EvaporationSpec>,
    pub convection: bool,
    pub options: SolveOptions,
}

pub struct SharpSolver1d {
    scenario: SharpScenario1d,
    mass: Tridiag,
    stiffness: Tridiag,
    advection_unit: Option<Tridiag>,
    interface_node: usize,
    temperature: Vec<f64>,
    steps_taken: usize,
    picard_counts: Vec<usize>,
}

impl SharpSolver1d {
    pub fn new(scenario: SharpScenario1d) -> Result<Self> {
        scenario.materials.validate()?;
        scenario.options.validate()?;
        let mesh = &scenario.mesh;
        let interface_node = mesh.nearest_node(0.0);
        if mesh.nodes()[interface_node].abs() > 1e-9 * mesh.right().abs().max(1.0) {
            return Err(CsfError::invalid(
                "sharp reference requires a mesh node exactly at the interface x = 0",
            ));
        }
        let mats = &scenario.materials;
        // Element-wise constants: liquid left of the interface, gas right.
        let cv = |x: f64| {
            if x < 0.0 {
                mats.density_liquid * mats.specific_heat_liquid
            } else {
                mats.density_gas * mats.specific_heat_gas
            }
        };
        let k = |x: f64| {
            if x < 0.0 {
                mats.conductivity_liquid
            } else {
                mats.conductivity_gas
            }
        };
        let mass = assemble_mass(mesh, &cv, scenario.options.lumped_mass);
        let stiffness = assemble_stiffness(mesh, &k);
        let advection_unit = if scenario.convection {
            // Piecewise-constant velocity u = mdot / rho(phase).
            let w = |x: f64| {
                if x < 0.0 {
                    cv(x) / mats.density_liquid
                } else {
                    cv(x) / mats.density_gas
                }
            };
            Some(assemble_advection(mesh, &w))
        } else {
            None
        };
        if scenario.convection && scenario.evaporation.is_none() {
            return Err(CsfError::invalid(
                "evaporation-induced convection requires an evaporation model",
            ));
        }
        Ok(SharpSolver1d {
            temperature: vec![scenario.initial_temperature; mesh.n_nodes()],
            mass,
            stiffness,
            advection_unit,
            interface_node,
            scenario,
            steps_taken: 0,
            picard_counts: Vec::new(),
        })
    }

    pub fn temperature(&self) -> &[f64] {
        &self.temperature
    }

    fn point_flux(&self, t_interface: f64) -> Result<f64> {
        let mut q = self.scenario.laser_flux;
        if let Some(evap) = &self.scenario.evaporation {
            q += evap.model.evaporative_cooling(
                physical_temperature(t_interface)?,
                self.scenario.materials.specific_heat_liquid,
            )?;
        }
        Ok(q)
    }

    pub fn step(&mut self) -> Result<usize> {
        let opts = &self.scenario.options;
        let dt = opts.dt;
        let n = self.temperature.len();
        let mut rhs_base = vec![0.0; n];
        self.mass.matvec(&self.temperature, &mut rhs_base);
        for v in rhs_base.iter_mut() {
            *v /= dt;
        }

        let needs_picard = self.scenario.evaporation.is_some();
        let mut iterate = self.temperature.clone();
        let mut picard_used = 0;
        for it in 0..opts.picard_max {
            picard_used = it + 1;
            let mut a = self.stiffness.clone();
            a.axpy(1.0 / dt, &self.mass);
            if let Some(adv) = &self.advection_unit {
                let evap = self.scenario.evaporation.as_ref().expect("validated");
                let mdot = evap.model.mass_flux(physical_temperature(iterate[self.interface_node])?)?;
                a.axpy(mdot, adv);
            }
            let mut rhs = rhs_base.clone();
            rhs[self.interface_node] += self.point_flux(iterate[self.interface_node])?;
            let t_bar = self.scenario.dirichlet_temperature;
            a.constrain_row(0);
            a.constrain_row(n - 1);
            rhs[0] = t_bar;
            rhs[n - 1] = t_bar;
            let next = a.solve(&rhs)?;
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
        let (peak_idx, peak) = self
            .temperature
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        Ok(SolveReport {
            interface_temperature: self.temperature[self.interface_node],
            peak_temperature: peak,
            peak_location: (self.scenario.mesh.nodes()[peak_idx], 0.0),
            wall_time: start.elapsed(),
            steps: self.steps_taken,
            picard_iterations: self.picard_counts,
            temperature: self.temperature,
        })
    }

    /// Steady limit: K T = F with the point flux evaluated by Picard
    /// iteration on the interface temperature when evaporation is present.
    pub fn solve_steady(mut self) -> Result<SolveReport> {
        let start = Instant::now();
        let n = self.temperature.len();
        let opts = self.scenario.options.clone();
        let needs_picard = self.scenario.evaporation.is_some();
        let mut iterate = self.temperature.clone();
        for it in 0..opts.picard_max {
            let mut a = self.stiffness.clone();
            if self.advection_unit.is_some() {
                return Err(CsfError::invalid("steady sharp solve does not support convection"));
            }
            let mut rhs = vec![0.0; n];
            rhs[self.interface_node] = self.point_flux(iterate[self.interface_node])?;
            a.constrain_row(0);
            a.constrain_row(n - 1);
            rhs[0] = self.scenario.dirichlet_temperature;
            rhs[n - 1] = self.scenario.dirichlet_temperature;
            let next = a.solve(&rhs)?;
            let change = next
                .iter()
                .zip(iterate.iter())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            iterate = next;
            if !needs_picard || change < opts.picard_tol {
                break;
            }
            if it + 1 == opts.picard_max {
                return Err(CsfError::PicardStalled { change, iterations: opts.picard_max });
            }
        }
        self.temperature = iterate;
        self.steps_taken = 1;
        self.picard_counts.push(1);
        let (peak_idx, peak) = self
            .temperature
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        Ok(SolveReport {
            interface_temperature: self.temperature[self.interface_node],
            peak_temperature: peak,
            peak_location: (self.scenario.mesh.nodes()[peak_idx], 0.0),
            wall_time: start.elapsed(),
            steps: self.steps_taken,
            picard_iterations: self.picard_counts,
            temperature: self.temperature,
        })
    }
}
