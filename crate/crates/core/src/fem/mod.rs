//! Two-phase transient heat transfer solvers.
//!
//! Linear elements on intervals and bilinear quadrilaterals on Cartesian
//! meshes, implicit Euler in time, continuum surface flux volumetric
//! sources, and the sharp-interface reference solver used as the
//! convergence oracle. Temperature-dependent sources (evaporative cooling,
//! evaporation-induced convection) are handled by Picard iteration within
//! each time step.

pub mod oned;
pub mod twod;

use crate::error::{CsfError, Result};
use crate::evaporation::{EvaporationModel, FluxEval};

use serde::{Deserialize, Serialize};
use std::time::Duration;

/// Evaporative cooling attached to a scenario: the scalar model plus the
/// temperature evaluation variant for the regularized flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaporationSpec {
    pub model: EvaporationModel,
    pub method: FluxEval,
}

/// Time stepping and solver controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Time step [s].
    pub dt: f64,
    /// End time [s].
    pub t_end: f64,
    /// Max-norm temperature change ending the Picard iteration [K].
    pub picard_tol: f64,
    pub picard_max: usize,
    /// Relative residual target of the 2D conjugate gradient solver.
    pub cg_rel_tol: f64,
    pub cg_max_iter: usize,
    /// Row-sum mass lumping, offered for the energy budget diagnostic.
    pub lumped_mass: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            dt: 1e-9,
            t_end: 1e-5,
            picard_tol: 1e-8,
            picard_max: 50,
            cg_rel_tol: 1e-10,
            cg_max_iter: 20_000,
            lumped_mass: false,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(CsfError::invalid(format!("time step must be positive, got {}", self.dt)));
        }
        if self.t_end < self.dt {
            return Err(CsfError::invalid(format!(
                "end time {} must be at least one time step {}",
                self.t_end, self.dt
            )));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}

/// Outcome of a transient (or steady) solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Final nodal temperatures [K].
    pub temperature: Vec<f64>,
    /// Temperature at the closest-point projection of the probe onto the
    /// interface midplane (x = 0 in 1D, the beam-axis depression bottom in
    /// the melt pool geometry) [K].
    pub interface_temperature: f64,
    pub peak_temperature: f64,
    /// Coordinates of the hottest node.
    pub peak_location: (f64, f64),
    pub wall_time: Duration,
    pub steps: usize,
    /// Picard iterations used per step; all 1 for temperature-independent
    /// sources.
    pub picard_iterations: Vec<usize>,
}

/// Guard for temperature-dependent source evaluation inside a solve: a
/// non-positive iterate means the step has left the physical range.
pub(crate) fn physical_temperature(t: f64) -> Result<f64> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(CsfError::Unphysical(format!("temperature {t} K")))
    }
}

/// Fourier number k tau / (rho cp L^2): conductive transfer vs storage.
pub fn fourier_number(conductivity: f64, tau: f64, heat_capacity: f64, length: f64) -> f64 {
    conductivity * tau / (heat_capacity * length * length)
}

/// Element Peclet number rho cp u h / k: convective vs conductive transfer
/// at the element scale.
pub fn peclet_number(heat_capacity: f64, velocity: f64, element_size: f64, conductivity: f64) -> f64 {
    heat_capacity * velocity * element_size / conductivity
}

/// Steady sharp-interface temperature profile of the 1D laser heating
/// problem: a tent with its apex at the interface,
/// T(x) = (T_max - T_bar)(a - |x|)/a + T_bar,
/// T_max = q a / (k_l + k_g) + T_0.
#[derive(Debug, Clone, Copy)]
pub struct SteadyAnalytic1d {
    pub t_max: f64,
    pub t_boundary: f64,
    pub half_width: f64,
}

pub fn steady_analytic_1d(
    q: f64,
    half_width: f64,
    conductivity_gas: f64,
    conductivity_liquid: f64,
    t0: f64,
) -> SteadyAnalytic1d {
    SteadyAnalytic1d {
        t_max: q * half_width / (conductivity_liquid + conductivity_gas) + t0,
        t_boundary: t0,
        half_width,
    }
}

impl SteadyAnalytic1d {
    pub fn eval(&self, x: f64) -> f64 {
        (self.t_max - self.t_boundary) * (self.half_width - x.abs()) / self.half_width
            + self.t_boundary
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensionless_numbers() {
        assert_eq!(fourier_number(1.0, 1.0, 1.0, 1.0), 1.0);
        assert_eq!(fourier_number(1.0, 0.0, 1.0, 1.0), 0.0);
        let fo = fourier_number(28.63, 1e-5, 4.618310e6, 1e-4);
        assert!((fo - 6.19923738337e-3).abs() < 1e-12);

        assert_eq!(peclet_number(1.0, 0.0, 1.0, 1.0), 0.0);
        assert_eq!(peclet_number(2.0, 0.5, 1.0, 2.0), 0.5);
        let pe = peclet_number(46.1831, 5.855038660322462, 1e-7, 0.02863);
        assert!((pe - 9.44477247480e-4).abs() < 1e-12);
        assert!(pe < 1e-2);
    }

    #[test]
    fn steady_analytic_profile() {
        let profile = steady_analytic_1d(1e10, 1e-4, 0.02863, 28.63, 500.0);
        assert!((profile.t_max - 35393.50328330419).abs() < 1e-8);
        assert_eq!(profile.eval(1e-4), 500.0);
        assert_eq!(profile.eval(-1e-4), 500.0);
        assert_eq!(profile.eval(0.0), profile.t_max);
        // q = 0 collapses to the boundary temperature.
        let flat = steady_analytic_1d(0.0, 1e-4, 0.02863, 28.63, 500.0);
        assert_eq!(flat.eval(3e-5), 500.0);
    }
}
