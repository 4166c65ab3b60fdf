//! Evaporation physics and temperature-dependent continuum surface fluxes.
//!
//! Scalar models: the Anisimov/Khokhlov recoil pressure, the Knight vapor
//! mass flux, and evaporative cooling with or without the sensible enthalpy
//! carried away by the vapor. Field-level helpers evaluate temperature-
//! dependent fluxes across the diffuse band either from local temperatures
//! (continuous evaluation, CE) or from the temperature at the closest point
//! on the interface midplane (interface value, IV), and integrate the
//! density-scaled recoil pressure over the band.

use crate::delta::{PhasePair, ScaledDelta};
use crate::error::{CsfError, Result};
use crate::geometry::{InterfaceGeometry, Point2};
use crate::indicator::indicator_value;
use crate::material::{MaterialSet, GAS_CONSTANT};
use crate::mesh::{Mesh1d, Mesh2d};
use crate::quadrature::GAUSS_4;

use serde::{Deserialize, Serialize};

/// Which enthalpy terms enter the evaporative cooling flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoolingVariant {
    /// q_v = -h_v * mdot(T): latent heat only, appropriate when the vapor
    /// flow (and hence its convective heat transport) is resolved.
    WithoutEnthalpy,
    /// q_v = -(h_v + h(T)) * mdot(T) with h(T) the sensible enthalpy above
    /// the reference temperature, used when the vapor flow is not resolved.
    WithEnthalpy,
}

/// Evaluation variant for temperature-dependent interface fluxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FluxEval {
    /// Continuous evaluation: the flux sees the local temperature T(x).
    Continuous,
    /// Interface value: the flux sees T at the closest point on the
    /// midplane, constant along interface-normal rays.
    InterfaceValue,
}

impl FluxEval {
    pub fn as_str(&self) -> &'static str {
        match self {
            FluxEval::Continuous => "CE",
            FluxEval::InterfaceValue => "IV",
        }
    }
}

impl std::fmt::Display for FluxEval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FluxEval {
    type Err = CsfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CE" | "ce" => Ok(FluxEval::Continuous),
            "IV" | "iv" => Ok(FluxEval::InterfaceValue),
            other => Err(CsfError::invalid(format!(
                "unknown flux evaluation method {other:?}; expected CE or IV"
            ))),
        }
    }
}

/// Evaporation model constants; the molar latent heat is derived, never set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaporationModel {
    /// Specific latent heat of evaporation [J/kg].
    pub latent_heat: f64,
    /// Boiling temperature [K].
    pub boiling_temperature: f64,
    /// Molar mass [kg/mol].
    pub molar_mass: f64,
    /// Sticking constant [-].
    pub sticking_constant: f64,
    /// Ambient pressure [Pa].
    pub ambient_pressure: f64,
    /// Reference temperature of the sensible enthalpy [K].
    pub enthalpy_reference_temperature: f64,
    /// Enthalpy handling of the cooling flux.
    pub cooling: CoolingVariant,
}

impl EvaporationModel {
    pub fn from_materials(materials: &MaterialSet, cooling: CoolingVariant) -> Self {
        EvaporationModel {
            latent_heat: materials.latent_heat,
            boiling_temperature: materials.boiling_temperature,
            molar_mass: materials.molar_mass,
            sticking_constant: materials.sticking_constant,
            ambient_pressure: materials.ambient_pressure,
            enthalpy_reference_temperature: materials.enthalpy_reference_temperature,
            cooling,
        }
    }

    /// Molar latent heat of evaporation h_v * M [J/mol].
    pub fn molar_latent_heat(&self) -> f64 {
        self.latent_heat * self.molar_mass
    }

    fn check_temperature(&self, t: f64) -> Result<()> {
        if !(t.is_finite() && t > 0.0) {
            return Err(CsfError::invalid(format!(
                "temperature must be positive and finite, got {t} K"
            )));
        }
        Ok(())
    }

    /// Anisimov/Khokhlov recoil pressure
    /// p_v(T) = 0.54 p_a exp(-(h_v M / R)(1/T - 1/T_v)) [Pa].
    ///
    /// Strictly increasing in T; for very cold temperatures the exponential
    /// underflows to exactly zero, which is the physically sensible limit.
    pub fn recoil_pressure(&self, t: f64) -> Result<f64> {
        self.check_temperature(t)?;
        Ok(self.recoil_pressure_raw(t))
    }

    #[inline]
    pub(crate) fn recoil_pressure_raw(&self, t: f64) -> f64 {
        let exponent =
            -(self.molar_latent_heat() / GAS_CONSTANT) * (1.0 / t - 1.0 / self.boiling_temperature);
        0.54 * self.ambient_pressure * exponent.exp()
    }

    /// Knight vapor mass flux
    /// mdot(T) = 0.82 c_s p_v(T) sqrt(M / (2 pi R T)) [kg/(m^2 s)].
    pub fn mass_flux(&self, t: f64) -> Result<f64> {
        self.check_temperature(t)?;
        Ok(self.mass_flux_raw(t))
    }

    #[inline]
    pub(crate) fn mass_flux_raw(&self, t: f64) -> f64 {
        0.82 * self.sticking_constant
            * self.recoil_pressure_raw(t)
            * (self.molar_mass / (2.0 * std::f64::consts::PI * GAS_CONSTANT * t)).sqrt()
    }

    /// Evaporative cooling flux [W/m^2], always <= 0. The sensible enthalpy
    /// of the `WithEnthalpy` variant uses a constant liquid heat capacity,
    /// h(T) = cp_liquid (T - T_ref).
    pub fn evaporative_cooling(&self, t: f64, cp_liquid: f64) -> Result<f64> {
        self.check_temperature(t)?;
        Ok(self.evaporative_cooling_raw(t, cp_liquid))
    }

    #[inline]
    pub(crate) fn evaporative_cooling_raw(&self, t: f64, cp_liquid: f64) -> f64 {
        let mdot = self.mass_flux_raw(t);
        match self.cooling {
            CoolingVariant::WithoutEnthalpy => -self.latent_heat * mdot,
            CoolingVariant::WithEnthalpy => {
                -(self.latent_heat + cp_liquid * (t - self.enthalpy_reference_temperature)) * mdot
            }
        }
    }
}

/// Laser heat source models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LaserModel {
    /// Constant interface flux [W/m^2] for the 1D benchmarks.
    Constant { flux: f64 },
    /// Spatially fixed Gaussian beam; the local irradiance is weighted by
    /// the Macaulay bracket of the surface-normal/beam alignment, so faces
    /// pointing away from the beam receive nothing.
    Gaussian2d {
        absorptivity: f64,
        power: f64,
        radius: f64,
        position: Point2,
        direction: Point2,
    },
}

impl LaserModel {
    pub fn gaussian(
        absorptivity: f64,
        power: f64,
        radius: f64,
        position: Point2,
        direction: Point2,
    ) -> Result<Self> {
        if !(absorptivity > 0.0 && absorptivity <= 1.0) {
            return Err(CsfError::invalid(format!(
                "absorptivity must lie in (0, 1], got {absorptivity}"
            )));
        }
        if !(power > 0.0 && radius > 0.0) {
            return Err(CsfError::invalid("laser power and radius must be positive"));
        }
        let n = direction.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(CsfError::invalid("laser direction must be a nonzero vector"));
        }
        Ok(LaserModel::Gaussian2d {
            absorptivity,
            power,
            radius,
            position,
            direction: direction.scale(1.0 / n),
        })
    }

    /// Interface heat flux at `x` for a surface whose unit normal (into the
    /// liquid) is `normal` [W/m^2].
    pub fn flux(&self, x: Point2, normal: Point2) -> f64 {
        match *self {
            LaserModel::Constant { flux } => flux,
            LaserModel::Gaussian2d {
                absorptivity,
                power,
                radius,
                position,
                direction,
            } => {
                let incidence = normal.dot(direction).max(0.0);
                if incidence == 0.0 {
                    return 0.0;
                }
                let rel = x.sub(position);
                let along = rel.dot(direction);
                let d_beam = rel.sub(direction.scale(along)).norm();
                let peak = absorptivity * power * 2.0 / (std::f64::consts::PI * radius * radius);
                peak * incidence * (-2.0 * (d_beam / radius).powi(2)).exp()
            }
        }
    }
}

/// Evaporation-induced 1D convection velocity u(x) = mdot(T_interface) /
/// rho_h(chi(x)) with harmonic density interpolation, evaluated at the mesh
/// nodes. Mass flux continuity rho_h(chi) u is constant by construction.
pub fn convection_velocity_1d(
    t_interface: f64,
    mesh: &Mesh1d,
    geom: &InterfaceGeometry,
    eps: f64,
    density: PhasePair,
    model: &EvaporationModel,
) -> Result<Vec<f64>> {
    let mdot = model.mass_flux(t_interface)?;
    if density.gas <= 0.0 || density.liquid <= 0.0 {
        return Err(CsfError::invalid("densities must be positive"));
    }
    Ok(mesh
        .nodes()
        .iter()
        .map(|&x| {
            let chi = indicator_value(geom.signed_distance(Point2::new(x, 0.0)), eps);
            let rho_h = 1.0 / ((1.0 - chi) / density.gas + chi / density.liquid);
            mdot / rho_h
        })
        .collect())
}

/// Nodal evaluation of a temperature-dependent continuum surface flux
/// flux(T_input(x)) * delta(chi(x)), zero outside the diffuse band.
pub fn volumetric_flux_nodal_1d<F: Fn(f64) -> Result<f64>>(
    mesh: &Mesh1d,
    temperature: &[f64],
    flux: F,
    delta: &ScaledDelta,
    geom: &InterfaceGeometry,
    eps: f64,
    method: FluxEval,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; mesh.n_nodes()];
    for (i, &x) in mesh.nodes().iter().enumerate() {
        let p = Point2::new(x, 0.0);
        let d = geom.signed_distance(p);
        let dv = delta.eval(d, eps);
        if dv == 0.0 {
            continue;
        }
        let t_in = match method {
            FluxEval::Continuous => temperature[i],
            FluxEval::InterfaceValue => {
                let proj = geom.closest_point(p);
                mesh.interpolate(temperature, proj.point.x)
            }
        };
        out[i] = flux(t_in)? * dv;
    }
    Ok(out)
}

/// Band integral of the density-scaled recoil pressure,
/// `\int p_v(T_input(x)) delta_rho(chi(x)) dx` [Pa in 1D].
pub fn recoil_l1_1d(
    mesh: &Mesh1d,
    temperature: &[f64],
    geom: &InterfaceGeometry,
    eps: f64,
    density: PhasePair,
    model: &EvaporationModel,
    method: FluxEval,
) -> Result<f64> {
    if !matches!(geom, InterfaceGeometry::Planar1d) {
        return Err(CsfError::invalid("1D recoil integration expects the planar geometry"));
    }
    let delta_rho = ScaledDelta::density_scaled(density)?;
    let mut total = 0.0;
    for e in 0..mesh.n_elements() {
        let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        // Clip to the band so the compact-support edges never cut through a
        // quadrature interval (planar interface: band is |x| <= eps/2).
        let lo = x0.max(-0.5 * eps);
        let hi = x1.min(0.5 * eps);
        if hi <= lo {
            continue;
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (lo + hi);
        for &(xi, w) in GAUSS_4.iter() {
            let x = mid + half * xi;
            let p = Point2::new(x, 0.0);
            let dv = delta_rho.eval(geom.signed_distance(p), eps);
            if dv == 0.0 {
                continue;
            }
            let t_in = match method {
                FluxEval::Continuous => mesh.interpolate(temperature, x),
                FluxEval::InterfaceValue => {
                    mesh.interpolate(temperature, geom.closest_point(p).point.x)
                }
            };
            total += w * half * model.recoil_pressure(t_in)? * dv;
        }
    }
    Ok(total)
}

/// Band integral of the density-scaled recoil pressure over a 2D domain,
/// `\int p_v(T_input(x)) delta_rho(chi(x)) dA` [N/m].
pub fn recoil_l1_2d(
    mesh: &Mesh2d,
    temperature: &[f64],
    geom: &InterfaceGeometry,
    eps: f64,
    density: PhasePair,
    model: &EvaporationModel,
    method: FluxEval,
) -> Result<f64> {
    let delta_rho = ScaledDelta::density_scaled(density)?;
    let mut total = 0.0;
    for j in 0..mesh.ny_cells() {
        for i in 0..mesh.nx_cells() {
            let (x0, x1) = (mesh.xs()[i], mesh.xs()[i + 1]);
            let (y0, y1) = (mesh.ys()[j], mesh.ys()[j + 1]);
            // Cheap cull on the cell center: skip cells more than a cell
            // diagonal plus half the band away from the midplane.
            let cc = Point2::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
            let diag = (x1 - x0).hypot(y1 - y0);
            if geom.signed_distance(cc).abs() > 0.5 * eps + diag {
                continue;
            }
            let (hx, hy) = (0.5 * (x1 - x0), 0.5 * (y1 - y0));
            for &(xi, wx) in GAUSS_4.iter() {
                for &(eta, wy) in GAUSS_4.iter() {
                    let p = Point2::new(cc.x + hx * xi, cc.y + hy * eta);
                    let dv = delta_rho.eval(geom.signed_distance(p), eps);
                    if dv == 0.0 {
                        continue;
                    }
                    let t_in = match method {
                        FluxEval::Continuous => mesh.interpolate(temperature, p.x, p.y),
                        FluxEval::InterfaceValue => {
                            let proj = geom.closest_point(p);
                            mesh.interpolate(temperature, proj.point.x, proj.point.y)
                        }
                    };
                    total += wx * wy * hx * hy * model.recoil_pressure(t_in)? * dv;
                }
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::MaterialSet;

    fn model(cooling: CoolingVariant) -> EvaporationModel {
        EvaporationModel::from_materials(&MaterialSet::ti64(), cooling)
    }

    #[test]
    fn molar_latent_heat_is_derived() {
        let m = model(CoolingVariant::WithoutEnthalpy);
        assert!((m.molar_latent_heat() - 422552.0).abs() < 1e-6);
    }

    #[test]
    fn recoil_pressure_at_boiling_point() {
        let m = model(CoolingVariant::WithoutEnthalpy);
        assert_eq!(m.recoil_pressure(3133.0).unwrap(), 54000.0);
    }

    #[test]
    fn recoil_pressure_pinned_value() {
        // Independent high-precision evaluation of the closed form at 3500 K.
        let m = model(CoolingVariant::WithoutEnthalpy);
        let p = m.recoil_pressure(3500.0).unwrap();
        assert!((p - 295865.0568487099).abs() < 1e-6 * p, "p={p}");
    }

    #[test]
    fn recoil_pressure_cold_limit_and_errors() {
        let m = model(CoolingVariant::WithoutEnthalpy);
        assert_eq!(m.recoil_pressure(1e-3).unwrap(), 0.0);
        assert!(m.recoil_pressure(0.0).is_err());
        assert!(m.recoil_pressure(-5.0).is_err());
        assert!(m.recoil_pressure(f64::NAN).is_err());
    }

    #[test]
    fn mass_flux_at_boiling_point() {
        let m = model(CoolingVariant::WithoutEnthalpy);
        let mdot = m.mass_flux(3133.0).unwrap();
        assert!((mdot - 23.929543004737900).abs() < 0.005 * mdot, "mdot={mdot}");
    }

    #[test]
    fn mass_flux_zero_sticking() {
        let mut m = model(CoolingVariant::WithoutEnthalpy);
        m.sticking_constant = 0.0;
        assert_eq!(m.mass_flux(3133.0).unwrap(), 0.0);
    }

    #[test]
    fn scalar_models_monotone() {
        let m = model(CoolingVariant::WithoutEnthalpy);
        let mut prev_p = 0.0;
        let mut prev_m = 0.0;
        for i in 0..1000 {
            let t = 500.0 + 4500.0 * (i as f64) / 999.0;
            let p = m.recoil_pressure(t).unwrap();
            let f = m.mass_flux(t).unwrap();
            assert!(p > prev_p, "recoil pressure not increasing at {t} K");
            assert!(f >= prev_m, "mass flux not increasing at {t} K");
            prev_p = p;
            prev_m = f;
        }
    }

    #[test]
    fn cooling_variants() {
        let without = model(CoolingVariant::WithoutEnthalpy);
        let with = model(CoolingVariant::WithEnthalpy);
        let cp = 1130.0;
        let q = without.evaporative_cooling(3133.0, cp).unwrap();
        assert!((q + 2.1153716016188304e8).abs() < 0.005 * q.abs(), "q={q}");
        // Variants coincide exactly at the enthalpy reference temperature.
        let t_ref = with.enthalpy_reference_temperature;
        assert_eq!(
            with.evaporative_cooling(t_ref, cp).unwrap(),
            without.evaporative_cooling(t_ref, cp).unwrap()
        );
        // Ordering for T >= T_ref: with-enthalpy removes at least as much.
        for t in [600.0, 1500.0, 3133.0, 4200.0] {
            let a = with.evaporative_cooling(t, cp).unwrap();
            let b = without.evaporative_cooling(t, cp).unwrap();
            assert!(a <= b && b <= 0.0, "ordering broken at {t} K");
        }
        // Zero mass flux means zero cooling.
        let mut silent = model(CoolingVariant::WithEnthalpy);
        silent.sticking_constant = 0.0;
        assert_eq!(silent.evaporative_cooling(3000.0, cp).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_laser_flux() {
        let laser = LaserModel::gaussian(
            0.35,
            250.0,
            70e-6,
            Point2::new(0.0, 0.0),
            Point2::new(0.0, -1.0),
        )
        .unwrap();
        let peak = 1.1368210220849667e10;
        // Beam axis, normal facing the beam.
        let q = laser.flux(Point2::new(0.0, -50e-6), Point2::new(0.0, -1.0));
        assert!((q - peak).abs() < 1e-4 * peak, "q={q}");
        // One beam radius off axis: peak * e^-2.
        let q = laser.flux(Point2::new(70e-6, -50e-6), Point2::new(0.0, -1.0));
        assert!((q - peak * (-2.0f64).exp()).abs() < 1e-4 * q.abs());
        // Facing away: Macaulay bracket clips to zero.
        assert_eq!(laser.flux(Point2::new(0.0, -50e-6), Point2::new(0.0, 1.0)), 0.0);
        assert!(LaserModel::gaussian(1.5, 250.0, 70e-6, Point2::new(0.0, 0.0), Point2::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn convection_velocity_profile() {
        let mats = MaterialSet::ti64();
        let m = model(CoolingVariant::WithoutEnthalpy);
        let mesh = Mesh1d::uniform(-100e-6, 100e-6, 400).unwrap();
        let eps = 2e-6;
        let u = convection_velocity_1d(
            3133.0,
            &mesh,
            &InterfaceGeometry::Planar1d,
            eps,
            mats.density(),
            &m,
        )
        .unwrap();
        let mdot = m.mass_flux(3133.0).unwrap();
        // Deep gas (x >> eps): u = mdot / rho_g; deep liquid: mdot / rho_l.
        let last = *u.last().unwrap();
        assert!((last - mdot / mats.density_gas).abs() < 1e-12 * last);
        assert!((u[0] - mdot / mats.density_liquid).abs() < 1e-12 * u[0].abs());
        assert!((last - 5.855038660322462).abs() < 1e-10, "u_gas={last}");
        // Mass flux continuity across the band.
        for (i, &x) in mesh.nodes().iter().enumerate() {
            let chi = indicator_value(-x, eps);
            let rho_h = 1.0 / ((1.0 - chi) / mats.density_gas + chi / mats.density_liquid);
            assert!((rho_h * u[i] - mdot).abs() < 1e-12 * mdot);
        }
    }

    #[test]
    fn equal_densities_give_uniform_velocity() {
        let m = model(CoolingVariant::WithoutEnthalpy);
        let mesh = Mesh1d::uniform(-1e-5, 1e-5, 50).unwrap();
        let rho = PhasePair { gas: 7.0, liquid: 7.0 };
        let u = convection_velocity_1d(3133.0, &mesh, &InterfaceGeometry::Planar1d, 2e-6, rho, &m)
            .unwrap();
        let u0 = u[0];
        assert!(u.iter().all(|&v| (v - u0).abs() < 1e-14 * u0));
    }

    #[test]
    fn ce_equals_iv_for_uniform_temperature() {
        let mesh = Mesh1d::uniform(-1e-5, 1e-5, 64).unwrap();
        let temps = vec![3133.0; mesh.n_nodes()];
        let geom = InterfaceGeometry::Planar1d;
        let m = model(CoolingVariant::WithoutEnthalpy);
        let mats = MaterialSet::ti64();
        let delta = ScaledDelta::density_scaled(mats.density()).unwrap();
        let flux = |t: f64| m.recoil_pressure(t);
        let ce = volumetric_flux_nodal_1d(&mesh, &temps, flux, &delta, &geom, 4e-6, FluxEval::Continuous)
            .unwrap();
        let iv = volumetric_flux_nodal_1d(&mesh, &temps, flux, &delta, &geom, 4e-6, FluxEval::InterfaceValue)
            .unwrap();
        for (a, b) in ce.iter().zip(iv.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn recoil_l1_constant_band_reduces_to_point_value() {
        // Uniform T across the band: the band integral collapses to p_v(T).
        let mesh = Mesh1d::uniform(-1e-5, 1e-5, 256).unwrap();
        let temps = vec![3133.0; mesh.n_nodes()];
        let mats = MaterialSet::ti64();
        let m = model(CoolingVariant::WithoutEnthalpy);
        let l1 = recoil_l1_1d(
            &mesh,
            &temps,
            &InterfaceGeometry::Planar1d,
            4e-6,
            mats.density(),
            &m,
            FluxEval::Continuous,
        )
        .unwrap();
        assert!((l1 - 54000.0).abs() < 1e-8 * 54000.0, "l1={l1}");
    }

    #[test]
    fn iv_flux_constant_along_normals_planar() {
        // Linear temperature across the band; IV evaluates everything at x=0.
        let mesh = Mesh1d::uniform(-1e-5, 1e-5, 200).unwrap();
        let temps: Vec<f64> = mesh.nodes().iter().map(|&x| 3000.0 + 2e7 * x).collect();
        let geom = InterfaceGeometry::Planar1d;
        let m = model(CoolingVariant::WithoutEnthalpy);
        let delta = ScaledDelta::density_scaled(MaterialSet::ti64().density()).unwrap();
        let eps = 4e-6;
        let iv = volumetric_flux_nodal_1d(
            &mesh,
            &temps,
            |t| m.recoil_pressure(t),
            &delta,
            &geom,
            eps,
            FluxEval::InterfaceValue,
        )
        .unwrap();
        let p0 = m.recoil_pressure(3000.0).unwrap();
        for (i, &x) in mesh.nodes().iter().enumerate() {
            let dv = delta.eval(-x, eps);
            assert!((iv[i] - p0 * dv).abs() <= 1e-12 * (p0 * dv).abs());
        }
    }
}
