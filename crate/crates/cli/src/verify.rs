//! Self-check suite: delta-model identities and evaporation scalar oracles.
//!
//! Each check re-derives its expected value independently (adaptive Simpson
//! quadrature, closed-form scalar evaluation) rather than trusting the
//! library's own normalization constants, and prints one pass/fail line.

use csflux_core::delta::{
    correction_factor, delta_classical, interp_arithmetic, InterpolationCase, PhasePair,
    ScaledDelta,
};
use csflux_core::evaporation::{CoolingVariant, EvaporationModel};
use csflux_core::indicator::{distance_from_level_set, indicator_value, level_set_from_distance};
use csflux_core::material::MaterialSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Adaptive Simpson quadrature with worklist refinement, independent of the
/// library integrator: the interval with the worst Richardson error estimate
/// is bisected until the summed estimate meets the tolerance or the interval
/// budget runs out.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let coarse = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let fine = (b - a) / 12.0 * (f(a) + 4.0 * f(lm) + 2.0 * f(m) + 4.0 * f(rm) + f(b));
        (fine + (fine - coarse) / 15.0, (fine - coarse).abs() / 15.0)
    }
    let first = panel(f, a, b);
    let mut intervals = vec![(a, b, first.0, first.1)];
    while intervals.len() < 4096 {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= tol {
            break;
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).expect("finite estimate"))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            intervals.push((lo, hi, panel(f, lo, hi).0, 0.0));
            continue;
        }
        let left = panel(f, lo, mid);
        let right = panel(f, mid, hi);
        intervals.push((lo, mid, left.0, left.1));
        intervals.push((mid, hi, right.0, right.1));
    }
    intervals.iter().map(|iv| iv.2).sum()
}

fn band_integral(delta: &ScaledDelta, eps: f64) -> f64 {
    // Split at the midplane so no panel straddles the weight's kink in the
    // higher derivatives at d = 0.
    simpson(&|d| delta.eval(d, eps), -0.5 * eps, 0.0, 5e-13)
        + simpson(&|d| delta.eval(d, eps), 0.0, 0.5 * eps, 5e-13)
}

fn random_pair(rng: &mut ChaCha8Rng) -> PhasePair {
    // Ratios spanning 1e-6 .. 1e6.
    let exp = rng.gen_range(-6.0..6.0);
    let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
    PhasePair {
        gas: scale,
        liquid: scale * 10f64.powf(exp),
    }
}

pub fn run_all() -> Vec<Check> {
    let mut checks = Vec::new();
    let eps = 2e-6;

    // Unit band integral for every delta variant over random phase pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_817);
    let mut worst: f64 = 0.0;
    let mut worst_case = String::new();
    for draw in 0..50 {
        let alpha = random_pair(&mut rng);
        let beta = random_pair(&mut rng);
        let cases = [
            InterpolationCase::Classical,
            InterpolationCase::SingleArithmetic { pair: alpha },
            InterpolationCase::SingleHarmonic { pair: alpha },
            InterpolationCase::DoubleArithmetic { alpha, beta },
            InterpolationCase::HarmonicArithmetic { alpha, beta },
        ];
        for case in cases {
            let delta = ScaledDelta::new(case).expect("positive draws");
            let dev = (band_integral(&delta, eps) - 1.0).abs();
            if dev > worst {
                worst = dev;
                worst_case = format!("draw {draw}, {:?}", delta.case().kind());
            }
        }
    }
    checks.push(Check {
        name: "delta unit integral (all variants, 50 random pairs)",
        passed: worst < 1e-9,
        detail: format!("worst |integral - 1| = {worst:.3e} ({worst_case})"),
    });

    // Change of variables: \int delta(d) f(chi(d)) dd = \int_0^1 f(u) du for
    // polynomials up to degree 4.
    let mut worst: f64 = 0.0;
    for degree in 0..=4usize {
        let f = |u: f64| u.powi(degree as i32);
        let lhs = simpson(&|d| delta_classical(d, eps) * f(indicator_value(d, eps)), -0.5 * eps, 0.0, 1e-13)
            + simpson(&|d| delta_classical(d, eps) * f(indicator_value(d, eps)), 0.0, 0.5 * eps, 1e-13);
        let rhs = 1.0 / (degree as f64 + 1.0);
        worst = worst.max((lhs - rhs).abs());
    }
    checks.push(Check {
        name: "change-of-variables identity (polynomials to degree 4)",
        passed: worst < 1e-10,
        detail: format!("worst deviation = {worst:.3e}"),
    });

    // Temperature-rate cancellation: q delta_i / cv_eff proportional to the
    // classical delta for the matched V1 pairing.
    let mats = MaterialSet::ti64();
    let cv = mats.heat_capacity();
    let case = InterpolationCase::SingleArithmetic { pair: cv };
    let corr = correction_factor(&case).expect("positive").0;
    let delta = ScaledDelta::new(case).expect("positive");
    let q = 1e10;
    let mut worst: f64 = 0.0;
    for i in 1..200 {
        let d = -0.5 * eps + eps * (i as f64) / 200.0;
        let chi = indicator_value(d, eps);
        let rate = q * delta.eval(d, eps) / interp_arithmetic(cv, chi);
        let goal = q * corr * delta_classical(d, eps);
        worst = worst.max((rate - goal).abs() / goal.abs().max(1e-300));
    }
    checks.push(Check {
        name: "temperature-rate cancellation (matched V1 weighting)",
        passed: worst < 1e-12,
        detail: format!("worst relative deviation = {worst:.3e}"),
    });

    // Energy rate invariance: \int q delta_i dd = q for every variant.
    let alpha = cv;
    let beta = mats.specific_heat();
    let mut worst: f64 = 0.0;
    for case in [
        InterpolationCase::Classical,
        InterpolationCase::SingleArithmetic { pair: alpha },
        InterpolationCase::SingleHarmonic { pair: alpha },
        InterpolationCase::DoubleArithmetic { alpha: mats.density(), beta },
        InterpolationCase::HarmonicArithmetic { alpha: mats.density(), beta },
    ] {
        let delta = ScaledDelta::new(case).expect("positive");
        let total = q * band_integral(&delta, eps);
        worst = worst.max((total - q).abs() / q);
    }
    checks.push(Check {
        name: "energy-rate invariance (integrated flux unchanged)",
        passed: worst < 1e-9,
        detail: format!("worst relative deviation = {worst:.3e}"),
    });

    // Evaporation scalar oracles.
    let model = EvaporationModel::from_materials(&mats, CoolingVariant::WithEnthalpy);
    let p_boiling = model.recoil_pressure(mats.boiling_temperature).expect("valid T");
    checks.push(Check {
        name: "recoil pressure at the boiling point (0.54 p_a)",
        passed: p_boiling == 0.54 * mats.ambient_pressure,
        detail: format!("p_v(T_v) = {p_boiling} Pa"),
    });
    // Independent evaluation of the Knight mass flux at T_v.
    let p = 0.54 * mats.ambient_pressure;
    let mdot_expected = 0.82
        * mats.sticking_constant
        * p
        * (mats.molar_mass
            / (2.0 * std::f64::consts::PI * csflux_core::material::GAS_CONSTANT * mats.boiling_temperature))
            .sqrt();
    let mdot = model.mass_flux(mats.boiling_temperature).expect("valid T");
    checks.push(Check {
        name: "vapor mass flux at the boiling point",
        passed: (mdot - mdot_expected).abs() < 0.005 * mdot_expected,
        detail: format!("mdot(T_v) = {mdot:.6} kg/(m^2 s), expected {mdot_expected:.6}"),
    });
    let without = EvaporationModel::from_materials(&mats, CoolingVariant::WithoutEnthalpy);
    let t_ref = mats.enthalpy_reference_temperature;
    let a = model.evaporative_cooling(t_ref, mats.specific_heat_liquid).expect("valid T");
    let b = without.evaporative_cooling(t_ref, mats.specific_heat_liquid).expect("valid T");
    checks.push(Check {
        name: "cooling variants coincide at the enthalpy reference",
        passed: a == b,
        detail: format!("with = {a:.6e}, without = {b:.6e} W/m^2"),
    });

    // Level set <-> distance round trip.
    let mut worst: f64 = 0.0;
    for i in 0..2000 {
        let phi = -0.999 + 1.998 * (i as f64) / 1999.0;
        let d = distance_from_level_set(phi, eps).expect("inside clamp");
        let back = level_set_from_distance(d, eps).expect("finite");
        worst = worst.max((back - phi).abs() / phi.abs().max(1e-3));
    }
    checks.push(Check {
        name: "level set / signed distance round trip (|phi| <= 0.999)",
        passed: worst < 1e-10,
        detail: format!("worst relative deviation = {worst:.3e}"),
    });

    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_verify_checks_pass() {
        for check in run_all() {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }
}
