//! Classical and parameter-scaled regularized delta functions.
//!
//! The classical regularized delta is the derivative of the sine-based phase
//! indicator. Parameter-scaled variants additionally weight the delta with
//! an interpolated material property (for heat fluxes, the effective
//! volume-specific heat capacity; for interface forces, the density) and
//! renormalize so that the integral across the band stays exactly 1. This
//! keeps the induced rate of change well balanced across the interface even
//! for property ratios of several orders of magnitude.
//!
//! Normalization factors are derived from the unit-integral condition
//! `c = 1 / \int_0^1 w(u) du` for the case's weight `w`; closed forms are
//! used with series fallbacks where the harmonic expressions degenerate for
//! equal phase values.

use crate::error::{CsfError, Result};
use crate::indicator::{indicator_derivative, indicator_value};

use serde::{Deserialize, Serialize};

/// A material property carried by both phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePair {
    pub gas: f64,
    pub liquid: f64,
}

impl PhasePair {
    pub fn new(gas: f64, liquid: f64) -> Result<Self> {
        if !gas.is_finite() || !liquid.is_finite() {
            return Err(CsfError::invalid(format!(
                "phase values must be finite, got gas={gas}, liquid={liquid}"
            )));
        }
        Ok(PhasePair { gas, liquid })
    }

    fn require_positive(&self, what: &str) -> Result<()> {
        if self.gas <= 0.0 || self.liquid <= 0.0 {
            return Err(CsfError::invalid(format!(
                "{what} interpolation requires positive phase values, got gas={}, liquid={}",
                self.gas, self.liquid
            )));
        }
        Ok(())
    }
}

/// Arithmetic mean interpolation between the phase values.
#[inline]
pub fn interp_arithmetic(pair: PhasePair, chi: f64) -> f64 {
    pair.gas * (1.0 - chi) + pair.liquid * chi
}

/// Harmonic mean interpolation; both phase values must be positive.
pub fn interp_harmonic(pair: PhasePair, chi: f64) -> Result<f64> {
    pair.require_positive("harmonic")?;
    Ok(interp_harmonic_value(pair, chi))
}

#[inline]
fn interp_harmonic_value(pair: PhasePair, chi: f64) -> f64 {
    1.0 / ((1.0 - chi) / pair.gas + chi / pair.liquid)
}

/// Classical regularized delta function: the derivative of the indicator,
/// `(1 + cos(2 pi d / eps)) / eps` on the band `|d| <= eps/2`, zero outside.
#[inline]
pub fn delta_classical(d: f64, eps: f64) -> f64 {
    indicator_derivative(d, eps)
}

/// Short benchmark-facing identifier for the property interpolation cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseKind {
    Classical,
    V1,
    V2,
    V3,
    V4,
}

impl CaseKind {
    pub const ALL: [CaseKind; 5] = [
        CaseKind::Classical,
        CaseKind::V1,
        CaseKind::V2,
        CaseKind::V3,
        CaseKind::V4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseKind::Classical => "classical",
            CaseKind::V1 => "V1",
            CaseKind::V2 => "V2",
            CaseKind::V3 => "V3",
            CaseKind::V4 => "V4",
        }
    }
}

impl std::fmt::Display for CaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CaseKind {
    type Err = CsfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(CaseKind::Classical),
            "V1" | "v1" => Ok(CaseKind::V1),
            "V2" | "v2" => Ok(CaseKind::V2),
            "V3" | "v3" => Ok(CaseKind::V3),
            "V4" | "v4" => Ok(CaseKind::V4),
            other => Err(CsfError::invalid(format!(
                "unknown case name {other:?}; expected one of {{classical, V1, V2, V3, V4}}"
            ))),
        }
    }
}

/// Interpolation case with its scaling parameters: which weight multiplies
/// the classical delta, and therefore which normalization factor applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InterpolationCase {
    /// Unweighted classical delta.
    Classical,
    /// One property interpolated arithmetically (V1; also the density-scaled
    /// delta of interface force models when the pair holds the densities).
    SingleArithmetic { pair: PhasePair },
    /// One property interpolated harmonically (V2).
    SingleHarmonic { pair: PhasePair },
    /// Two properties, both arithmetic (V3).
    DoubleArithmetic { alpha: PhasePair, beta: PhasePair },
    /// Harmonic `alpha` times arithmetic `beta` (V4).
    HarmonicArithmetic { alpha: PhasePair, beta: PhasePair },
}

impl InterpolationCase {
    pub fn kind(&self) -> CaseKind {
        match self {
            InterpolationCase::Classical => CaseKind::Classical,
            InterpolationCase::SingleArithmetic { .. } => CaseKind::V1,
            InterpolationCase::SingleHarmonic { .. } => CaseKind::V2,
            InterpolationCase::DoubleArithmetic { .. } => CaseKind::V3,
            InterpolationCase::HarmonicArithmetic { .. } => CaseKind::V4,
        }
    }

    /// The case's weight evaluated at an indicator value.
    pub fn weight(&self, chi: f64) -> f64 {
        match *self {
            InterpolationCase::Classical => 1.0,
            InterpolationCase::SingleArithmetic { pair } => interp_arithmetic(pair, chi),
            InterpolationCase::SingleHarmonic { pair } => interp_harmonic_value(pair, chi),
            InterpolationCase::DoubleArithmetic { alpha, beta } => {
                interp_arithmetic(alpha, chi) * interp_arithmetic(beta, chi)
            }
            InterpolationCase::HarmonicArithmetic { alpha, beta } => {
                interp_harmonic_value(alpha, chi) * interp_arithmetic(beta, chi)
            }
        }
    }
}

/// Reciprocal of the weight's unit-interval integral; multiplying the
/// weighted delta by this value restores the unit band integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionFactor(pub f64);

/// ln(1 + s) / s, continuous at s = 0.
#[inline]
fn ln1p_over(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        s.ln_1p() / s
    }
}

/// (u - ln(1 + u)) / u^2, continuous at u = 0; series for small |u| where
/// the direct form cancels catastrophically.
#[inline]
fn u_minus_ln1p_over_u2(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        0.5 - u / 3.0 + u * u / 4.0 - u * u * u / 5.0
    } else {
        (u - u.ln_1p()) / (u * u)
    }
}

/// \int_0^1 of the harmonic interpolation of `pair`.
fn unit_integral_harmonic(pair: PhasePair) -> f64 {
    // g*l*ln(g/l)/(g-l) rewritten as l*(1+s)*ln(1+s)/s with s = g/l - 1.
    let s = pair.gas / pair.liquid - 1.0;
    pair.liquid * (1.0 + s) * ln1p_over(s)
}

/// \int_0^1 u / (1/g + u (1/l - 1/g)) du in an equal-phase-stable form.
fn unit_integral_harmonic_times_u(pair: PhasePair) -> f64 {
    let g = 1.0 / pair.gas;
    let l = 1.0 / pair.liquid;
    let u = (l - g) / g;
    u_minus_ln1p_over_u2(u) / g
}

/// Normalization factor enforcing the unit band integral for the case.
///
/// Harmonic cases require strictly positive phase values; equal phase values
/// take the analytic limit of the closed forms.
pub fn correction_factor(case: &InterpolationCase) -> Result<CorrectionFactor> {
    let integral = match *case {
        InterpolationCase::Classical => 1.0,
        InterpolationCase::SingleArithmetic { pair } => 0.5 * (pair.gas + pair.liquid),
        InterpolationCase::SingleHarmonic { pair } => {
            pair.require_positive("harmonic")?;
            unit_integral_harmonic(pair)
        }
        InterpolationCase::DoubleArithmetic { alpha, beta } => {
            (2.0 * alpha.gas * beta.gas
                + alpha.gas * beta.liquid
                + alpha.liquid * beta.gas
                + 2.0 * alpha.liquid * beta.liquid)
                / 6.0
        }
        InterpolationCase::HarmonicArithmetic { alpha, beta } => {
            alpha.require_positive("harmonic")?;
            beta.gas * unit_integral_harmonic(alpha)
                + (beta.liquid - beta.gas) * unit_integral_harmonic_times_u(alpha)
        }
    };
    if !(integral.is_finite() && integral > 0.0) {
        return Err(CsfError::invalid(format!(
            "weight integral must be positive and finite, got {integral} for {case:?}"
        )));
    }
    Ok(CorrectionFactor(1.0 / integral))
}

/// A parameter-scaled delta, prepared once so the band evaluation stays
/// allocation- and branch-free in assembly loops.
#[derive(Debug, Clone, Copy)]
pub struct ScaledDelta {
    case: InterpolationCase,
    correction: f64,
}

impl ScaledDelta {
    pub fn new(case: InterpolationCase) -> Result<Self> {
        let correction = correction_factor(&case)?.0;
        Ok(ScaledDelta { case, correction })
    }

    /// Density-scaled delta for interface force terms (arithmetic density
    /// interpolation with unit-integral normalization).
    pub fn density_scaled(density: PhasePair) -> Result<Self> {
        ScaledDelta::new(InterpolationCase::SingleArithmetic { pair: density })
    }

    pub fn case(&self) -> &InterpolationCase {
        &self.case
    }

    pub fn correction(&self) -> f64 {
        self.correction
    }

    /// delta_i(d) = delta(d) * w(chi(d)) * c.
    #[inline]
    pub fn eval(&self, d: f64, eps: f64) -> f64 {
        let base = delta_classical(d, eps);
        if base == 0.0 {
            return 0.0;
        }
        base * self.case.weight(indicator_value(d, eps)) * self.correction
    }
}

/// Parameter-scaled delta evaluation; prefer [`ScaledDelta`] in loops.
pub fn delta_scaled(case: &InterpolationCase, d: f64, eps: f64) -> Result<f64> {
    Ok(ScaledDelta::new(*case)?.eval(d, eps))
}

/// Temperature rate q * delta_i(d) / cv_eff induced by a continuum surface
/// heat flux `q` when conduction is negligible; `cv_eff` is the effective
/// volume-specific heat capacity at the same location. When the delta weight
/// matches the heat capacity interpolation, the rate collapses onto
/// `q * c * delta_classical`, i.e. a property-ratio-independent profile.
pub fn temperature_rate_shape(
    case: &InterpolationCase,
    q: f64,
    d: f64,
    eps: f64,
    cv_eff: f64,
) -> Result<f64> {
    if !(cv_eff.is_finite() && cv_eff > 0.0) {
        return Err(CsfError::invalid(format!(
            "volume-specific heat capacity must be positive, got {cv_eff}"
        )));
    }
    Ok(q * delta_scaled(case, d, eps)? / cv_eff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;

    fn pair(g: f64, l: f64) -> PhasePair {
        PhasePair::new(g, l).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(interp_arithmetic(pair(1.0, 3.0), 0.5), 2.0);
        assert_eq!(interp_arithmetic(pair(0.02863, 28.63), 1.0), 28.63);
        let cv = pair(4.087 * 11.3, 4087.0 * 1130.0);
        assert!((interp_arithmetic(cv, 0.0) - 46.1831).abs() < 1e-10);
    }

    #[test]
    fn harmonic_examples() {
        assert!((interp_harmonic(pair(1.0, 3.0), 0.5).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(interp_harmonic(pair(7.25, 7.25), 0.3).unwrap(), 7.25);
        assert_eq!(interp_harmonic(pair(1.0, 3.0), 0.0).unwrap(), 1.0);
        assert!(interp_harmonic(pair(0.0, 3.0), 0.5).is_err());
        assert!(interp_harmonic(pair(-1.0, 3.0), 0.5).is_err());
    }

    #[test]
    fn classical_delta_shape() {
        let eps = 2e-6;
        assert_eq!(delta_classical(0.5 * eps, eps), 0.0);
        assert_eq!(delta_classical(-0.5 * eps, eps), 0.0);
        assert!((delta_classical(0.0, eps) - 2.0 / eps).abs() < 1e-9 / eps);
        // Symmetric.
        assert_eq!(delta_classical(0.3 * eps, eps), delta_classical(-0.3 * eps, eps));
        // Unit integral.
        let total = integrate_adaptive(|d| delta_classical(d, eps), -0.5 * eps, 0.5 * eps, 1e-13);
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correction_factor_equal_phase_limits() {
        // V1 with equal phases: c = 1/alpha.
        let c = correction_factor(&InterpolationCase::SingleArithmetic { pair: pair(4.0, 4.0) })
            .unwrap();
        assert!((c.0 - 0.25).abs() < 1e-15);
        // V2 with equal phases falls back to the limit 1/alpha.
        let c = correction_factor(&InterpolationCase::SingleHarmonic { pair: pair(4.0, 4.0) })
            .unwrap();
        assert!((c.0 - 0.25).abs() < 1e-15);
        // V4 equal alpha: 1/(alpha*(beta_g+beta_l)/2).
        let c = correction_factor(&InterpolationCase::HarmonicArithmetic {
            alpha: pair(4.0, 4.0),
            beta: pair(1.0, 3.0),
        })
        .unwrap();
        assert!((c.0 - 1.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn correction_factor_v2_closed_form() {
        let e = std::f64::consts::E;
        let c = correction_factor(&InterpolationCase::SingleHarmonic { pair: pair(e, 1.0) })
            .unwrap();
        assert!((c.0 - 0.6321205588285577).abs() < 1e-14);
        // Cross-check by numeric quadrature of the weight.
        let case = InterpolationCase::SingleHarmonic { pair: pair(e, 1.0) };
        let integral = integrate_adaptive(|u| case.weight(u), 0.0, 1.0, 1e-13);
        assert!((c.0 * integral - 1.0).abs() < 1e-12);
    }

    #[test]
    fn v3_with_unit_beta_matches_v1() {
        let alpha = pair(0.7, 1234.5);
        let c3 = correction_factor(&InterpolationCase::DoubleArithmetic {
            alpha,
            beta: pair(1.0, 1.0),
        })
        .unwrap();
        let c1 = correction_factor(&InterpolationCase::SingleArithmetic { pair: alpha }).unwrap();
        assert!((c3.0 - c1.0).abs() <= 1e-15 * c1.0.abs());
        assert!((c1.0 - 2.0 / (alpha.gas + alpha.liquid)).abs() < 1e-15 * c1.0);
    }

    #[test]
    fn harmonic_cases_reject_nonpositive() {
        assert!(correction_factor(&InterpolationCase::SingleHarmonic { pair: pair(0.0, 1.0) })
            .is_err());
        assert!(correction_factor(&InterpolationCase::HarmonicArithmetic {
            alpha: pair(-2.0, 1.0),
            beta: pair(1.0, 1.0),
        })
        .is_err());
    }

    #[test]
    fn scaled_delta_edge_weight_ratio() {
        // With cv_g = cv_l/1000, the edge values of the scaled delta and the
        // symmetric classical delta differ by the endpoint weight ratio.
        let eps = 2e-6;
        let p = pair(1e-3, 1.0);
        let sd = ScaledDelta::new(InterpolationCase::SingleArithmetic { pair: p }).unwrap();
        let d_edge = 0.5 * eps * (1.0 - 1e-7);
        let gas = sd.eval(-d_edge, eps) / delta_classical(d_edge, eps);
        let liq = sd.eval(d_edge, eps) / delta_classical(d_edge, eps);
        let ratio = gas / liq;
        assert!(
            (ratio - 1e-3).abs() < 1e-6,
            "edge weight ratio {ratio} should approach 1e-3"
        );
    }

    #[test]
    fn equal_phases_reduce_to_classical() {
        let eps = 1.5e-6;
        let cases = [
            InterpolationCase::SingleArithmetic { pair: pair(2.5, 2.5) },
            InterpolationCase::SingleHarmonic { pair: pair(2.5, 2.5) },
            InterpolationCase::DoubleArithmetic { alpha: pair(2.5, 2.5), beta: pair(7.0, 7.0) },
            InterpolationCase::HarmonicArithmetic { alpha: pair(2.5, 2.5), beta: pair(7.0, 7.0) },
        ];
        for case in cases {
            let sd = ScaledDelta::new(case).unwrap();
            for i in 0..101 {
                let d = -0.5 * eps + eps * (i as f64) / 100.0;
                let classical = delta_classical(d, eps);
                let scaled = sd.eval(d, eps);
                assert!(
                    (scaled - classical).abs() <= 1e-12 * classical.abs().max(1.0 / eps),
                    "case {case:?} deviates at d={d}"
                );
            }
        }
    }

    #[test]
    fn rate_shape_cancellation_and_zero_flux() {
        let eps = 2e-6;
        let cv = pair(46.1831, 4.618310e6);
        let case = InterpolationCase::SingleArithmetic { pair: cv };
        let corr = correction_factor(&case).unwrap().0;
        let q = 1e10;
        for i in 1..100 {
            let d = -0.5 * eps + eps * (i as f64) / 100.0;
            let cv_eff = interp_arithmetic(cv, indicator_value(d, eps));
            let rate = temperature_rate_shape(&case, q, d, eps, cv_eff).unwrap();
            let goal = q * corr * delta_classical(d, eps);
            assert!((rate - goal).abs() <= 1e-12 * goal.abs());
            assert_eq!(temperature_rate_shape(&case, 0.0, d, eps, cv_eff).unwrap(), 0.0);
        }
    }

    #[test]
    fn classical_rate_amplified_in_light_phase() {
        // With a heat capacity ratio of 1e3 the classical delta produces a
        // strongly asymmetric rate: near the gas-side support edge the local
        // rate exceeds a midplane-weighted rate (same delta, midplane heat
        // capacity) by roughly half the phase ratio.
        let eps = 2e-6;
        let cv = pair(1e-3, 1.0);
        let q = 1.0;
        let near_gas_edge = -0.49 * eps;
        let chi_edge = indicator_value(near_gas_edge, eps);
        let rate_local = temperature_rate_shape(
            &InterpolationCase::Classical,
            q,
            near_gas_edge,
            eps,
            interp_arithmetic(cv, chi_edge),
        )
        .unwrap();
        let rate_midplane_weighted = q * delta_classical(near_gas_edge, eps) / interp_arithmetic(cv, 0.5);
        let amplification = rate_local / rate_midplane_weighted;
        let expected = interp_arithmetic(cv, 0.5) / interp_arithmetic(cv, chi_edge);
        assert!((amplification - expected).abs() < 1e-12 * expected);
        assert!(amplification > 400.0, "amplification {amplification}");
    }
}
