//! Smoothed phase indicator and regularized level set conversions.
//!
//! The indicator follows the sine-based mollifier of Sussman/Peskin: it is 0
//! in the gas, 1 in the liquid, transitions over the band `|d| <= eps/2` and
//! is C1 continuous, which makes its derivative a continuous regularized
//! delta function with exactly unit integral.

use crate::error::{CsfError, Result};

use std::f64::consts::PI;

/// Smoothed phase indicator chi(d) in [0, 1].
///
/// chi = 1/2 + d/eps + sin(2 pi d / eps) / (2 pi) inside the band,
/// saturating at 0 (gas) and 1 (liquid) outside.
pub fn indicator(d: f64, eps: f64) -> Result<f64> {
    if !d.is_finite() || !eps.is_finite() || eps <= 0.0 {
        return Err(CsfError::invalid(format!(
            "indicator requires finite d and positive eps, got d={d}, eps={eps}"
        )));
    }
    Ok(indicator_value(d, eps))
}

/// Unchecked indicator kernel for hot loops; inputs must be finite, eps > 0.
#[inline]
pub fn indicator_value(d: f64, eps: f64) -> f64 {
    if d <= -0.5 * eps {
        0.0
    } else if d >= 0.5 * eps {
        1.0
    } else {
        let s = d / eps;
        0.5 + s + (2.0 * PI * s).sin() / (2.0 * PI)
    }
}

/// Derivative of the indicator with respect to the signed distance:
/// (1 + cos(2 pi d / eps)) / eps on the band, 0 outside. This is the
/// classical regularized delta function (the norm of the indicator
/// gradient for a signed-distance argument).
#[inline]
pub fn indicator_derivative(d: f64, eps: f64) -> f64 {
    if d.abs() >= 0.5 * eps {
        0.0
    } else {
        (1.0 + (2.0 * PI * d / eps).cos()) / eps
    }
}

/// Regularized level set from the signed distance: phi = tanh(3 d / eps),
/// an odd function with phi(0) = 0 and range (-1, 1).
pub fn level_set_from_distance(d: f64, eps: f64) -> Result<f64> {
    if !d.is_finite() || !eps.is_finite() || eps <= 0.0 {
        return Err(CsfError::invalid(format!(
            "level set conversion requires finite d and positive eps, got d={d}, eps={eps}"
        )));
    }
    Ok((3.0 * d / eps).tanh())
}

/// Signed distance from a regularized level set value:
/// d = (eps / 6) ln((1 + phi)/(1 - phi)).
///
/// Values of |phi| at or beyond 1 are rejected; values inside (1 - 1e-12, 1)
/// are clamped to 1 - 1e-12 before the logarithm so that saturated level set
/// fields map to a large but finite distance.
pub fn distance_from_level_set(phi: f64, eps: f64) -> Result<f64> {
    if !phi.is_finite() || phi.abs() >= 1.0 {
        return Err(CsfError::SaturatedLevelSet(phi));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(CsfError::invalid(format!(
            "level set conversion requires positive eps, got {eps}"
        )));
    }
    const CLAMP: f64 = 1.0 - 1e-12;
    let p = phi.clamp(-CLAMP, CLAMP);
    Ok(eps / 6.0 * ((1.0 + p) / (1.0 - p)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_boundary_values() {
        let eps = 2e-6;
        assert_eq!(indicator(0.0, eps).unwrap(), 0.5);
        assert_eq!(indicator(0.5 * eps, eps).unwrap(), 1.0);
        assert_eq!(indicator(-0.5 * eps, eps).unwrap(), 0.0);
        assert_eq!(indicator(eps, eps).unwrap(), 1.0);
    }

    #[test]
    fn indicator_quarter_band() {
        // chi(eps/4) = 3/4 + sin(pi/2)/(2 pi)
        let v = indicator(0.5e-6, 2e-6).unwrap();
        assert!((v - 0.9091549430918953).abs() < 1e-15);
    }

    #[test]
    fn indicator_rejects_non_finite() {
        assert!(indicator(f64::NAN, 1.0).is_err());
        assert!(indicator(0.0, f64::INFINITY).is_err());
        assert!(indicator(0.0, 0.0).is_err());
    }

    #[test]
    fn indicator_monotone_and_c1() {
        let eps = 3e-6;
        let n = 4000;
        let mut prev = indicator_value(-0.7 * eps, eps);
        for i in 1..=n {
            let d = -0.7 * eps + 1.4 * eps * (i as f64) / (n as f64);
            let v = indicator_value(d, eps);
            assert!(v >= prev - 1e-15, "non-monotone at d={d}");
            prev = v;
        }
        // Derivative vanishes continuously at the band edges.
        assert!(indicator_derivative(0.5 * eps - 1e-12 * eps, eps) < 1e-6 / eps);
        assert_eq!(indicator_derivative(0.5 * eps, eps), 0.0);
    }

    #[test]
    fn derivative_integrates_to_one() {
        // Numeric quadrature of the finite-difference derivative of chi.
        let eps = 2e-6;
        let h = eps * 1e-7;
        let fd = |d: f64| (indicator_value(d + h, eps) - indicator_value(d - h, eps)) / (2.0 * h);
        let total = crate::quadrature::integrate_adaptive(fd, -0.5 * eps, 0.5 * eps, 1e-13);
        assert!((total - 1.0).abs() < 1e-9, "integral={total}");
    }

    #[test]
    fn level_set_basics() {
        let eps = 5e-6;
        assert_eq!(level_set_from_distance(0.0, eps).unwrap(), 0.0);
        let v = level_set_from_distance(eps / 3.0, eps).unwrap();
        assert!((v - 0.7615941559557649).abs() < 1e-15);
        // Odd symmetry.
        let w = level_set_from_distance(-eps / 3.0, eps).unwrap();
        assert_eq!(v, -w);
    }

    #[test]
    fn level_set_inverse_pair() {
        let eps = 5e-6;
        let phi = (3.0f64).tanh();
        let d = distance_from_level_set(phi, eps).unwrap();
        assert!((d - eps).abs() < 1e-12 * eps);
        let d2 = distance_from_level_set(-phi, eps).unwrap();
        assert!((d2 + eps).abs() < 1e-12 * eps);
    }

    #[test]
    fn level_set_saturation() {
        assert!(matches!(
            distance_from_level_set(1.0, 1.0),
            Err(CsfError::SaturatedLevelSet(_))
        ));
        assert!(distance_from_level_set(f64::NAN, 1.0).is_err());
        // Just inside the clamp window: finite result.
        let d = distance_from_level_set(1.0 - 1e-13, 1e-6).unwrap();
        assert!(d.is_finite());
    }
}
