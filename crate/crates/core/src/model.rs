//! The dimensionless eigenproblem and its admissibility rules.
//!
//! Everything downstream operates on [`RadialParameters`]: the triple
//! `(gamma^2, a, b)` of the radial equation together with the derived
//! Frobenius exponent `s = |gamma|`. The confining `x^2` term guarantees
//! bound states for all real `a` and `b`; only `gamma^2 < 0` (complex
//! exponent, "fall to the center") is rejected.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    /// `gamma^2 < 0`. In scenario 1 this is the regime
    /// `(a g lambda)^2 > [l + (1-sigma)/2]^2`, which the model does not cover.
    #[error("gamma^2 = {gamma_sq} is negative; the problem has no real Frobenius exponent")]
    NegativeGammaSquared { gamma_sq: f64 },
    #[error("parameter `{name}` = {value} is not finite")]
    NonFinite { name: &'static str, value: f64 },
}

/// Parameters of the radial eigenvalue equation, validated and normalized.
///
/// `s = sqrt(gamma_sq)` is stored because both physical scenarios produce
/// `gamma^2` directly and the exponent is derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialParameters {
    gamma_sq: f64,
    a: f64,
    b: f64,
    s: f64,
}

impl RadialParameters {
    /// Validate and normalize `(gamma^2, a, b)`.
    pub fn new(gamma_sq: f64, a: f64, b: f64) -> Result<Self, ModelError> {
        for (name, value) in [("gamma_sq", gamma_sq), ("a", a), ("b", b)] {
            if !value.is_finite() {
                return Err(ModelError::NonFinite { name, value });
            }
        }
        if gamma_sq < 0.0 {
            return Err(ModelError::NegativeGammaSquared { gamma_sq });
        }
        Ok(Self {
            gamma_sq,
            a,
            b,
            s: gamma_sq.sqrt(),
        })
    }

    /// Parameters with `gamma = a = b = 0`: the plain two-dimensional oscillator.
    pub fn oscillator() -> Self {
        Self {
            gamma_sq: 0.0,
            a: 0.0,
            b: 0.0,
            s: 0.0,
        }
    }

    pub fn gamma_sq(&self) -> f64 {
        self.gamma_sq
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Frobenius exponent `s = |gamma|`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Effective potential of the Liouville-transformed equation
    /// `-u'' + V(x) u = W u`, `u = sqrt(x) psi`:
    ///
    /// `V(x) = (gamma^2 - 1/4)/x^2 + a/x + b x + x^2`.
    ///
    /// Confining for every finite `a`, `b`, which is why bound states exist on
    /// the whole parameter plane.
    pub fn effective_potential(&self, x: f64) -> f64 {
        debug_assert!(x > 0.0, "effective_potential requires x > 0");
        (self.gamma_sq - 0.25) / (x * x) + self.a / x + self.b * x + x * x
    }
}

/// One point of a spectral curve: the `j`-th eigenvalue at fixed parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub w: f64,
    pub level: usize,
    pub params: RadialParameters,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_computes_exponent() {
        let p = RadialParameters::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(p.s(), 0.0);
        let p = RadialParameters::new(4.0, 1.5, -2.0).unwrap();
        assert_eq!(p.s(), 2.0);
        assert_eq!(p.a(), 1.5);
        assert_eq!(p.b(), -2.0);
    }

    #[test]
    fn validate_rejects_negative_gamma_sq() {
        let err = RadialParameters::new(-0.25, 0.0, 0.0).unwrap_err();
        assert_eq!(
            err,
            ModelError::NegativeGammaSquared { gamma_sq: -0.25 }
        );
    }

    #[test]
    fn validate_rejects_non_finite() {
        assert!(matches!(
            RadialParameters::new(f64::NAN, 0.0, 0.0),
            Err(ModelError::NonFinite { name: "gamma_sq", .. })
        ));
        assert!(matches!(
            RadialParameters::new(1.0, f64::INFINITY, 0.0),
            Err(ModelError::NonFinite { name: "a", .. })
        ));
    }

    #[test]
    fn effective_potential_values() {
        let p = RadialParameters::new(0.0, 0.0, 0.0).unwrap();
        assert!((p.effective_potential(1.0) - 0.75).abs() < 1e-15);
        let p = RadialParameters::new(1.0, 0.0, 0.0).unwrap();
        assert!((p.effective_potential(1.0) - 1.75).abs() < 1e-15);
        let p = RadialParameters::new(0.0, std::f64::consts::SQRT_2, 0.0).unwrap();
        let expect = -1.0 / 16.0 + std::f64::consts::SQRT_2 / 2.0 + 4.0;
        assert!((p.effective_potential(2.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn exponent_is_exact_for_perfect_squares() {
        for k in 0..30u32 {
            let p = RadialParameters::new((k * k) as f64, 0.3, -0.7).unwrap();
            assert_eq!(p.s(), k as f64);
        }
    }

    #[test]
    fn potential_confines_at_large_x() {
        for &(g2, a, b) in &[(0.0, -50.0, -50.0), (9.0, 30.0, -8.0), (0.25, 0.0, 12.0)] {
            let p = RadialParameters::new(g2, a, b).unwrap();
            assert!(p.effective_potential(1e4) > 1e7);
        }
    }
}
