//! Jacobi type parameters and degree indices.

use crate::error::{Error, Result};
use crate::tolerance;
use serde::{Deserialize, Serialize};

/// The Jacobi type parameters (α, β), both > -1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPair {
    pub alpha: f64,
    pub beta: f64,
}

impl ParamPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0) {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(ParamPair { alpha, beta })
    }

    /// λ = α + β + 1, the half-sum entering the eigenvalues (n + λ/2)².
    pub fn lambda(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }

    /// Whether the Dijksma-Koornwinder double-integral representation applies
    /// (α, β ≥ -1/2).
    pub fn dk_valid(&self) -> bool {
        self.alpha >= -0.5 && self.beta >= -0.5
    }

    /// The critical case α + β = -1, where 0 is an eigenvalue.
    pub fn critical(&self) -> bool {
        self.lambda().abs() < tolerance::CRITICAL_EPS
    }

    pub fn require_dk_valid(&self) -> Result<()> {
        if self.dk_valid() {
            Ok(())
        } else {
            Err(Error::NotDkValid {
                alpha: self.alpha,
                beta: self.beta,
            })
        }
    }

    /// |n + λ/2|, the spectral frequency of degree n.
    pub fn frequency(&self, n: usize) -> f64 {
        (n as f64 + self.lambda() / 2.0).abs()
    }

    /// λ_n = (n + λ/2)².
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let f = n as f64 + self.lambda() / 2.0;
        f * f
    }

    /// Parameters raised by (ν, η), as produced by the differentiation rule
    /// and the degree-lowering decomposition.
    pub fn raised(&self, nu: f64, eta: f64) -> ParamPair {
        ParamPair {
            alpha: self.alpha + nu,
            beta: self.beta + eta,
        }
    }
}

/// Validates θ ∈ (0, π) up to the configured endpoint margin.
pub fn check_theta(theta: f64) -> Result<()> {
    if theta >= tolerance::THETA_MARGIN && theta <= std::f64::consts::PI - tolerance::THETA_MARGIN {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "theta",
            value: theta,
            domain: "(0, pi)",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_domain() {
        assert!(ParamPair::new(-1.0, 0.0).is_err());
        assert!(ParamPair::new(0.0, -1.5).is_err());
        assert!(ParamPair::new(f64::NAN, 0.0).is_err());
        assert!(ParamPair::new(-0.999, 100.0).is_ok());
    }

    #[test]
    fn flags() {
        let p = ParamPair::new(-0.5, -0.5).unwrap();
        assert!(p.dk_valid());
        assert!(p.critical());
        assert_eq!(p.eigenvalue(0), 0.0);

        let p = ParamPair::new(0.3, 1.7).unwrap();
        assert!(p.dk_valid());
        assert!(!p.critical());
        assert_eq!(p.eigenvalue(2), 12.25);

        let p = ParamPair::new(-0.7, 0.0).unwrap();
        assert!(!p.dk_valid());
    }

    #[test]
    fn eigenvalues_increase_for_nonnegative_lambda() {
        let p = ParamPair::new(0.3, 1.7).unwrap();
        for n in 0..50 {
            assert!(p.eigenvalue(n + 1) > p.eigenvalue(n));
        }
    }

    #[test]
    fn theta_domain() {
        assert!(check_theta(1.0).is_ok());
        assert!(check_theta(0.0).is_err());
        assert!(check_theta(std::f64::consts::PI).is_err());
        assert!(check_theta(-0.3).is_err());
    }
}
