//! Harmonic analysis of Jacobi expansions on (0, π).
//!
//! The library evaluates the orthonormal trigonometric Jacobi system, the
//! Jacobi-Poisson kernel through three independent routes (spectral series,
//! Dijksma-Koornwinder double integral, closed form at α = β = -1/2), the
//! spectral operators built on the semigroup (imaginary powers, Riesz
//! transforms, maximal operator, mixed square functions), and a verification
//! harness that numerically certifies the Calderón-Zygmund standard estimates
//! for the associated kernels.

pub mod error;
pub mod kernel;
pub mod ops;
pub mod params;
pub mod phi;
pub mod quad;
pub mod special;
pub mod tolerance;
pub mod verify;

pub use error::Error;
pub use params::ParamPair;
pub use quad::QuadratureRule;
