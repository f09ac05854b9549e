//! Central tolerance declarations.
//!
//! Identities at exactly representable inputs are held to `IDENTITY`;
//! comparisons against finite-difference oracles use the looser `FD_ORACLE`
//! since central differences carry O(h^2) truncation plus cancellation noise.

/// Algebraic identities evaluated in f64 (orthonormality, Parseval,
/// coefficient recurrences).
pub const IDENTITY: f64 = 1e-10;

/// Quadrature exactness for polynomial integrands within a rule's degree.
pub const QUADRATURE_EXACT: f64 = 1e-12;

/// Agreement between independent kernel representations (series vs double
/// integral), relative.
pub const REPRESENTATION: f64 = 1e-8;

/// Agreement against finite-difference oracles, relative.
pub const FD_ORACLE: f64 = 1e-6;

/// Nested finite differences of the kernel (mixed derivatives), relative.
pub const FD_NESTED: f64 = 1e-4;

/// Margin keeping polynomial evaluations away from the endpoints of (0, π).
pub const THETA_MARGIN: f64 = 1e-8;

/// Tolerance for detecting the critical case alpha + beta = -1 in float input.
pub const CRITICAL_EPS: f64 = 1e-12;

/// Relative drift allowed under grid doubling for "finite sup" verdicts.
pub const REFINEMENT_DRIFT: f64 = 0.05;
