//! The Jacobi-Poisson kernel H_t^{α,β}(θ,φ) and its mixed derivatives
//! ∂_t^M ∂_θ^N, through three routes:
//!
//! * a spectral series with a rigorous geometric tail bound,
//! * the Dijksma-Koornwinder double-integral representation
//!   H_t = c_{α,β} sinh(t/2) ∬ dΠ_α dΠ_β / (cosh(t/2) - 1 + q)^{α+β+2},
//! * the closed form at α = β = -1/2 (disc Poisson kernel on even functions).
//!
//! The three must agree; the integration tests lean on that redundancy.

use crate::error::{Error, Result};
use crate::params::{check_theta, ParamPair};
use crate::phi::PhiTerms;
use crate::quad::{pi_measure_rule, total_mass, MeasureId, QuadratureRule};
use crate::special::{eval_gegenbauer, eval_jacobi, DeltaExpansion};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// Truncation cap for the series route.
pub const SERIES_CAP: usize = 10_000;
/// Below this t the series route refuses to start (the cap would be hit).
pub const SERIES_T_MIN: f64 = 0.01;
/// Diagonal rejection window: |θ-φ| below this with t < DIAGONAL_T_MAX.
pub const DIAGONAL_SEP_MIN: f64 = 1e-4;
pub const DIAGONAL_T_MAX: f64 = 0.05;

/// A point of the double-integral geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QPoint {
    pub theta: f64,
    pub phi: f64,
    pub u: f64,
    pub v: f64,
}

impl QPoint {
    pub fn new(theta: f64, phi: f64, u: f64, v: f64) -> Result<Self> {
        check_theta(theta)?;
        check_theta(phi)?;
        for (name, w) in [("u", u), ("v", v)] {
            if !(-1.0..=1.0).contains(&w) {
                return Err(Error::Domain {
                    name,
                    value: w,
                    domain: "[-1, 1]",
                });
            }
        }
        Ok(QPoint { theta, phi, u, v })
    }
}

/// q(θ,φ,u,v) = 1 - u sin(θ/2)sin(φ/2) - v cos(θ/2)cos(φ/2) ∈ [0, 2].
pub fn q_value(p: QPoint) -> f64 {
    1.0 - p.u * (p.theta / 2.0).sin() * (p.phi / 2.0).sin()
        - p.v * (p.theta / 2.0).cos() * (p.phi / 2.0).cos()
}

/// The equivalent form 1 - cos((θ-φ)/2) + (1-u)sin(θ/2)sin(φ/2)
/// + (1-v)cos(θ/2)cos(φ/2), used as an algebraic cross-check.
pub fn q_value_alt(p: QPoint) -> f64 {
    // 1 - cos((θ-φ)/2) written as 2 sin²((θ-φ)/4) to stay fully accurate
    // near the diagonal.
    2.0 * ((p.theta - p.phi) / 4.0).sin().powi(2)
        + (1.0 - p.u) * (p.theta / 2.0).sin() * (p.phi / 2.0).sin()
        + (1.0 - p.v) * (p.theta / 2.0).cos() * (p.phi / 2.0).cos()
}

/// ∂_θ q = -(u/2) cos(θ/2)sin(φ/2) + (v/2) sin(θ/2)cos(φ/2).
pub fn q_partial_theta(p: QPoint) -> f64 {
    -p.u / 2.0 * (p.theta / 2.0).cos() * (p.phi / 2.0).sin()
        + p.v / 2.0 * (p.theta / 2.0).sin() * (p.phi / 2.0).cos()
}

/// ∂_φ q, by the θ ↔ φ symmetry of q.
pub fn q_partial_phi(p: QPoint) -> f64 {
    q_partial_theta(QPoint {
        theta: p.phi,
        phi: p.theta,
        ..p
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Series,
    DkIntegral,
    ClosedForm,
}

impl std::fmt::Display for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Representation::Series => "series",
            Representation::DkIntegral => "dk_integral",
            Representation::ClosedForm => "closed_form",
        })
    }
}

/// One evaluation of ∂_t^M ∂_θ^N H_t(θ,φ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEvaluation {
    pub value: f64,
    pub t: f64,
    pub dt_order: usize,
    pub dtheta_order: usize,
    pub representation: Representation,
    /// Series: number of retained terms. Integral: quadrature order.
    pub truncation_or_order: usize,
    /// Series: rigorous tail bound. Integral: Richardson estimate.
    pub est_error: f64,
}

fn check_common(t: f64, theta: f64, phi: f64) -> Result<()> {
    check_theta(theta)?;
    check_theta(phi)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            domain: "(0, inf)",
        });
    }
    let sep = (theta - phi).abs();
    if sep < DIAGONAL_SEP_MIN && t < DIAGONAL_T_MAX {
        return Err(Error::DiagonalSingularity { separation: sep, t });
    }
    Ok(())
}

/// Series route: Σ_n (-|n+λ/2|)^M e^{-t|n+λ/2|} δ^N 𝒫_n(θ) 𝒫_n(φ), truncated
/// when a rigorous tail bound drops below `tol`.
///
/// The tail is controlled by |term_n| ≤ A e^{-tn} (n+1)^p with
/// p = 2(α+β) + 5 + M + 3N (the sup-norm growth of 𝒫_n, one power of n per
/// t-derivative, and n^{1+2} per θ-derivative from the differentiation rule
/// and the parameter raise); A is calibrated as the running maximum of
/// |term_n| / (e^{-tn}(n+1)^p), so the resulting geometric-ratio bound
/// inherits rigor from the growth estimate.
pub fn kernel_series(
    params: ParamPair,
    t: f64,
    theta: f64,
    phi: f64,
    dt_order: usize,
    dtheta_order: usize,
    tol: f64,
) -> Result<KernelEvaluation> {
    check_common(t, theta, phi)?;
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            domain: "(0, inf)",
        });
    }
    if t < SERIES_T_MIN {
        return Err(Error::SeriesTruncation { cap: SERIES_CAP, t });
    }
    let p_exp =
        2.0 * (params.alpha + params.beta) + 5.0 + dt_order as f64 + 3.0 * dtheta_order as f64;
    let growth = |n: usize| (-t * n as f64).exp() * (n as f64 + 1.0).powf(p_exp.max(0.0));
    let mut sum = 0.0;
    let mut amp: f64 = 0.0;
    let mut n = 0usize;
    let est_error = loop {
        let mu = params.frequency(n);
        let theta_factor = if dtheta_order == 0 {
            crate::special::eval_normalized(params, n, theta)?
        } else {
            DeltaExpansion::new(params, n, dtheta_order).eval(theta)?
        };
        let term = (-mu).powi(dt_order as i32)
            * (-t * mu).exp()
            * theta_factor
            * crate::special::eval_normalized(params, n, phi)?;
        sum += term;
        amp = amp.max(term.abs() / growth(n));
        // Geometric-ratio tail: Σ_{k>n} A e^{-tk}(k+1)^p ≤ A f(n+1)/(1-ρ).
        let rho = (-t).exp() * ((n as f64 + 3.0) / (n as f64 + 2.0)).powf(p_exp.max(0.0));
        if n >= 5 && rho < 1.0 {
            let tail = amp * growth(n + 1) / (1.0 - rho);
            if tail < tol {
                break tail;
            }
        }
        n += 1;
        if n > SERIES_CAP {
            return Err(Error::SeriesTruncation { cap: SERIES_CAP, t });
        }
    };
    Ok(KernelEvaluation {
        value: sum,
        t,
        dt_order,
        dtheta_order,
        representation: Representation::Series,
        truncation_or_order: n + 1,
        est_error,
    })
}

/// c_{α,β} = 2^{-α-β-1} / m_{α,β}(0,π).
pub fn kernel_constant(params: ParamPair) -> f64 {
    2f64.powf(-params.alpha - params.beta - 1.0) / total_mass(params)
}

/// Evaluates the double integral of a Φ-derivative term list against the
/// provided Π rules, without the Richardson refinement. Shared with the
/// verifier, which batches many (θ,φ) pairs against fixed rules.
pub fn dk_raw(
    terms: &PhiTerms,
    t: f64,
    theta: f64,
    phi: f64,
    rule_a: &QuadratureRule,
    rule_b: &QuadratureRule,
) -> f64 {
    let (sh, ch) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let (sp, cp) = ((phi / 2.0).sin(), (phi / 2.0).cos());
    let mut acc = 0.0;
    for (&u, &wu) in rule_a.nodes.iter().zip(&rule_a.weights) {
        for (&v, &wv) in rule_b.nodes.iter().zip(&rule_b.weights) {
            let q = 1.0 - u * sh * sp - v * ch * cp;
            let q1 = -u / 2.0 * ch * sp + v / 2.0 * sh * cp;
            acc += wu * wv * terms.eval(t, q, q1);
        }
    }
    acc
}

fn rule_gamma(rule: &QuadratureRule) -> Result<f64> {
    match rule.measure {
        MeasureId::Pi { gamma } => Ok(gamma),
        _ => Err(Error::Parse(
            "kernel_dk_integral expects Pi-measure rules".into(),
        )),
    }
}

/// Dijksma-Koornwinder route: c_{α,β} ∬ ∂_t^M ∂_θ^N Φ(t, q(θ,φ,u,v)) dΠ_α dΠ_β.
/// The Richardson error estimate re-evaluates at doubled quadrature order.
pub fn kernel_dk_integral(
    params: ParamPair,
    t: f64,
    theta: f64,
    phi: f64,
    dt_order: usize,
    dtheta_order: usize,
    rule_a: &QuadratureRule,
    rule_b: &QuadratureRule,
) -> Result<KernelEvaluation> {
    params.require_dk_valid()?;
    check_common(t, theta, phi)?;
    let terms = PhiTerms::new(params, dt_order, dtheta_order);
    let c = kernel_constant(params);
    let value = c * dk_raw(&terms, t, theta, phi, rule_a, rule_b);
    let doubled_a = pi_measure_rule(rule_gamma(rule_a)?, 2 * rule_a.order)?;
    let doubled_b = pi_measure_rule(rule_gamma(rule_b)?, 2 * rule_b.order)?;
    let refined = c * dk_raw(&terms, t, theta, phi, &doubled_a, &doubled_b);
    Ok(KernelEvaluation {
        value,
        t,
        dt_order,
        dtheta_order,
        representation: Representation::DkIntegral,
        truncation_or_order: rule_a.order.max(rule_b.order),
        est_error: (value - refined).abs(),
    })
}

/// Convenience wrapper constructing default Π rules of the given order.
pub fn kernel_dk(
    params: ParamPair,
    t: f64,
    theta: f64,
    phi: f64,
    dt_order: usize,
    dtheta_order: usize,
    order: usize,
) -> Result<KernelEvaluation> {
    params.require_dk_valid()?;
    let rule_a = pi_measure_rule(params.alpha, order)?;
    let rule_b = pi_measure_rule(params.beta, order)?;
    kernel_dk_integral(params, t, theta, phi, dt_order, dtheta_order, &rule_a, &rule_b)
}

/// H_t^{-1/2,-1/2}(θ,φ) = (1/2π)[sinh t/(cosh t - cos(θ-φ))
/// + sinh t/(cosh t - cos(θ+φ))].
pub fn kernel_closed_form(t: f64, theta: f64, phi: f64) -> Result<f64> {
    check_common(t, theta, phi)?;
    let (sh, ch) = (t.sinh(), t.cosh());
    Ok((sh / (ch - (theta - phi).cos()) + sh / (ch - (theta + phi).cos())) / (2.0 * PI))
}

/// Residual |LHS - RHS| of the Dijksma-Koornwinder product formula
///
///   P_n^{α,β}(1-2s²) P_n^{α,β}(1-2t²)
///     = Γ(α+β+1)Γ(n+α+1)Γ(n+β+1) / (n! Γ(n+α+β+1)Γ(α+1)Γ(β+1))
///       × ∬ C_{2n}^{α+β+1}(ust + v√(1-s²)√(1-t²)) dΠ_α(u) dΠ_β(v),
///
/// with the Γ-prefactor already absorbing the Π normalizations.
pub fn dk_product_formula_check(
    params: ParamPair,
    n: usize,
    s: f64,
    t: f64,
    order: usize,
) -> Result<f64> {
    if !(params.alpha > -0.5 && params.beta > -0.5) {
        return Err(Error::NotDkValid {
            alpha: params.alpha,
            beta: params.beta,
        });
    }
    for (name, w) in [("s", s), ("t", t)] {
        if !(0.0 < w && w < 1.0) {
            return Err(Error::Domain {
                name,
                value: w,
                domain: "(0, 1)",
            });
        }
    }
    let (a, b) = (params.alpha, params.beta);
    let lhs = eval_jacobi(params, n, 1.0 - 2.0 * s * s)?
        * eval_jacobi(params, n, 1.0 - 2.0 * t * t)?;
    let ln_pref = ln_gamma(a + b + 1.0) + ln_gamma(n as f64 + a + 1.0)
        + ln_gamma(n as f64 + b + 1.0)
        - ln_gamma(n as f64 + 1.0)
        - ln_gamma(n as f64 + a + b + 1.0)
        - ln_gamma(a + 1.0)
        - ln_gamma(b + 1.0);
    let rule_a = pi_measure_rule(a, order)?;
    let rule_b = pi_measure_rule(b, order)?;
    let (rs, rt) = ((1.0 - s * s).sqrt(), (1.0 - t * t).sqrt());
    let lambda = a + b + 1.0;
    let mut integral = 0.0;
    for (&u, &wu) in rule_a.nodes.iter().zip(&rule_a.weights) {
        for (&v, &wv) in rule_b.nodes.iter().zip(&rule_b.weights) {
            integral += wu * wv * eval_gegenbauer(lambda, 2 * n, u * s * t + v * rs * rt);
        }
    }
    Ok((lhs - ln_pref.exp() * integral).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::eval_normalized;
    use crate::tolerance;
    use crate::quad::jacobi_measure_rule;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(a: f64, b: f64) -> ParamPair {
        ParamPair::new(a, b).unwrap()
    }

    #[test]
    fn q_forms_agree_and_bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let pt = QPoint::new(
                rng.gen_range(0.01..PI - 0.01),
                rng.gen_range(0.01..PI - 0.01),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
            .unwrap();
            let q = q_value(pt);
            assert_abs_diff_eq!(q, q_value_alt(pt), epsilon = 1e-14);
            let lo = 2.0 * ((pt.theta - pt.phi) / 4.0).sin().powi(2);
            let hi = 2.0 * ((pt.theta - pt.phi) / 4.0).cos().powi(2);
            assert!(q >= lo - 1e-14 && q <= hi + 1e-14);
        }
        // Extremes in (u,v).
        let pt = QPoint::new(1.0, 2.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            q_value(pt),
            2.0 * ((pt.theta - pt.phi) / 4.0).sin().powi(2),
            epsilon = 1e-15
        );
        let pt = QPoint::new(1.3, 1.3, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(q_value(pt), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn q_partials_match_finite_differences() {
        let h = 1e-6;
        let pt = QPoint::new(1.1, 2.3, 0.4, -0.7).unwrap();
        let fd_theta = (q_value(QPoint { theta: pt.theta + h, ..pt })
            - q_value(QPoint { theta: pt.theta - h, ..pt }))
            / (2.0 * h);
        let fd_phi = (q_value(QPoint { phi: pt.phi + h, ..pt })
            - q_value(QPoint { phi: pt.phi - h, ..pt }))
            / (2.0 * h);
        assert_abs_diff_eq!(q_partial_theta(pt), fd_theta, epsilon = 1e-9);
        assert_abs_diff_eq!(q_partial_phi(pt), fd_phi, epsilon = 1e-9);
        // At the minimum q(θ,θ,1,1) = 0 the θ-derivative vanishes.
        let min = QPoint::new(1.3, 1.3, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(q_partial_theta(min), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_limits_and_symmetry() {
        // Large t: tends to the total-mass-normalized constant 1/π.
        assert_abs_diff_eq!(
            kernel_closed_form(30.0, 1.0, 2.0).unwrap(),
            1.0 / PI,
            epsilon = 1e-10
        );
        // Disc Poisson kernel combination at r = e^{-t}.
        let (t, theta, phi) = (0.7f64, 1.0, 2.0);
        let r = (-t).exp();
        let poisson = |x: f64| {
            (1.0 - r * r) / (2.0 * PI * (1.0 - 2.0 * r * x.cos() + r * r))
        };
        assert_relative_eq!(
            kernel_closed_form(t, theta, phi).unwrap(),
            poisson(theta - phi) + poisson(theta + phi),
            max_relative = 1e-13
        );
        // Symmetry and evenness in θ-φ.
        assert_relative_eq!(
            kernel_closed_form(t, theta, phi).unwrap(),
            kernel_closed_form(t, phi, theta).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn series_matches_closed_form_chebyshev_case() {
        let params = p(-0.5, -0.5);
        for &(t, theta, phi) in &[(0.3, 1.0, 2.0), (1.5, 0.4, 2.8), (5.0, 2.0, 2.5)] {
            let eval = kernel_series(params, t, theta, phi, 0, 0, 1e-12).unwrap();
            assert_relative_eq!(
                eval.value,
                kernel_closed_form(t, theta, phi).unwrap(),
                max_relative = tolerance::REPRESENTATION
            );
            assert!(eval.est_error <= 1e-12);
        }
    }

    #[test]
    fn series_symmetry() {
        let params = p(0.3, 1.7);
        let a = kernel_series(params, 0.8, 1.0, 2.0, 0, 0, 1e-12).unwrap();
        let b = kernel_series(params, 0.8, 2.0, 1.0, 0, 0, 1e-12).unwrap();
        assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-12);
    }

    #[test]
    fn series_rejects_tiny_t_and_diagonal() {
        let params = p(0.3, 1.7);
        assert!(matches!(
            kernel_series(params, 0.005, 1.0, 2.0, 0, 0, 1e-10),
            Err(Error::SeriesTruncation { .. })
        ));
        assert!(matches!(
            kernel_series(params, 0.02, 1.0, 1.0 + 1e-5, 0, 0, 1e-10),
            Err(Error::DiagonalSingularity { .. })
        ));
        // Away from the diagonal, the same t is accepted.
        assert!(kernel_series(params, 0.02, 1.0, 1.2, 0, 0, 1e-8).is_ok());
    }

    #[test]
    fn dk_agrees_with_series() {
        for &(a, b) in &[(-0.5, -0.5), (0.0, 0.0), (0.3, 1.7), (-0.5, 2.0)] {
            let params = p(a, b);
            for &(t, theta, phi) in &[(0.1, 1.0, 2.0), (0.9, 0.5, 2.7), (4.0, 2.0, 2.4)] {
                let series = kernel_series(params, t, theta, phi, 0, 0, 1e-12).unwrap();
                let dk = kernel_dk(params, t, theta, phi, 0, 0, 96).unwrap();
                assert_relative_eq!(
                    dk.value,
                    series.value,
                    max_relative = tolerance::REPRESENTATION
                );
                assert!(dk.value > 0.0, "kernel positivity");
            }
        }
    }

    #[test]
    fn dk_derivatives_agree_with_series_derivatives() {
        let params = p(0.3, 1.7);
        for m in 0..=2usize {
            for n in 0..=2usize {
                if m + n == 0 || m + n > 3 {
                    continue;
                }
                let series = kernel_series(params, 0.8, 1.0, 2.1, m, n, 1e-12).unwrap();
                let dk = kernel_dk(params, 0.8, 1.0, 2.1, m, n, 96).unwrap();
                assert_relative_eq!(
                    dk.value,
                    series.value,
                    max_relative = tolerance::REPRESENTATION
                );
            }
        }
    }

    #[test]
    fn atomic_rules_reduce_to_closed_form() {
        let params = p(-0.5, -0.5);
        let (t, theta, phi) = (0.6, 1.1, 2.2);
        let eval = kernel_dk(params, t, theta, phi, 0, 0, 96).unwrap();
        // Two-atom rules: the double integral is exactly 4 point evaluations.
        assert_relative_eq!(
            eval.value,
            kernel_closed_form(t, theta, phi).unwrap(),
            max_relative = 1e-12
        );
        assert!(eval.est_error < 1e-14);
    }

    #[test]
    fn mixed_derivatives_match_nested_finite_differences() {
        let params = p(0.3, 1.7);
        let (t, theta, phi) = (0.8, 1.0, 2.0);
        let h = 1e-3;
        let base =
            |tt: f64, th: f64| kernel_series(params, tt, th, phi, 0, 0, 1e-13).unwrap().value;
        let cases: [(usize, usize, f64); 5] = [
            (1, 0, (base(t + h, theta) - base(t - h, theta)) / (2.0 * h)),
            (0, 1, (base(t, theta + h) - base(t, theta - h)) / (2.0 * h)),
            (
                2,
                0,
                (base(t + h, theta) - 2.0 * base(t, theta) + base(t - h, theta)) / (h * h),
            ),
            (
                0,
                2,
                (base(t, theta + h) - 2.0 * base(t, theta) + base(t, theta - h)) / (h * h),
            ),
            (
                1,
                1,
                (base(t + h, theta + h) - base(t + h, theta - h) - base(t - h, theta + h)
                    + base(t - h, theta - h))
                    / (4.0 * h * h),
            ),
        ];
        for (m, n, fd) in cases {
            let eval = kernel_series(params, t, theta, phi, m, n, 1e-12).unwrap();
            assert_relative_eq!(eval.value, fd, max_relative = tolerance::FD_NESTED);
        }
    }

    #[test]
    fn eigen_action() {
        let params = p(0.3, 1.7);
        let rule = jacobi_measure_rule(params, 120);
        let (t, theta) = (1.0, 1.2);
        for n in 0..=10usize {
            let integral = rule.integrate(|phi| {
                kernel_series(params, t, theta, phi, 0, 0, 1e-13).unwrap().value
                    * eval_normalized(params, n, phi).unwrap()
            });
            let expect = (-t * params.frequency(n)).exp() * eval_normalized(params, n, theta).unwrap();
            assert_relative_eq!(integral, expect, max_relative = 1e-8, epsilon = 1e-12);
        }
    }

    #[test]
    fn semigroup_law() {
        let params = p(0.3, 1.7);
        let rule = jacobi_measure_rule(params, 120);
        let (t, s, theta, phi) = (0.8, 0.5, 1.0, 2.3);
        let lhs = rule.integrate(|psi| {
            kernel_series(params, t, theta, psi, 0, 0, 1e-13).unwrap().value
                * kernel_series(params, s, psi, phi, 0, 0, 1e-13).unwrap().value
        });
        let rhs = kernel_series(params, t + s, theta, phi, 0, 0, 1e-13).unwrap().value;
        assert_relative_eq!(lhs, rhs, max_relative = 1e-7);
    }

    #[test]
    fn t_limits() {
        // α+β+1 > 0: decays to 0.
        let decaying = kernel_series(p(0.3, 1.7), 40.0, 1.0, 2.0, 0, 0, 1e-14).unwrap();
        assert!(decaying.value.abs() < 1e-10);
        // Critical: tends to 1/m(0,π) = 1/π.
        let critical = kernel_series(p(-0.5, -0.5), 40.0, 1.0, 2.0, 0, 0, 1e-14).unwrap();
        assert_relative_eq!(critical.value, 1.0 / PI, max_relative = 1e-10);
    }

    #[test]
    fn product_formula_residuals() {
        let params = p(0.3, 1.7);
        assert!(dk_product_formula_check(params, 0, 0.4, 0.6, 32).unwrap() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=10usize {
            let s = rng.gen_range(0.05..0.95);
            let t = rng.gen_range(0.05..0.95);
            assert!(
                dk_product_formula_check(params, n, s, t, 96).unwrap() < 1e-8,
                "n = {n}"
            );
        }
        // Low orders are inexact for n = 8; doubling improves, and a rule with
        // order > n is Gauss-exact.
        let coarse = dk_product_formula_check(params, 8, 0.3, 0.7, 3).unwrap();
        let fine = dk_product_formula_check(params, 8, 0.3, 0.7, 9).unwrap();
        assert!(fine < coarse);
        assert!(fine < 1e-10);
        // Excluded parameter range.
        assert!(dk_product_formula_check(p(-0.5, 1.0), 2, 0.3, 0.7, 16).is_err());
    }

    #[test]
    fn dk_rejects_out_of_domain_params() {
        assert!(matches!(
            kernel_dk(p(-0.7, 0.0), 1.0, 1.0, 2.0, 0, 0, 16),
            Err(Error::NotDkValid { .. })
        ));
    }
}
