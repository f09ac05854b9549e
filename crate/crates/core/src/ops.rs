//! Finite Jacobi expansions and the spectral operators acting on them:
//! imaginary powers, Riesz-Jacobi transforms, the Poisson semigroup, its
//! maximal operator, and the mixed square functions g_{M,N}; plus the
//! degree-lowering decomposition of δ^N 𝒫_n into orthogonal systems.
//!
//! All operators are diagonal (or band-limited, after the decomposition) in
//! the polynomial index, so they act exactly on truncated expansions; the
//! truncation degree is the caller's accuracy knob.

use crate::error::{Error, Result};
use crate::params::{check_theta, ParamPair};
use crate::quad::{gauss_legendre, jacobi_measure_rule, MeasureId, QuadratureRule};
use crate::special::{eval_normalized, norm_constant, normalized_sequence, DeltaExpansion};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A log-spaced grid in t discretizing the sup over t > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub points: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl TGrid {
    pub fn log_spaced(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && count >= 2) {
            return Err(Error::Domain {
                name: "t_min",
                value: t_min,
                domain: "0 < t_min < t_max, count >= 2",
            });
        }
        let (lo, hi) = (t_min.ln(), t_max.ln());
        let points = (0..count)
            .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp())
            .collect();
        Ok(TGrid {
            points,
            t_min,
            t_max,
            count,
        })
    }

    /// Default maximal-operator grid: 400 log-spaced points on [1e-4, 40].
    pub fn default_maximal() -> Self {
        TGrid::log_spaced(1e-4, 40.0, 400).expect("static bounds")
    }
}

/// f = Σ_{n ≤ n_max} coeffs_n 𝒫_n^{α,β}, with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiExpansion {
    pub params: ParamPair,
    pub coeffs: Vec<Complex64>,
}

/// Wire format: {alpha, beta, n_max, coeffs: [[re, im], …]}.
#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    alpha: f64,
    beta: f64,
    n_max: usize,
    coeffs: Vec<[f64; 2]>,
}

impl JacobiExpansion {
    pub fn new(params: ParamPair, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("expansion needs at least one coefficient".into()));
        }
        Ok(JacobiExpansion { params, coeffs })
    }

    /// The expansion of 𝒫_n itself.
    pub fn basis(params: ParamPair, n: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        coeffs[n] = Complex64::ONE;
        JacobiExpansion { params, coeffs }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// ‖f‖_{L²(dm)} by Parseval.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn synthesize(&self, theta: f64) -> Result<Complex64> {
        let basis = normalized_sequence(self.params, self.n_max(), theta)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&basis)
            .map(|(c, &p)| c * p)
            .sum())
    }

    pub fn to_json(&self) -> String {
        let wire = ExpansionJson {
            alpha: self.params.alpha,
            beta: self.params.beta,
            n_max: self.n_max(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        serde_json::to_string_pretty(&wire).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: ExpansionJson = serde_json::from_str(text)?;
        let params = ParamPair::new(wire.alpha, wire.beta)?;
        if wire.coeffs.len() != wire.n_max + 1 {
            return Err(Error::Parse(format!(
                "n_max = {} but {} coefficients",
                wire.n_max,
                wire.coeffs.len()
            )));
        }
        JacobiExpansion::new(
            params,
            wire.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }

    fn map_diagonal(&self, f: impl Fn(usize) -> Complex64) -> JacobiExpansion {
        JacobiExpansion {
            params: self.params,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * f(n))
                .collect(),
        }
    }
}

/// Fourier-Jacobi coefficients of a function handle by quadrature; the rule
/// order carries a guard margin above n_max.
pub fn analyze<F>(f: F, params: ParamPair, n_max: usize) -> Result<JacobiExpansion>
where
    F: Fn(f64) -> Complex64,
{
    let rule = jacobi_measure_rule(params, n_max + 16);
    let mut coeffs = vec![Complex64::ZERO; n_max + 1];
    for (&theta, &w) in rule.nodes.iter().zip(&rule.weights) {
        let basis = normalized_sequence(params, n_max, theta)?;
        let fw = f(theta) * w;
        for (c, &b) in coeffs.iter_mut().zip(&basis) {
            // ⟨f, 𝒫_n⟩; the basis is real, so no conjugation is needed.
            *c += fw * b;
        }
    }
    JacobiExpansion::new(params, coeffs)
}

/// I_γ f: coeffs_n ← |n+λ/2|^{-2iγ} coeffs_n. In the critical case the
/// degree-0 mode is projected out first; the returned flag records whether
/// that happened.
pub fn apply_imaginary_power(
    f: &JacobiExpansion,
    gamma: f64,
) -> Result<(JacobiExpansion, bool)> {
    if gamma == 0.0 {
        return Err(Error::ZeroGamma);
    }
    let critical = f.params.critical();
    let params = f.params;
    let out = f.map_diagonal(|n| {
        if n == 0 && critical {
            Complex64::ZERO
        } else {
            // μ^{-2iγ} = exp(-2iγ ln μ), modulus 1.
            Complex64::new(0.0, -2.0 * gamma * params.frequency(n).ln()).exp()
        }
    });
    Ok((out, critical))
}

/// H_t f: coeffs_n ← e^{-t|n+λ/2|} coeffs_n.
pub fn apply_semigroup(f: &JacobiExpansion, t: f64) -> Result<JacobiExpansion> {
    if !(t > 0.0) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            domain: "(0, inf)",
        });
    }
    let params = f.params;
    Ok(f.map_diagonal(|n| Complex64::new((-t * params.frequency(n)).exp(), 0.0)))
}

/// R_N f as an evaluable function: Σ_n |n+λ/2|^{-N} coeffs_n δ^N 𝒫_n(θ).
/// The n = 0 mode never contributes since δ^N 𝒫_0 = 0, which also covers the
/// critical case where |0+λ/2|^{-N} would be singular.
pub struct RieszTransform {
    pub order: usize,
    terms: Vec<(Complex64, DeltaExpansion)>,
}

impl RieszTransform {
    pub fn eval(&self, theta: f64) -> Result<Complex64> {
        check_theta(theta)?;
        let mut acc = Complex64::ZERO;
        for (c, expansion) in &self.terms {
            acc += c * expansion.eval(theta)?;
        }
        Ok(acc)
    }
}

pub fn apply_riesz(f: &JacobiExpansion, order: usize) -> Result<RieszTransform> {
    if order == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            domain: "[1, inf)",
        });
    }
    let terms = f
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(n, c)| {
            let scale = f.params.frequency(n).powi(-(order as i32));
            (c * scale, DeltaExpansion::new(f.params, n, order))
        })
        .collect();
    Ok(RieszTransform { order, terms })
}

/// One summand of the degree-lowering decomposition:
/// coef · sin(θ/2)^ν cos(θ/2)^η 𝒫_{n-p}^{α+ν,β+η}(θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompTerm {
    pub coef: f64,
    pub nu: u32,
    pub eta: u32,
    pub p: usize,
}

/// The five coefficients of the parameter-shifting formula, at base
/// parameters (a, b) and degree index n ≥ 1:
///
///   A cosθ 𝒫_{n-1}^{a+1,b+1} = B (sin θ/2 cos θ/2)² 𝒫_{n-2}^{a+2,b+2}
///     + C sin²(θ/2) 𝒫_{n-1}^{a+2,b} + D cos²(θ/2) 𝒫_{n-1}^{a,b+2}
///     + E 𝒫_n^{a,b}.
fn ffor_coefficients(a: f64, b: f64, n: usize) -> [f64; 5] {
    let nf = n as f64;
    let big_a = (a + 1.0) * (b + 1.0) * (a + b + 2.0 * nf);
    let big_b = ((nf - 1.0) * (nf + a + b + 2.0)).sqrt()
        * ((nf - 1.0) * (a + b + 2.0) + (a + 1.0).powi(2) + (b + 1.0).powi(2));
    let big_c = (b - a) * ((nf + b) * (nf + a + 1.0)).sqrt() * (nf + a);
    let big_d = (b - a) * ((nf + a) * (nf + b + 1.0)).sqrt() * (nf + b);
    let big_e = (nf * (nf + a + b + 1.0)).sqrt()
        * ((nf - 1.0) * (a + b + 2.0) + 2.0 * (a + 1.0) * (b + 1.0));
    [big_a, big_b, big_c, big_d, big_e]
}

/// Pointwise residual of the raw parameter-shifting identity, for audit.
pub fn ffor_residual(params: ParamPair, n: usize, theta: f64) -> Result<f64> {
    assert!(n >= 1);
    let (a, b) = (params.alpha, params.beta);
    let [big_a, big_b, big_c, big_d, big_e] = ffor_coefficients(a, b, n);
    let (sh, ch) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let pr = |da: f64, db: f64, m: i64| -> Result<f64> {
        if m < 0 {
            return Ok(0.0);
        }
        eval_normalized(params.raised(da, db), m as usize, theta)
    };
    let lhs = big_a * theta.cos() * pr(1.0, 1.0, n as i64 - 1)?;
    let parts = [
        big_b * (sh * ch).powi(2) * pr(2.0, 2.0, n as i64 - 2)?,
        big_c * sh * sh * pr(2.0, 0.0, n as i64 - 1)?,
        big_d * ch * ch * pr(0.0, 2.0, n as i64 - 1)?,
        big_e * pr(0.0, 0.0, n as i64)?,
    ];
    let rhs: f64 = parts.iter().sum();
    // Relative to the term magnitudes: the raw difference is pure float
    // cancellation noise growing like n² · eps.
    let scale = parts
        .iter()
        .fold(lhs.abs(), |acc, p| acc.max(p.abs()))
        .max(1.0);
    Ok((lhs - rhs).abs() / scale)
}

/// Intermediate term during the reduction: coef · sinθ^sf cosθ^cf ·
/// sin(θ/2)^sh cos(θ/2)^ch 𝒫_m^{α+da,β+db}.
#[derive(Debug, Clone, Copy)]
struct ReductionTerm {
    coef: f64,
    sin_full: u32,
    cos_full: u32,
    sh: u32,
    ch: u32,
    da: i32,
    db: i32,
    degree: i64,
}

/// δ^N 𝒫_n expanded into the family sin(θ/2)^ν cos(θ/2)^η 𝒫_{n-p}^{α+ν,β+η},
/// 0 ≤ ν, η, p ≤ 2N: iterated differentiation rule, then repeated elimination
/// of cosθ factors via the parameter-shifting formula, then
/// sinθ = 2 sin(θ/2) cos(θ/2).
pub fn decompose_delta_n(params: ParamPair, n: usize, order: usize) -> Result<Vec<DecompTerm>> {
    assert!(order >= 1);
    let mut work: Vec<ReductionTerm> = DeltaExpansion::new(params, n, order)
        .terms
        .iter()
        .map(|t| ReductionTerm {
            coef: t.coef,
            sin_full: t.sin_pow,
            cos_full: t.cos_pow,
            sh: 0,
            ch: 0,
            da: t.raise as i32,
            db: t.raise as i32,
            degree: t.degree as i64,
        })
        .collect();
    let mut done: Vec<ReductionTerm> = Vec::new();
    while let Some(term) = work.pop() {
        if term.coef == 0.0 || term.degree < 0 {
            continue;
        }
        if term.cos_full == 0 {
            done.push(term);
            continue;
        }
        // Consume one cosθ factor: the identity is applied at base parameters
        // (α+da-1, β+db-1) with index m+1, so A = (α+da)(β+db)(…+2m+2) > 0
        // whenever a cosθ factor remains (da, db ≥ 1 along the reduction).
        let a = params.alpha + term.da as f64 - 1.0;
        let b = params.beta + term.db as f64 - 1.0;
        let idx = (term.degree + 1) as usize;
        let [big_a, big_b, big_c, big_d, big_e] = ffor_coefficients(a, b, idx);
        if big_a.abs() < 1e-14 {
            return Err(Error::Parse(format!(
                "degenerate parameter-shift pivot at degree {} (alpha = {a}, beta = {b})",
                term.degree
            )));
        }
        let base = ReductionTerm {
            cos_full: term.cos_full - 1,
            ..term
        };
        for (coef, dsh, dch, dda, ddb, ddeg) in [
            (big_b, 1u32, 1u32, 1i32, 1i32, -1i64),
            (big_c, 1, 0, 1, -1, 0),
            (big_d, 0, 1, -1, 1, 0),
            (big_e, 0, 0, -1, -1, 1),
        ] {
            work.push(ReductionTerm {
                coef: base.coef * coef / big_a,
                sh: base.sh + 2 * dsh,
                ch: base.ch + 2 * dch,
                da: base.da + dda,
                db: base.db + ddb,
                degree: base.degree + ddeg,
                ..base
            });
        }
    }
    // sinθ = 2 sin(θ/2) cos(θ/2), then merge like terms.
    let mut merged: HashMap<(u32, u32, i32, i32, i64), f64> = HashMap::new();
    for t in done {
        let key = (
            t.sh + t.sin_full,
            t.ch + t.sin_full,
            t.da,
            t.db,
            t.degree,
        );
        *merged.entry(key).or_insert(0.0) += t.coef * 2f64.powi(t.sin_full as i32);
    }
    let mut out = Vec::new();
    for ((sh, ch, da, db, degree), coef) in merged {
        if coef == 0.0 {
            continue;
        }
        // In the final family the half-angle powers equal the parameter
        // raises, as in the decomposition lemma.
        debug_assert_eq!(sh as i32, da);
        debug_assert_eq!(ch as i32, db);
        out.push(DecompTerm {
            coef,
            nu: sh,
            eta: ch,
            p: (n as i64 - degree) as usize,
        });
    }
    out.sort_by(|x, y| (x.nu, x.eta, x.p).cmp(&(y.nu, y.eta, y.p)));
    Ok(out)
}

/// Evaluates a decomposition returned by `decompose_delta_n` at θ.
pub fn eval_decomposition(
    params: ParamPair,
    n: usize,
    terms: &[DecompTerm],
    theta: f64,
) -> Result<f64> {
    check_theta(theta)?;
    let (sh, ch) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let mut acc = 0.0;
    for t in terms {
        let raised = params.raised(t.nu as f64, t.eta as f64);
        acc += t.coef
            * sh.powi(t.nu as i32)
            * ch.powi(t.eta as i32)
            * eval_normalized(raised, n - t.p, theta)?;
    }
    Ok(acc)
}

/// H_* f(θ): max of |H_t f(θ)| over the grid, with the two analytic endpoint
/// limits appended — f(θ) as t → 0 (finite expansion), and either 0 (when the
/// lowest frequency is positive) or the projected mean |c_0 𝒫_0(θ)| in the
/// critical case as t → ∞.
pub fn maximal_operator(f: &JacobiExpansion, theta: f64, grid: &TGrid) -> Result<f64> {
    let basis = normalized_sequence(f.params, f.n_max(), theta)?;
    let at_t = |t: f64| -> f64 {
        f.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * (-t * f.params.frequency(n)).exp() * basis[n])
            .sum::<Complex64>()
            .norm()
    };
    let mut sup = f.synthesize(theta)?.norm();
    if f.params.critical() {
        sup = sup.max((f.coeffs[0] * basis[0]).norm());
    }
    for &t in &grid.points {
        sup = sup.max(at_t(t));
    }
    Ok(sup)
}

/// Panel rule for ∫_0^∞ F(t) dt with F smooth and exponentially decaying:
/// t = e^s, composite Gauss-Legendre on s ∈ [ln t_min, ln t_max], with t_max
/// chosen so e^{-2 t μ_min} t^{2M+2N-1} < 1e-18 at t = t_max.
pub fn square_function_rule(m: usize, n: usize, mu_min: f64) -> QuadratureRule {
    let power = (2 * (m + n)) as f64 - 1.0;
    let decayed = |t: f64| (-2.0 * t * mu_min).exp() * t.powf(power) < 1e-18;
    let mut t_max = 1.0;
    while !decayed(t_max) && t_max < 1e12 {
        t_max *= 2.0;
    }
    let (lo, hi) = ((1e-6f64).ln(), t_max.ln());
    let panels = ((hi - lo) / 0.7).ceil() as usize;
    let (gx, gw) = gauss_legendre(16);
    let mut nodes = Vec::with_capacity(panels * 16);
    let mut weights = Vec::with_capacity(panels * 16);
    for k in 0..panels {
        let s0 = lo + (hi - lo) * k as f64 / panels as f64;
        let s1 = lo + (hi - lo) * (k + 1) as f64 / panels as f64;
        for (&x, &w) in gx.iter().zip(&gw) {
            let s = s0 + (s1 - s0) * (x + 1.0) / 2.0;
            let t = s.exp();
            nodes.push(t);
            // dt = t ds absorbed into the weight.
            weights.push(w * (s1 - s0) / 2.0 * t);
        }
    }
    QuadratureRule {
        nodes,
        weights,
        measure: MeasureId::TPanel,
        order: panels * 16,
    }
}

/// Smallest active frequency of f for the (M, N) square function, or None if
/// no mode contributes (then g_{M,N} f ≡ 0).
pub fn min_active_frequency(f: &JacobiExpansion, m: usize, n: usize) -> Option<f64> {
    f.coeffs
        .iter()
        .enumerate()
        .filter(|(idx, c)| {
            c.norm_sqr() > 0.0
                && !(n >= 1 && *idx == 0)
                && !(m >= 1 && f.params.frequency(*idx) == 0.0)
        })
        .map(|(idx, _)| f.params.frequency(idx))
        .min_by(f64::total_cmp)
}

/// g_{M,N} f(θ) = (∫_0^∞ |∂_t^M δ^N H_t f(θ)|² t^{2M+2N-1} dt)^{1/2}, with the
/// integrand assembled from coefficients.
pub fn square_function(
    f: &JacobiExpansion,
    theta: f64,
    m: usize,
    n: usize,
    t_rule: &QuadratureRule,
) -> Result<f64> {
    check_theta(theta)?;
    assert!(m + n > 0, "square function needs M + N > 0");
    // Spatial factors δ^N 𝒫_k(θ), exact for every k.
    let spatial: Vec<f64> = if n == 0 {
        normalized_sequence(f.params, f.n_max(), theta)?
    } else {
        (0..=f.n_max())
            .map(|k| DeltaExpansion::new(f.params, k, n).eval(theta))
            .collect::<Result<_>>()?
    };
    let power = (2 * (m + n)) as f64 - 1.0;
    let integral = t_rule.integrate(|t| {
        let val: Complex64 = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mu = f.params.frequency(k);
                c * (-mu).powi(m as i32) * (-t * mu).exp() * spatial[k]
            })
            .sum();
        val.norm_sqr() * t.powf(power)
    });
    Ok(integral.max(0.0).sqrt())
}

/// Closed form of g̃_H(𝒫_0)(θ) = |α+β+1|^{-1} |(α+1/2)cot(θ/2) -
/// (β+1/2)tan(θ/2)| 𝒫_0(θ), the adjoint-side horizontal g-function of the
/// ground state; defined for α+β > -1/2.
pub fn adjoint_delta_closed_form(params: ParamPair, theta: f64) -> Result<f64> {
    if params.alpha + params.beta <= -0.5 {
        return Err(Error::Domain {
            name: "alpha+beta",
            value: params.alpha + params.beta,
            domain: "(-1/2, inf)",
        });
    }
    check_theta(theta)?;
    let half = theta / 2.0;
    let expr = (params.alpha + 0.5) / half.tan() - (params.beta + 0.5) * half.tan();
    Ok(expr.abs() / params.lambda().abs() * norm_constant(params, 0))
}

/// Direct computation of the same quantity:
/// ‖δ* H_t 𝒫_0(θ)‖_{L²(t dt)} with δ* = -δ - (α+1/2)cot(θ/2) + (β+1/2)tan(θ/2),
/// evaluated by t-quadrature. Used as an oracle for the closed form.
pub fn adjoint_delta_direct(params: ParamPair, theta: f64) -> Result<f64> {
    if params.alpha + params.beta <= -0.5 {
        return Err(Error::Domain {
            name: "alpha+beta",
            value: params.alpha + params.beta,
            domain: "(-1/2, inf)",
        });
    }
    check_theta(theta)?;
    let half = theta / 2.0;
    // δ 𝒫_0 = 0, so δ* H_t 𝒫_0(θ) = e^{-tλ/2} [-(α+1/2)cot + (β+1/2)tan] 𝒫_0.
    let spatial = (-(params.alpha + 0.5) / half.tan() + (params.beta + 0.5) * half.tan())
        * norm_constant(params, 0);
    let mu = params.frequency(0);
    let rule = square_function_rule(1, 0, mu.max(1e-3));
    let integral = rule.integrate(|t| (-t * mu).exp().powi(2) * spatial * spatial * t);
    Ok(integral.max(0.0).sqrt())
}
