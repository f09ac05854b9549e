//! Jacobi and Gegenbauer polynomial evaluation, normalization constants and
//! the differentiation rule for the orthonormal trigonometric system.
//!
//! Everything here evaluates by three-term recurrences; the Rodrigues formula
//! appears only as a test oracle.

use crate::error::{Error, Result};
use crate::params::{check_theta, ParamPair};
use statrs::function::gamma::ln_gamma;

/// P_n^{α,β}(x) on [-1, 1] by the standard three-term recurrence.
pub fn eval_jacobi(params: ParamPair, n: usize, x: f64) -> Result<f64> {
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "[-1, 1]",
        });
    }
    let x = x.clamp(-1.0, 1.0);
    Ok(jacobi_sequence(params, n, x)[n])
}

/// P_k^{α,β}(x) for k = 0..=n, one recurrence sweep.
pub fn jacobi_sequence(params: ParamPair, n: usize, x: f64) -> Vec<f64> {
    let (a, b) = (params.alpha, params.beta);
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    if n == 0 {
        return p;
    }
    p.push((a + b + 2.0) / 2.0 * x + (a - b) / 2.0);
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let lead = 2.0 * kf * (kf + a + b) * (c - 2.0);
        let mid = (c - 1.0) * ((c * (c - 2.0)) * x + a * a - b * b);
        let tail = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c;
        let next = (mid * p[k - 1] - tail * p[k - 2]) / lead;
        p.push(next);
    }
    p
}

/// Normalizing factor c_n^{α,β} making {c_n P_n(cos θ)} orthonormal in
/// L²(dm_{α,β}). Computed through log-gamma differences.
///
/// For n = 0 the factor (2n+α+β+1)Γ(n+α+β+1) collapses to Γ(α+β+2) by
/// z Γ(z) = Γ(z+1), which is also the required replacement in the critical
/// case α+β = -1; both branches are served by the same expression.
pub fn norm_constant(params: ParamPair, n: usize) -> f64 {
    let (a, b) = (params.alpha, params.beta);
    if n == 0 {
        return (0.5 * (ln_gamma(a + b + 2.0) - ln_gamma(a + 1.0) - ln_gamma(b + 1.0))).exp();
    }
    let nf = n as f64;
    let ln_sq = (2.0 * nf + a + b + 1.0).ln() + ln_gamma(nf + a + b + 1.0) + ln_gamma(nf + 1.0)
        - ln_gamma(nf + a + 1.0)
        - ln_gamma(nf + b + 1.0);
    (0.5 * ln_sq).exp()
}

/// 𝒫_n^{α,β}(θ) = c_n P_n(cos θ), θ ∈ (0, π).
pub fn eval_normalized(params: ParamPair, n: usize, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(norm_constant(params, n) * eval_jacobi(params, n, theta.cos())?)
}

/// 𝒫_k^{α,β}(θ) for k = 0..=n_max in a single recurrence sweep.
pub fn normalized_sequence(params: ParamPair, n_max: usize, theta: f64) -> Result<Vec<f64>> {
    check_theta(theta)?;
    let raw = jacobi_sequence(params, n_max, theta.cos());
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(k, v)| norm_constant(params, k) * v)
        .collect())
}

/// (d/dθ) 𝒫_n^{α,β}(θ) = -(1/2) √(n(n+α+β+1)) sin θ · 𝒫_{n-1}^{α+1,β+1}(θ).
pub fn derivative_rule(params: ParamPair, n: usize, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let factor = -0.5 * (nf * (nf + params.lambda())).sqrt();
    Ok(factor * theta.sin() * eval_normalized(params.raised(1.0, 1.0), n - 1, theta)?)
}

///// One summand of an iterated-derivative expansion:
/// coef · sin^a θ · cos^b θ · 𝒫_degree^{α+raise, β+raise}(θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaTerm {
    pub coef: f64,
    pub sin_pow: u32,
    pub cos_pow: u32,
    pub raise: u32,
    pub degree: usize,
}

/// δ^N 𝒫_n^{α,β} expanded exactly by iterating the differentiation rule and
/// the product rule. The expansion stays inside the family
/// sin^a θ cos^b θ 𝒫_m^{α+k,β+k}, which is closed under d/dθ.
#[derive(Debug, Clone)]
pub struct DeltaExpansion {
    pub params: ParamPair,
    pub n: usize,
    pub order: usize,
    pub terms: Vec<DeltaTerm>,
}

impl DeltaExpansion {
    pub fn new(params: ParamPair, n: usize, order: usize) -> Self {
        let mut terms = vec![DeltaTerm {
            coef: 1.0,
            sin_pow: 0,
            cos_pow: 0,
            raise: 0,
            degree: n,
        }];
        for _ in 0..order {
            terms = differentiate_terms(params, &terms);
        }
        DeltaExpansion {
            params,
            n,
            order,
            terms,
        }
    }

    pub fn eval(&self, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        let (s, c) = (theta.sin(), theta.cos());
        let mut acc = 0.0;
        for t in &self.terms {
            let raised = self.params.raised(t.raise as f64, t.raise as f64);
            acc += t.coef
                * s.powi(t.sin_pow as i32)
                * c.powi(t.cos_pow as i32)
                * eval_normalized(raised, t.degree, theta)?;
        }
        Ok(acc)
    }

    /// Evaluation against precomputed tables `tables[k][m] = 𝒫_m^{α+k,β+k}(θ)`,
    /// for use inside series summations.
    pub fn eval_with_tables(&self, tables: &[Vec<f64>], sin_theta: f64, cos_theta: f64) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            acc += t.coef
                * sin_theta.powi(t.sin_pow as i32)
                * cos_theta.powi(t.cos_pow as i32)
                * tables[t.raise as usize][t.degree];
        }
        acc
    }

    /// Largest parameter raise appearing in the expansion (= order, unless
    /// terms vanished).
    pub fn max_raise(&self) -> usize {
        self.terms.iter().map(|t| t.raise as usize).max().unwrap_or(0)
    }
}

fn differentiate_terms(params: ParamPair, terms: &[DeltaTerm]) -> Vec<DeltaTerm> {
    let mut out: Vec<DeltaTerm> = Vec::new();
    let mut push = |t: DeltaTerm| {
        if t.coef == 0.0 {
            return;
        }
        if let Some(existing) = out.iter_mut().find(|e| {
            e.sin_pow == t.sin_pow
                && e.cos_pow == t.cos_pow
                && e.raise == t.raise
                && e.degree == t.degree
        }) {
            existing.coef += t.coef;
        } else {
            out.push(t);
        }
    };
    for t in terms {
        // Product rule on sin^a cos^b.
        if t.sin_pow > 0 {
            push(DeltaTerm {
                coef: t.coef * t.sin_pow as f64,
                sin_pow: t.sin_pow - 1,
                cos_pow: t.cos_pow + 1,
                ..*t
            });
        }
        if t.cos_pow > 0 {
            push(DeltaTerm {
                coef: -t.coef * t.cos_pow as f64,
                sin_pow: t.sin_pow + 1,
                cos_pow: t.cos_pow - 1,
                ..*t
            });
        }
        // Differentiation rule on the polynomial factor; 𝒫_{-1} ≡ 0.
        if t.degree > 0 {
            let m = t.degree as f64;
            let lam = params.lambda() + 2.0 * t.raise as f64;
            push(DeltaTerm {
                coef: t.coef * (-0.5) * (m * (m + lam)).sqrt(),
                sin_pow: t.sin_pow + 1,
                cos_pow: t.cos_pow,
                raise: t.raise + 1,
                degree: t.degree - 1,
            });
        }
    }
    out.retain(|t| t.coef != 0.0);
    out
}

/// |Γ(iy)| for real y ≠ 0, from the exact reflection identity
/// |Γ(iy)|² = π / (y sinh(πy)).
pub fn abs_gamma_imag(y: f64) -> f64 {
    (std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh())).sqrt()
}

/// Gegenbauer polynomial C_k^λ(z) by its three-term recurrence.
pub fn eval_gegenbauer(lambda: f64, k: usize, z: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * z;
    for j in 2..=k {
        let jf = j as f64;
        let next = (2.0 * (jf + lambda - 1.0) * z * cur - (jf + 2.0 * lambda - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed form of the Gegenbauer generating function,
/// (1 - r²) / (1 - 2zr + r²)^{λ+1}.
pub fn gegenbauer_generating(lambda: f64, z: f64, r: f64) -> f64 {
    (1.0 - r * r) / (1.0 - 2.0 * z * r + r * r).powf(lambda + 1.0)
}
