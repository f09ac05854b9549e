//! Symbolic derivatives of the Poisson integrand
//! Φ(t, q) = sinh(t/2) · (cosh(t/2) - 1 + q)^{-α-β-2}.
//!
//! Every mixed derivative ∂_t^M ∂_θ^N Φ is a finite sum of monomials
//!
//! ```text
//!     coef · sinh(t/2)^a · cosh(t/2)^b · (∂_θ q)^i · D^{e-k},
//! ```
//!
//! with D = cosh(t/2) - 1 + q and e = -(α+β+2), because the generators obey
//! ∂_t sinh = cosh/2, ∂_t cosh = sinh/2, ∂_t D = sinh(t/2)/2, ∂_θ D = ∂_θ q,
//! and ∂_θ(∂_θ q) = (1 - q)/4 = (cosh(t/2) - D)/4. The term lists are built
//! once per (M, N) and evaluated with a single `powf` per point, which keeps
//! dense grid sweeps cheap.
//!
//! A single additional ∂_φ is supported at evaluation time (for kernel
//! smoothness estimates): it introduces ∂_φ q and the swapped argument
//! q(θ, φ, v, u) through ∂_θ ∂_φ q = (q(θ, φ, v, u) - 1)/4, after which the
//! family would no longer be closed, so it is not folded back into the list.

use crate::params::ParamPair;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiTerm {
    pub coef: f64,
    /// Power of sinh(t/2).
    pub s_pow: u32,
    /// Power of cosh(t/2).
    pub c_pow: u32,
    /// Power of ∂_θ q.
    pub q1_pow: u32,
    /// D-exponent shift: the term carries D^{e - d_shift}.
    pub d_shift: i32,
}

/// The expanded derivative ∂_t^M ∂_θ^N Φ for fixed parameters.
#[derive(Debug, Clone)]
pub struct PhiTerms {
    /// e = -(α+β+2).
    pub exponent: f64,
    pub m: usize,
    pub n: usize,
    pub terms: Vec<PhiTerm>,
}

impl PhiTerms {
    pub fn new(params: ParamPair, m: usize, n: usize) -> Self {
        let e = -(params.alpha + params.beta + 2.0);
        let mut terms = vec![PhiTerm {
            coef: 1.0,
            s_pow: 1,
            c_pow: 0,
            q1_pow: 0,
            d_shift: 0,
        }];
        for _ in 0..n {
            terms = d_theta(&terms, e);
        }
        for _ in 0..m {
            terms = d_t(&terms, e);
        }
        PhiTerms {
            exponent: e,
            m,
            n,
            terms,
        }
    }

    /// Evaluates the derivative at (t, q, ∂_θ q).
    pub fn eval(&self, t: f64, q: f64, q1: f64) -> f64 {
        let s = (t / 2.0).sinh();
        let c = (t / 2.0).cosh();
        let d = c - 1.0 + q;
        let base = d.powf(self.exponent);
        self.terms
            .iter()
            .map(|term| {
                term.coef
                    * s.powi(term.s_pow as i32)
                    * c.powi(term.c_pow as i32)
                    * q1.powi(term.q1_pow as i32)
                    * base
                    * d.powi(-term.d_shift)
            })
            .sum()
    }

    /// Evaluates ∂_φ of the derivative at (t, q, ∂_θ q), given p1 = ∂_φ q and
    /// the swapped-argument value q̃ = q(θ, φ, v, u) entering
    /// ∂_θ ∂_φ q = (q̃ - 1)/4.
    pub fn eval_dphi(&self, t: f64, q: f64, q1: f64, p1: f64, q_swapped: f64) -> f64 {
        let s = (t / 2.0).sinh();
        let c = (t / 2.0).cosh();
        let d = c - 1.0 + q;
        let base = d.powf(self.exponent);
        let q1_cross = (q_swapped - 1.0) / 4.0;
        self.terms
            .iter()
            .map(|term| {
                let sc = term.coef * s.powi(term.s_pow as i32) * c.powi(term.c_pow as i32);
                let d_pow = base * d.powi(-term.d_shift);
                // Product rule over the two φ-dependent factors q1^i and D^{e-k}.
                let mut out = 0.0;
                if term.q1_pow > 0 {
                    out += sc
                        * term.q1_pow as f64
                        * q1.powi(term.q1_pow as i32 - 1)
                        * q1_cross
                        * d_pow;
                }
                out += sc
                    * q1.powi(term.q1_pow as i32)
                    * (self.exponent - term.d_shift as f64)
                    * p1
                    * d_pow
                    / d;
                out
            })
            .sum()
    }
}

fn push(map: &mut HashMap<(u32, u32, u32, i32), f64>, term: PhiTerm) {
    if term.coef != 0.0 {
        *map.entry((term.s_pow, term.c_pow, term.q1_pow, term.d_shift))
            .or_insert(0.0) += term.coef;
    }
}

fn collect(map: HashMap<(u32, u32, u32, i32), f64>) -> Vec<PhiTerm> {
    let mut terms: Vec<PhiTerm> = map
        .into_iter()
        .filter(|&(_, coef)| coef != 0.0)
        .map(|((s_pow, c_pow, q1_pow, d_shift), coef)| PhiTerm {
            coef,
            s_pow,
            c_pow,
            q1_pow,
            d_shift,
        })
        .collect();
    terms.sort_by(|a, b| {
        (a.s_pow, a.c_pow, a.q1_pow, a.d_shift).cmp(&(b.s_pow, b.c_pow, b.q1_pow, b.d_shift))
    });
    terms
}

fn d_t(terms: &[PhiTerm], e: f64) -> Vec<PhiTerm> {
    let mut map = HashMap::new();
    for term in terms {
        // ∂_t sinh^a: (a/2) sinh^{a-1} cosh^{b+1}.
        if term.s_pow > 0 {
            push(
                &mut map,
                PhiTerm {
                    coef: term.coef * term.s_pow as f64 / 2.0,
                    s_pow: term.s_pow - 1,
                    c_pow: term.c_pow + 1,
                    ..*term
                },
            );
        }
        // ∂_t cosh^b: (b/2) sinh^{a+1} cosh^{b-1}.
        if term.c_pow > 0 {
            push(
                &mut map,
                PhiTerm {
                    coef: term.coef * term.c_pow as f64 / 2.0,
                    s_pow: term.s_pow + 1,
                    c_pow: term.c_pow - 1,
                    ..*term
                },
            );
        }
        // ∂_t D^{e-k}: (e-k)/2 sinh^{a+1} D^{e-k-1}.
        push(
            &mut map,
            PhiTerm {
                coef: term.coef * (e - term.d_shift as f64) / 2.0,
                s_pow: term.s_pow + 1,
                d_shift: term.d_shift + 1,
                ..*term
            },
        );
    }
    collect(map)
}

fn d_theta(terms: &[PhiTerm], e: f64) -> Vec<PhiTerm> {
    let mut map = HashMap::new();
    for term in terms {
        // ∂_θ q1^i with ∂_θ q1 = (cosh(t/2) - D)/4: two terms.
        if term.q1_pow > 0 {
            let lead = term.coef * term.q1_pow as f64 / 4.0;
            push(
                &mut map,
                PhiTerm {
                    coef: lead,
                    c_pow: term.c_pow + 1,
                    q1_pow: term.q1_pow - 1,
                    ..*term
                },
            );
            push(
                &mut map,
                PhiTerm {
                    coef: -lead,
                    q1_pow: term.q1_pow - 1,
                    d_shift: term.d_shift - 1,
                    ..*term
                },
            );
        }
        // ∂_θ D^{e-k} = (e-k) q1 D^{e-k-1}.
        push(
            &mut map,
            PhiTerm {
                coef: term.coef * (e - term.d_shift as f64),
                q1_pow: term.q1_pow + 1,
                d_shift: term.d_shift + 1,
                ..*term
            },
        );
    }
    collect(map)
}
