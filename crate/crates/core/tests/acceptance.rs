//! Acceptance gate: the ten top-level criteria, one test and one printed
//! pass/fail line each. Tolerances are the contract values, not the tighter
//! ones the unit suites use internally.

use jacobi_harmonics::kernel::{kernel_closed_form, kernel_dk_integral, kernel_series};
use jacobi_harmonics::ops::{
    decompose_delta_n, eval_decomposition, ffor_residual, min_active_frequency, square_function,
    square_function_rule, JacobiExpansion,
};
use jacobi_harmonics::params::ParamPair;
use jacobi_harmonics::quad::{
    ap_bruteforce_finite, classify_ap, jacobi_measure_rule, pi_measure_rule, DoublePowerWeight,
};
use jacobi_harmonics::special::{
    eval_gegenbauer, eval_normalized, gegenbauer_generating, normalized_sequence, DeltaExpansion,
};
use jacobi_harmonics::verify::{
    check_growth, check_trig, default_panel, run_suite, suite_passed, KernelFamily, VerifyConfig,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn panel() -> Vec<ParamPair> {
    default_panel()
}

fn p(alpha: f64, beta: f64) -> ParamPair {
    ParamPair::new(alpha, beta).unwrap()
}

/// Prints the criterion's single verdict line, then enforces it.
fn conclude(id: &str, ok: bool, detail: &str) {
    println!(
        "[acceptance] {id}: {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "{id}: {detail}");
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn criterion_01_orthonormality() {
    let mut worst = 0.0f64;
    for params in panel() {
        let rule = jacobi_measure_rule(params, 64);
        // Gram matrix from the full sequence at each node.
        let mut gram = [[0.0f64; 21]; 21];
        for (&theta, &w) in rule.nodes.iter().zip(&rule.weights) {
            let seq = normalized_sequence(params, 20, theta).unwrap();
            for m in 0..=20 {
                for n in m..=20 {
                    gram[m][n] += w * seq[m] * seq[n];
                }
            }
        }
        for m in 0..=20usize {
            for n in m..=20 {
                let expect = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((gram[m][n] - expect).abs());
            }
        }
    }
    conclude(
        "1 orthonormality (m,n <= 20, panel)",
        worst < 1e-10,
        &format!("worst deviation {worst:e}"),
    );
}

#[test]
fn criterion_02_representation_equivalence() {
    let mut worst_pair = 0.0f64;
    let mut worst_closed = 0.0f64;
    let axis = linspace(0.02, PI - 0.02, 10);
    let ts = logspace(0.05, 5.0, 10);
    for params in panel() {
        let rule_a = pi_measure_rule(params.alpha, 96).unwrap();
        let rule_b = pi_measure_rule(params.beta, 96).unwrap();
        let chebyshev = params == p(-0.5, -0.5);
        for &t in &ts {
            for &theta in &axis {
                for &phi in &axis {
                    if (theta - phi).abs() < 0.05 {
                        continue;
                    }
                    let series = kernel_series(params, t, theta, phi, 0, 0, 1e-13)
                        .unwrap()
                        .value;
                    let dk = kernel_dk_integral(params, t, theta, phi, 0, 0, &rule_a, &rule_b)
                        .unwrap()
                        .value;
                    worst_pair = worst_pair.max((series - dk).abs() / series.abs().max(1e-300));
                    if chebyshev {
                        let closed = kernel_closed_form(t, theta, phi).unwrap();
                        worst_closed = worst_closed
                            .max((series - closed).abs() / closed.abs().max(1e-300));
                    }
                }
            }
        }
    }
    conclude(
        "2 representation equivalence (series vs DK vs closed form)",
        worst_pair < 1e-8 && worst_closed < 1e-10,
        &format!("series/dk {worst_pair:e}, series/closed {worst_closed:e}"),
    );
}

#[test]
fn criterion_03_dk_product_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for params in [p(0.3, 1.7), p(0.0, 0.0)] {
        for n in 0..=10usize {
            for _ in 0..5 {
                let s: f64 = rng.gen_range(0.05..0.95);
                let t: f64 = rng.gen_range(0.05..0.95);
                let residual =
                    jacobi_harmonics::kernel::dk_product_formula_check(params, n, s, t, 96)
                        .unwrap();
                worst = worst.max(residual);
            }
        }
    }
    conclude(
        "3 Dijksma-Koornwinder product formula (n <= 10)",
        worst < 1e-8,
        &format!("worst residual {worst:e}"),
    );
}

#[test]
fn criterion_04_gegenbauer_generating_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for lambda in [0.5, 1.0, 2.0, 3.0] {
        for _ in 0..20 {
            let z: f64 = rng.gen_range(-1.0..=1.0);
            let r: f64 = rng.gen_range(0.0..=0.9);
            let partial: f64 = (0..=200)
                .map(|k| eval_gegenbauer(lambda, k, z) * r.powi(k as i32))
                .sum();
            let closed = gegenbauer_generating(lambda, z, r);
            worst = worst.max((partial - closed).abs() / closed.abs());
        }
    }
    conclude(
        "4 Gegenbauer generating function (K = 200)",
        worst < 1e-10,
        &format!("worst relative error {worst:e}"),
    );
}

#[test]
fn criterion_05_ffor_identity_and_decomposition() {
    let mut worst_ffor = 0.0f64;
    let mut worst_decomp = 0.0f64;
    for params in panel() {
        for n in 1..=15usize {
            for &theta in &linspace(0.05, PI - 0.05, 50) {
                worst_ffor = worst_ffor.max(ffor_residual(params, n, theta).unwrap());
            }
        }
        for order in 1..=3usize {
            for n in order..=6 {
                let terms = decompose_delta_n(params, n, order).unwrap();
                let iterated = DeltaExpansion::new(params, n, order);
                for &theta in &linspace(0.1, PI - 0.1, 20) {
                    let direct = eval_decomposition(params, n, &terms, theta).unwrap();
                    let reference = iterated.eval(theta).unwrap();
                    worst_decomp = worst_decomp
                        .max((direct - reference).abs() / reference.abs().max(1.0));
                }
            }
        }
    }
    conclude(
        "5 parameter-shifting identity and delta^N decomposition",
        worst_ffor < 1e-10 && worst_decomp < 1e-9,
        &format!("ffor {worst_ffor:e}, decomp {worst_decomp:e}"),
    );
}

#[test]
fn criterion_06_square_function_isometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    // 20 random expansions: five per panel parameter pair.
    for params in panel() {
        for _ in 0..5 {
            let coeffs: Vec<Complex64> = (0..=8)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let mut f = JacobiExpansion::new(params, coeffs).unwrap();
            if params.critical() {
                f.coeffs[0] = Complex64::ZERO;
            }
            let f_norm_sq = f.norm().powi(2);
            let theta_rule = jacobi_measure_rule(params, 64);
            for m in 1..=3usize {
                let mu = min_active_frequency(&f, m, 0).unwrap();
                let t_rule = square_function_rule(m, 0, mu);
                let g_norm_sq = theta_rule
                    .integrate(|theta| square_function(&f, theta, m, 0, &t_rule).unwrap().powi(2));
                let expect = 0.25f64.powi(m as i32)
                    * statrs::function::gamma::gamma(2.0 * m as f64);
                let ratio = g_norm_sq / f_norm_sq;
                worst = worst.max((ratio - expect).abs() / expect);
            }
        }
    }
    conclude(
        "6 g_{M,0} isometry constant 2^{-2M} Gamma(2M)",
        worst < 1e-6,
        &format!("worst relative error {worst:e}"),
    );
}

#[test]
fn criterion_07_semigroup_law_and_eigen_action() {
    let mut worst_semigroup = 0.0f64;
    let mut worst_eigen = 0.0f64;
    let (s, t) = (0.4, 0.7);
    for params in panel() {
        let rule = jacobi_measure_rule(params, 150);
        let h = |tt: f64, theta: f64, phi: f64| {
            kernel_series(params, tt, theta, phi, 0, 0, 1e-13)
                .unwrap()
                .value
        };
        for &(theta, phi) in &[(1.0, 2.1), (0.6, 1.4), (2.0, 2.6)] {
            let composed = rule.integrate(|psi| h(s, theta, psi) * h(t, psi, phi));
            let direct = h(s + t, theta, phi);
            worst_semigroup = worst_semigroup.max((composed - direct).abs() / direct.abs());
        }
        for n in 0..=10usize {
            for &theta in &[0.7, 1.8, 2.9] {
                let lhs = rule
                    .integrate(|phi| h(0.5, theta, phi) * eval_normalized(params, n, phi).unwrap());
                let rhs = (-0.5 * params.frequency(n)).exp()
                    * eval_normalized(params, n, theta).unwrap();
                worst_eigen = worst_eigen.max((lhs - rhs).abs() / rhs.abs().max(1.0));
            }
        }
    }
    conclude(
        "7 semigroup law and eigenfunction action",
        worst_semigroup < 1e-7 && worst_eigen < 1e-8,
        &format!("semigroup {worst_semigroup:e}, eigen {worst_eigen:e}"),
    );
}

#[test]
fn criterion_08_trig_lemma_constant() {
    let report = check_trig(40, 0.02, 0.05);
    let sup = report.empirical_sup;
    let ok = report.passed && sup >= 0.69 && sup <= 1.0 / 2.0f64.sqrt() + 1e-6;
    conclude(
        "8 trig-lemma optimal constant in [0.69, 1/sqrt(2)]",
        ok,
        &format!("sup {sup}"),
    );
}

#[test]
fn criterion_09_standard_estimate_suite() {
    let config = VerifyConfig::default();
    let reports = run_suite(&panel(), &config).unwrap();
    let all_pass = suite_passed(&reports);
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.estimate_id.as_str())
        .collect();
    // Negative control: the fault-injected growth check must report an
    // unbounded diagonal trend.
    let mut fault_config = config.clone();
    fault_config.inject_fault = true;
    let control = check_growth(KernelFamily::Maximal, p(0.0, 0.0), &fault_config).unwrap();
    conclude(
        "9 standard-estimate suite stable, negative control fails",
        all_pass && !control.passed,
        &format!(
            "failed checks {failed:?}; fault-injected drift {} (passed = {})",
            control.refinement_delta, control.passed
        ),
    );
}

#[test]
fn criterion_10_ap_classifier_vs_bruteforce() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let params = p(0.3, 0.8);
    let (two_a2, two_b2) = (2.0 * params.alpha + 2.0, 2.0 * params.beta + 2.0);
    let mut checked = 0;
    let mut disagreements = Vec::new();
    while checked < 20 {
        let pp: f64 = rng.gen_range(1.1..3.5);
        let r: f64 = rng.gen_range(-4.0..6.0);
        let s: f64 = rng.gen_range(-4.0..6.0);
        // Keep a 0.05 margin from the A_p region boundary, where both the
        // classifier and any finite-resolution sweep are ill-posed.
        let margin = [
            (r + two_a2).abs(),
            (two_a2 * (pp - 1.0) - r).abs(),
            (s + two_b2).abs(),
            (two_b2 * (pp - 1.0) - s).abs(),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        if margin < 0.05 {
            continue;
        }
        let w = DoublePowerWeight { r, s };
        let classified = classify_ap(params, w, pp).unwrap();
        let brute = ap_bruteforce_finite(params, w, pp).unwrap();
        if classified != brute {
            disagreements.push((r, s, pp, classified, brute));
        }
        checked += 1;
    }
    conclude(
        "10 A_p classifier agrees with brute-force sweep (20 cases)",
        disagreements.is_empty(),
        &format!("disagreements {disagreements:?}"),
    );
}
