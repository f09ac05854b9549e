//! Randomized invariants over the admissible parameter ranges.

use jacobi_harmonics::kernel::{q_value, q_value_alt, QPoint};
use jacobi_harmonics::ops::{apply_semigroup, JacobiExpansion};
use jacobi_harmonics::params::ParamPair;
use jacobi_harmonics::quad::{jacobi_measure_rule, total_mass};
use jacobi_harmonics::special::eval_jacobi;
use num_complex::Complex64;
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = ParamPair> {
    // Away from the α, β → -1 wall where norm constants blow up.
    (-0.95f64..4.0, -0.95f64..4.0).prop_map(|(a, b)| ParamPair::new(a, b).unwrap())
}

proptest! {
    #[test]
    fn q_is_within_range_and_stable(
        theta in 1e-3f64..3.14,
        phi in 1e-3f64..3.14,
        u in -1.0f64..=1.0,
        v in -1.0f64..=1.0,
    ) {
        let point = QPoint::new(theta, phi, u, v).unwrap();
        let q = q_value(point);
        let q_alt = q_value_alt(point);
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&q));
        // The stable form agrees absolutely; near the diagonal it is the
        // more accurate of the two.
        prop_assert!((q - q_alt).abs() <= 1e-12);
        prop_assert!(q_alt >= 0.0);
    }

    #[test]
    fn jacobi_reflection_symmetry(
        params in params_strategy(),
        n in 0usize..12,
        x in -0.999f64..0.999,
    ) {
        // P_n^{α,β}(-x) = (-1)^n P_n^{β,α}(x).
        let lhs = eval_jacobi(params, n, -x).unwrap();
        let swapped = ParamPair::new(params.beta, params.alpha).unwrap();
        let rhs = (-1.0f64).powi(n as i32) * eval_jacobi(swapped, n, x).unwrap();
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }

    #[test]
    fn rule_mass_matches_total_mass(params in params_strategy()) {
        let rule = jacobi_measure_rule(params, 32);
        let mass = total_mass(params);
        prop_assert!((rule.total_weight() - mass).abs() <= 1e-10 * mass);
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn semigroup_composition_in_coefficient_space(
        params in params_strategy(),
        s in 0.01f64..2.0,
        t in 0.01f64..2.0,
        re in proptest::collection::vec(-1.0f64..1.0, 1..8),
    ) {
        let coeffs: Vec<Complex64> = re.iter().map(|&x| Complex64::new(x, -x)).collect();
        let f = JacobiExpansion::new(params, coeffs).unwrap();
        let sequential = apply_semigroup(&apply_semigroup(&f, s).unwrap(), t).unwrap();
        let combined = apply_semigroup(&f, s + t).unwrap();
        for (a, b) in sequential.coeffs.iter().zip(&combined.coeffs) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn expansion_json_round_trip(
        params in params_strategy(),
        re in proptest::collection::vec(-1e3f64..1e3, 1..10),
    ) {
        let coeffs: Vec<Complex64> = re.iter().map(|&x| Complex64::new(x, x / 3.0)).collect();
        let f = JacobiExpansion::new(params, coeffs).unwrap();
        let back = JacobiExpansion::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(f, back);
    }
}
