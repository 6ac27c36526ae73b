use proptest::prelude::*;

use rabi_core::approx::{grwa_block, rwa_spectrum};
use rabi_core::exact::solve_exact;
use rabi_core::specfun::{displaced_overlap, laguerre_assoc};
use rabi_core::varground::{ground_solve, projection_p, Regime};
use rabi_core::{ModelParams, Sign};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn variational_energy_is_an_upper_bound(omega in 0.3f64..3.0, g in 0.0f64..2.0) {
        let params = ModelParams::unit(omega, g).unwrap();
        let r = ground_solve(&params).unwrap();
        let e = solve_exact(&params, 1e-10).unwrap().ground_energy();
        prop_assert!(r.energy >= e - 1e-9);
        prop_assert!(r.k_at_opt >= 0.0);
        prop_assert!(r.p_at_opt > 0.0 && r.p_at_opt <= 1.0);
        prop_assert!(r.mean_photon >= 0.0);
        if r.regime == Regime::OneMinimum {
            prop_assert!(r.lambda_opt <= 0.0);
        }
    }

    #[test]
    fn displaced_rows_are_normalized(alpha in -2.0f64..2.0, n in 0usize..6) {
        let total: f64 = (0..120).map(|k| displaced_overlap(k, n, alpha).powi(2)).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn laguerre_three_term_recurrence(n in 1usize..30, m in 0usize..8, x in 0.0f64..20.0) {
        let (a, b, c) = (
            laguerre_assoc(n + 1, m, x).unwrap(),
            laguerre_assoc(n, m, x).unwrap(),
            laguerre_assoc(n - 1, m, x).unwrap(),
        );
        let lhs = (n as f64 + 1.0) * a;
        let rhs = (2.0 * n as f64 + 1.0 + m as f64 - x) * b - (n as f64 + m as f64) * c;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs() + b.abs() * x));
    }

    #[test]
    fn projection_stays_in_unit_interval(k in 0.0f64..1e6) {
        let p = projection_p(k).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
    }

    #[test]
    fn block_levels_are_ordered(omega in 0.3f64..3.0, g in 0.0f64..1.5, n in 1usize..8) {
        let params = ModelParams::unit(omega, g).unwrap();
        let b = grwa_block(&params, params.lambda_aa(), n).unwrap();
        prop_assert!(b.e_minus <= b.e_plus);
        prop_assert!(rwa_spectrum(&params, n, Sign::Minus).unwrap() <= rwa_spectrum(&params, n, Sign::Plus).unwrap());
    }
}
