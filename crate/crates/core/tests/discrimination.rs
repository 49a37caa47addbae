use std::f64::consts::FRAC_PI_2;

use analog_search::discrimination::{
    delta_max_from_asymmetry, delta_max_from_epsilon, delta_max_from_prior, epsilon_of_asymmetry,
    error_curve, fidelity_deficit, min_error_probability, search_beats_discrimination,
};
use analog_search::DiscriminationSetup;
use proptest::prelude::*;

proptest! {
    #[test]
    fn beats_iff_below_delta_max(p_w in 1e-6f64..1.0 - 1e-6, delta in 0.0f64..=FRAC_PI_2) {
        let setup = DiscriminationSetup::from_prior(p_w).unwrap();
        let d_max = delta_max_from_prior(p_w).unwrap();
        prop_assume!((delta - d_max).abs() > 1e-12);
        prop_assert_eq!(search_beats_discrimination(delta, &setup).unwrap(), delta <= d_max);
    }

    #[test]
    fn asymmetry_is_symmetric(alpha in 1e-6f64..1e6) {
        let a = delta_max_from_asymmetry(alpha).unwrap();
        let b = delta_max_from_asymmetry(alpha.recip()).unwrap();
        prop_assert!((a - b).abs() <= 1e-14);
        let via_eps = delta_max_from_epsilon(epsilon_of_asymmetry(alpha).unwrap()).unwrap();
        prop_assert!((via_eps - a).abs() <= 1e-14);
    }

    #[test]
    fn error_falls_with_angle(p_w in 1e-3f64..0.999, d1 in 1e-3f64..FRAC_PI_2 - 1e-3, step in 1e-3f64..0.5) {
        let setup = DiscriminationSetup::from_prior(p_w).unwrap();
        let d2 = (d1 + step).min(FRAC_PI_2 - 1e-4);
        prop_assume!(d2 > d1);
        let a = min_error_probability(d1, &setup).unwrap().value();
        let b = min_error_probability(d2, &setup).unwrap().value();
        prop_assert!(b < a);
    }

    #[test]
    fn error_grows_with_prior_product(p in 1e-3f64..0.5, q in 1e-3f64..0.5, delta in 0.0f64..1.5) {
        prop_assume!((p - q).abs() > 1e-6);
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        let a = min_error_probability(delta, &DiscriminationSetup::from_prior(lo).unwrap()).unwrap().value();
        let b = min_error_probability(delta, &DiscriminationSetup::from_prior(hi).unwrap()).unwrap().value();
        prop_assert!(a < b);
    }
}

#[test]
fn deficit_crosses_error_once() {
    for alpha in [1.0, 10.0, 100.0] {
        let setup = DiscriminationSetup::from_asymmetry(alpha).unwrap();
        let curve = error_curve(&setup, 1000).unwrap();
        let sign = |i: usize| curve[i].deficit - curve[i].p_e;
        let changes = (1..curve.len() - 1)
            .filter(|&i| sign(i).signum() != sign(i + 1).signum())
            .count();
        assert_eq!(changes, 1, "alpha {alpha}");
        let d = delta_max_from_asymmetry(alpha).unwrap();
        let p_e = min_error_probability(d, &setup).unwrap().value();
        assert!((fidelity_deficit(d).unwrap() - p_e).abs() < 1e-15);
    }
}
