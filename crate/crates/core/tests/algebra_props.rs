mod common;

use common::*;
use nctorus::{MultiIndex, WeylSeries};
use proptest::prelude::*;

fn theta_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0 / 3.0), Just(std::f64::consts::FRAC_1_SQRT_2), -1.0..1.0f64]
}

fn l1(a: &WeylSeries<f64>) -> f64 {
    a.coeffs().values().map(|z| z.norm()).sum::<f64>().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_reverses_products(seed in any::<u64>(), t in theta_strategy()) {
        let th = theta2(t);
        let mut r = rng(seed);
        let a = rand_series(&mut r, &th, 4, 3);
        let b = rand_series(&mut r, &th, 4, 3);
        let lhs = a.product(&b).unwrap().adjoint();
        let rhs = b.adjoint().product(&a.adjoint()).unwrap();
        prop_assert!(lhs.minus(&rhs).unwrap().max_abs() <= 1e-13 * l1(&a) * l1(&b));
    }

    #[test]
    fn monomials_are_unitary(k in prop::collection::vec(-6i64..=6, 2), t in theta_strategy()) {
        let th = theta2(t);
        let u = WeylSeries::monomial(th.clone(), k.clone(), c(1.0));
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        prop_assert_eq!(u.adjoint(), WeylSeries::monomial(th.clone(), neg, c(1.0)));
        let uu = u.product(&u.adjoint()).unwrap();
        prop_assert!(uu.minus(&WeylSeries::one(th)).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn monomials_are_orthonormal(k in prop::collection::vec(-4i64..=4, 2), l in prop::collection::vec(-4i64..=4, 2), t in theta_strategy()) {
        let th = theta2(t);
        let uk = WeylSeries::monomial(th.clone(), k.clone(), c(1.0));
        let ul = WeylSeries::monomial(th, l.clone(), c(1.0));
        let want = if k == l { 1.0 } else { 0.0 };
        prop_assert!((uk.inner(&ul) - c(want)).norm() < 1e-14);
    }

    #[test]
    fn trace_is_positive(seed in any::<u64>(), t in theta_strategy()) {
        let th = theta2(t);
        let a = rand_series(&mut rng(seed), &th, 5, 3);
        let v = a.adjoint().product(&a).unwrap().tau();
        prop_assert!(v.re >= 0.0 && v.im.abs() < 1e-13 * l1(&a).powi(2));
        prop_assert!((v.re - a.norm().powi(2)).abs() < 1e-12 * l1(&a).powi(2));
    }

    #[test]
    fn derivations_commute_and_kill_the_unit(seed in any::<u64>(), t in theta_strategy()) {
        let th = theta2(t);
        let a = rand_series(&mut rng(seed), &th, 5, 3);
        let (d1, d2) = (MultiIndex::unit(2, 0), MultiIndex::unit(2, 1));
        let both = a.delta(&MultiIndex(vec![1, 1]));
        let tol = 1e-15 * both.max_abs();
        prop_assert!(a.delta(&d1).delta(&d2).minus(&both).unwrap().max_abs() <= tol);
        prop_assert!(a.delta(&d2).delta(&d1).minus(&both).unwrap().max_abs() <= tol);
        prop_assert!(WeylSeries::one(th).delta(&d1).is_zero());
        prop_assert!(a.delta(&d1).tau().norm() < 1e-300);
    }

    #[test]
    fn commutator_is_a_derivation(seed in any::<u64>(), t in theta_strategy()) {
        let th = theta2(t);
        let mut r = rng(seed);
        let a = rand_series(&mut r, &th, 3, 2);
        let b = rand_series(&mut r, &th, 3, 2);
        let x = rand_series(&mut r, &th, 3, 2);
        // [x, ab] = [x, a]b + a[x, b]
        let lhs = x.commutator(&a.product(&b).unwrap()).unwrap();
        let rhs = x.commutator(&a).unwrap().product(&b).unwrap()
            .plus(&a.product(&x.commutator(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.minus(&rhs).unwrap().max_abs() <= 1e-13 * l1(&a) * l1(&b) * l1(&x));
    }

    #[test]
    fn flat_theta_is_commutative(seed in any::<u64>()) {
        let th = theta2(0.0);
        let mut r = rng(seed);
        let a = rand_series(&mut r, &th, 5, 3);
        let b = rand_series(&mut r, &th, 5, 3);
        prop_assert!(a.commutator(&b).unwrap().max_abs() <= 1e-15 * l1(&a) * l1(&b));
    }
}
