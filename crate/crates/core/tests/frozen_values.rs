//! Hand-derived values, frozen.

use proptest::prelude::*;

use zeromap_core::basis::{apply_zero_map, mixed_basis, nondegeneracy};
use zeromap_core::catalog::{make_classical, Classical, Schedule, TransformSpec};
use zeromap_core::moments::{moment_closed, moment_oracle, moment_oracle_with, ratio};
use zeromap_core::poly::{all_roots_in, Bound, Interval};
use zeromap_core::scalar::{pochhammer, q_pochhammer, QLength};
use zeromap_core::verify::{delta1_counterexamples, Delta1Case};
use zeromap_core::{AffinePair, Polynomial, Scalar};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn laguerre() -> TransformSpec {
    TransformSpec::laguerre(Scalar::zero(), Scalar::one()).unwrap()
}

#[test]
fn empty_products_are_one() {
    assert_eq!(pochhammer(&q(-7, 3), 0), Scalar::one());
    assert_eq!(q_pochhammer(&q(5, 2), &q(1, 3), QLength::Finite(0)).unwrap(), Scalar::one());
}

#[test]
fn laguerre_pairs_and_basis() {
    let spec = laguerre();
    for k in 0..6 {
        let kk = Scalar::int(k as i64);
        assert_eq!(spec.pair(k), AffinePair::new(kk, Scalar::one(), Scalar::one(), Scalar::zero()));
        assert_eq!(nondegeneracy(&spec.pair(k)), Scalar::int(-1));
        assert!(spec.sigma(k + 1).is_zero());
    }
    let b = mixed_basis(&spec.pairs(2), 2).unwrap();
    assert_eq!(b, vec![Polynomial::from_ints(&[1]), Polynomial::from_ints(&[0, 1]), Polynomial::from_ints(&[0, 1, 1])]);
}

#[test]
fn wall0_pairs() {
    let spec = TransformSpec::wall0(Scalar::one(), q(1, 2)).unwrap();
    for k in 0..6 {
        let qk = q(1, 1 << k);
        assert_eq!(spec.pair(k), AffinePair::new(Scalar::one(), Scalar::zero(), Scalar::one(), qk));
        assert!(spec.sigma(k + 1).is_zero());
    }
}

#[test]
fn laguerre_moments() {
    let spec = laguerre();
    assert_eq!(ratio(&spec, 2, &Scalar::one()).unwrap(), Scalar::int(3));
    assert_eq!(moment_closed(&spec, 3, &Scalar::int(2)).unwrap(), Scalar::int(24));
    let v = moment_oracle(&spec, 2, &Scalar::one()).unwrap();
    assert!((v.to_f64() - 2.0).abs() < 1e-10);
}

#[test]
fn krawtchouk_two_atoms() {
    // N = 2, gamma0 = 1, mu = 1: jumps 1, 2, 1 at 0, 1, 2 over (1 + mu)^2 = 4.
    let spec = TransformSpec::krawtchouk(2, Scalar::one(), Schedule::trivial()).unwrap();
    let mu = Scalar::one();
    let got: Vec<Scalar> = (0..4).map(|k| moment_oracle_with(&spec, k, &mu, 256).unwrap().value).collect();
    assert_eq!(got, vec![Scalar::one(), Scalar::one(), q(1, 2), Scalar::zero()]);
}

#[test]
fn wall_first_ratio() {
    // (1 - mu/2) / (1 + mu/2) at mu = 1
    let spec = TransformSpec::wall(q(-1, 2), q(1, 2), q(1, 2)).unwrap();
    let v = moment_oracle_with(&spec, 1, &Scalar::one(), 256).unwrap();
    assert!((v.value.to_f64() - 1.0 / 3.0).abs() < 1e-30);
    assert!(v.error_bound.to_f64() < 1e-30);
}

#[test]
fn delta1_value() {
    let (d, f) = delta1_counterexamples(&Scalar::one(), &Scalar::zero(), &Scalar::one(), &Scalar::int(10), Delta1Case::N0Ge2)
        .unwrap();
    assert_eq!((d.clone(), f), (q(-1, 1100), q(-1, 1100)));
    // sigma = 0 makes the two cases agree
    let a = delta1_counterexamples(&q(3, 2), &q(1, 2), &Scalar::zero(), &Scalar::int(4), Delta1Case::N0Eq1).unwrap();
    let b = delta1_counterexamples(&q(3, 2), &q(1, 2), &Scalar::zero(), &Scalar::int(4), Delta1Case::N0Ge2).unwrap();
    assert_eq!(a, b);
}

#[test]
fn zero_map_images() {
    let p = Polynomial::from_ints(&[2, -3, 1]);
    assert_eq!(apply_zero_map(&p, &laguerre()).unwrap(), Polynomial::from_ints(&[2, -4, 1]));
    let w0 = TransformSpec::wall0(Scalar::one(), q(1, 2)).unwrap();
    let img = apply_zero_map(&Polynomial::from_ints(&[-1, 1]), &w0).unwrap();
    assert_eq!(img, Polynomial::from_ints(&[1, -2]));
}

#[test]
fn chebyshev_expansion_moves_a_positive_double_zero() {
    // (x - 1/2)^2 -> 2x^2 - x - 3/4, zeros (1 +- sqrt 7) / 4
    let p = Polynomial::from_roots(&[q(1, 2), q(1, 2)]);
    let img = make_classical(Classical::ChebyshevExpand).apply(&p);
    assert_eq!(img, Polynomial::new(vec![q(-3, 4), Scalar::int(-1), Scalar::int(2)]));
    assert!(img.evaluate(&Scalar::zero()).is_negative());
    assert!(!all_roots_in(&img, &Interval::positive_reals()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chebyshev_expansion_keeps_zeros_of_the_unit_interval(
        roots in prop::collection::vec((-15i64..=15, 16i64..=16).prop_map(|(n, d)| Scalar::ratio(n, d)), 1..=8)
    ) {
        let p = Polynomial::from_roots(&roots);
        let img = make_classical(Classical::ChebyshevExpand).apply(&p);
        let unit = Interval::open(Bound::Finite(Scalar::int(-1)), Bound::Finite(Scalar::one()));
        prop_assert!(all_roots_in(&img, &unit).unwrap());
    }
}
