use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zeromap_core::basis::{apply_zero_map_degree, apply_zero_map_with, decompose_mixed, mixed_basis, nondegeneracy};
use zeromap_core::catalog::{Classical, Family, TransformSpec};
use zeromap_core::moments::{jump, measure_kind, moment_closed, ratio, MeasureKind};
use zeromap_core::poly::roots::sturm_count;
use zeromap_core::scalar::{pochhammer, q_pochhammer, q_pochhammer_infinite, QLength};
use zeromap_core::verify::{
    classical_property, delta1_counterexamples, delta1_mu_star, hankel_delta, random_mu_tuple, random_roots,
    random_spec, regularity_check, zero_map_property, Delta1Case,
};
use zeromap_core::{isolate_real_roots, refine_root, AffinePair, Bound, Error, NewtonBasis, Polynomial, Scalar};

fn rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Scalar> {
    (-max_num..=max_num, 1..=max_den).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn positive(max: i64) -> impl Strategy<Value = Scalar> {
    (1..=12i64).prop_flat_map(move |d| (1..=max * d).prop_map(move |n| Scalar::ratio(n, d)))
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn spec_from(family: Family, seed: u64) -> TransformSpec {
    random_spec(family, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn q_values() -> impl Strategy<Value = Scalar> {
    prop::sample::select(vec![Scalar::ratio(1, 4), Scalar::ratio(1, 2), Scalar::ratio(9, 10)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_steps(z in rational(20, 7), k in 0usize..=50) {
        let kk = Scalar::int(k as i64);
        prop_assert_eq!(pochhammer(&z, k + 1), &pochhammer(&z, k) * &(&z + &kk));
    }

    #[test]
    fn q_pochhammer_steps(z in rational(8, 5), q in q_values(), k in 0usize..=30) {
        let next = q_pochhammer(&z, &q, QLength::Finite(k + 1)).unwrap();
        let factor = &Scalar::one() - &(&q.powi(k as i64).unwrap() * &z);
        prop_assert_eq!(next, &q_pochhammer(&z, &q, QLength::Finite(k)).unwrap() * &factor);
    }

    #[test]
    fn q_pochhammer_infinite_within_tail_bound(z in rational(16, 4), q in q_values()) {
        let zf = z.promote(256).unwrap();
        let v = q_pochhammer_infinite(&zf, &q).unwrap();
        let deeper = q_pochhammer(&zf, &q, QLength::Finite(v.depth + 400)).unwrap();
        // |log(deeper / value)| <= b gives |deeper - value| <= |value| (e^b - 1) <= 2 b |value|.
        let allowed = &(&v.value.abs() * &v.log_tail_bound) * &Scalar::int(2);
        let slack = Scalar::float(1e-60, 256).unwrap();
        prop_assert!((&deeper - &v.value).abs() <= &allowed + &slack);
    }

    #[test]
    fn isolation_recovers_distinct_roots(roots in prop::collection::vec(rational(30, 6), 0..=8)) {
        let p = Polynomial::from_roots(&roots);
        let set = isolate_real_roots(&p).unwrap();
        let mut distinct = roots.clone();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        prop_assert_eq!(set.intervals.len(), distinct.len());
        for iv in &set.intervals {
            let inside = distinct.iter().filter(|r| iv.lo <= **r && **r <= iv.hi).count();
            prop_assert_eq!(inside, 1);
        }
    }

    #[test]
    fn sturm_count_matches_direct_count(
        roots in prop::collection::vec(rational(20, 4), 1..=8),
        a in rational(25, 4),
        w in positive(10),
    ) {
        let b = &a + &w;
        let p = Polynomial::from_roots(&roots);
        let mut distinct = roots.clone();
        distinct.sort_by(|x, y| x.partial_cmp(y).unwrap());
        distinct.dedup();
        let direct = distinct.iter().filter(|r| a < **r && **r <= b).count();
        prop_assert_eq!(sturm_count(&p, &Bound::Finite(a), &Bound::Finite(b)).unwrap(), direct);
    }

    #[test]
    fn refinement_keeps_the_root(roots in prop::collection::vec(rational(30, 6), 1..=6)) {
        let p = Polynomial::from_roots(&roots);
        let tol = Scalar::ratio(1, 1 << 20);
        for iv in isolate_real_roots(&p).unwrap().intervals {
            let before: Vec<&Scalar> = roots.iter().filter(|r| iv.lo <= **r && **r <= iv.hi).collect();
            let refined = refine_root(&p, &iv, &tol).unwrap();
            prop_assert!(refined.width() <= tol);
            prop_assert!(before.iter().any(|r| refined.lo <= **r && **r <= refined.hi));
        }
    }

    #[test]
    fn mixed_decomposition_round_trip(f in family(), seed in any::<u64>(), d in prop::collection::vec(rational(9, 5), 1..=9)) {
        let spec = spec_from(f, seed);
        let m = d.len() - 1;
        let pairs = spec.pairs(m);
        let basis = mixed_basis(&pairs, m).unwrap();
        let p = basis.iter().zip(&d).fold(Polynomial::zero(), |acc, (b, c)| acc.add(&b.scale(c)));
        prop_assert_eq!(decompose_mixed(&p, &pairs, Some(m)).unwrap(), d);
    }

    #[test]
    fn zero_map_is_linear(
        f in family(),
        seed in any::<u64>(),
        a in prop::collection::vec(rational(9, 5), 0..=8),
        b in prop::collection::vec(rational(9, 5), 0..=8),
        c in rational(9, 5),
    ) {
        let spec = spec_from(f, seed);
        let m = a.len().max(b.len()).min(spec.max_degree().unwrap_or(8));
        let pa = Polynomial::new(a.into_iter().take(m + 1).collect());
        let pb = Polynomial::new(b.into_iter().take(m + 1).collect());
        let t = |p: &Polynomial| apply_zero_map_degree(p, &spec, m).unwrap();
        prop_assert_eq!(t(&pa.add(&pb)), t(&pa).add(&t(&pb)));
        prop_assert_eq!(t(&pa.scale(&c)), t(&pa).scale(&c));
    }

    #[test]
    fn monomial_pairs_give_the_identity(roots in prop::collection::vec(rational(9, 4), 0..=8)) {
        let p = Polynomial::from_roots(&roots);
        let m = roots.len();
        let pairs = vec![AffinePair::new(Scalar::zero(), Scalar::one(), Scalar::one(), Scalar::zero()); m];
        prop_assert_eq!(apply_zero_map_with(&p, &pairs, &NewtonBasis::monomial(), Some(m)).unwrap(), p);
    }

    #[test]
    fn degenerate_pairs_are_singular(h0 in rational(5, 3), h1 in rational(5, 3), c in rational(5, 3), m in 1usize..=6) {
        prop_assume!(!(h0.is_zero() && h1.is_zero()));
        let pair = AffinePair::new(&c * &h0, &c * &h1, h0.clone(), h1.clone());
        prop_assert!(nondegeneracy(&pair).is_zero());
        let p = Polynomial::from_ints(&[1, 1]);
        let r = decompose_mixed(&p, &vec![pair; m], Some(m));
        prop_assert!(matches!(r, Err(Error::DegenerateBasis)));
    }

    #[test]
    fn catalog_pairs_are_nondegenerate(f in family(), seed in any::<u64>()) {
        let spec = spec_from(f, seed);
        let top = spec.max_degree().map_or(64, |n| n.min(64));
        for k in 0..top {
            prop_assert!(!nondegeneracy(&spec.pair(k)).is_zero(), "{} k = {k}", f);
        }
    }

    #[test]
    fn closed_moments_chain(f in family(), seed in any::<u64>(), pick in any::<u64>()) {
        let spec = spec_from(f, seed);
        let mu = random_mu_tuple(&spec, 1, &mut ChaCha8Rng::seed_from_u64(pick)).remove(0);
        for k in 0..=16 {
            let lhs = &moment_closed(&spec, k, &mu).unwrap() * &ratio(&spec, k, &mu).unwrap();
            prop_assert_eq!(lhs, moment_closed(&spec, k + 1, &mu).unwrap());
        }
    }

    #[test]
    fn jumps_are_nonnegative(f in family(), seed in any::<u64>()) {
        let spec = spec_from(f, seed);
        prop_assume!(matches!(measure_kind(&spec), MeasureKind::Atomic { .. }));
        for j in 0..=40 {
            prop_assert!(!jump(&spec, j).unwrap().is_negative(), "{} j = {j}", f);
        }
    }

    #[test]
    fn zero_map_property_holds(f in family(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(f, &mut rng).unwrap();
        let roots = random_roots(&spec, &mut rng);
        let report = zero_map_property(&spec, &roots).unwrap();
        prop_assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn regularity_determinants_are_nonzero(f in family(), seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(f, &mut rng).unwrap();
        let mus = random_mu_tuple(&spec, n, &mut rng);
        prop_assert!(regularity_check(&spec, &mus).unwrap().passed());
    }

    #[test]
    fn delta1_matches_formula(
        alpha0 in rational(6, 4),
        gamma0 in rational(6, 4),
        sigma in rational(6, 4),
        mu in positive(40),
        n0_eq_1 in any::<bool>(),
    ) {
        let case = if n0_eq_1 { Delta1Case::N0Eq1 } else { Delta1Case::N0Ge2 };
        let h0 = &gamma0 + &mu;
        prop_assume!(!h0.is_zero() && !(&h0 + &Scalar::one()).is_zero());
        let (direct, formula) = delta1_counterexamples(&alpha0, &gamma0, &sigma, &mu, case).unwrap();
        prop_assert_eq!(direct, formula);
    }

    #[test]
    fn delta1_negative_past_mu_star(
        alpha0 in rational(6, 4),
        gamma0 in rational(6, 4),
        sigma in rational(6, 4),
        n0_eq_1 in any::<bool>(),
        extra in prop::collection::vec(positive(1000), 1..=8),
    ) {
        prop_assume!(!alpha0.is_zero());
        let case = if n0_eq_1 { Delta1Case::N0Eq1 } else { Delta1Case::N0Ge2 };
        // Negativity in the n0 = 1 case needs alpha0 (alpha0 + sigma h0) > 0 for large h0.
        prop_assume!(case == Delta1Case::N0Ge2 || !(&alpha0 * &sigma).is_negative());
        let start = &gamma0.abs() + &Scalar::one();
        let mu_star = delta1_mu_star(&alpha0, &gamma0, &sigma, case, &start).unwrap();
        prop_assert!(mu_star.is_some());
        let mu_star = mu_star.unwrap();
        for e in extra {
            let mu = &mu_star + &e;
            let (direct, _) = delta1_counterexamples(&alpha0, &gamma0, &sigma, &mu, case).unwrap();
            prop_assert!(direct.is_negative(), "mu = {mu}");
        }
    }

    #[test]
    fn derivative_multiplier_keeps_real_zeros(roots in prop::collection::vec(rational(20, 5), 1..=8)) {
        prop_assert!(classical_property(Classical::DerivativeMultiplier, &roots).unwrap().passed());
    }

    #[test]
    fn inverse_factorial_keeps_positive_zeros(roots in prop::collection::vec(positive(10), 1..=8)) {
        prop_assert!(classical_property(Classical::InverseFactorial, &roots).unwrap().passed());
    }

    #[test]
    fn hankel_of_laguerre_is_positive(mu in positive(6), n in 0usize..=5) {
        prop_assert!(hankel_delta(|k| pochhammer(&mu, k), n).is_positive());
    }
}
