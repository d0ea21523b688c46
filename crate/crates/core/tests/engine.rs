mod common;

use common::field_and_polys;
use ncalg::centrality::{derive_univariate, propagate_value, CentralCandidate, UnivariateForm};
use ncalg::classifier::{classify_map, factor_semi_inner, tabulate, verify_category_automorphism, Verdict};
use ncalg::morphisms::{
    commutator_ideal_member, compose, conjugate_morphism, kernel_intersection_probe, ProbeOutcome, TwistedMorphism,
};
use ncalg::{random, Field, FieldAut, SemiLinearMap};
use proptest::prelude::*;

fn aut_fields() -> Vec<(Field, usize)> {
    let f4 = Field::gf(4).unwrap();
    let f9 = Field::gf(9).unwrap();
    vec![(Field::rationals(), 0), (f4.clone(), 0), (f4, 1), (Field::prime(5).unwrap(), 0), (f9, 1)]
}

fn semilinear(seed: u64, n: usize, which: usize, mirror: bool) -> SemiLinearMap {
    let (f, e) = aut_fields()[which].clone();
    let mut rng = random::rng(seed);
    random::semilinear(&mut rng, &f, n, FieldAut::new(&f, e).unwrap(), mirror)
}

fn semilinear_mixed(seed: u64, n: usize, which: usize, mirror: bool) -> SemiLinearMap {
    let (f, e) = aut_fields()[which].clone();
    let mut rng = random::rng(seed);
    random::semilinear_mixed(&mut rng, &f, n, FieldAut::new(&f, e).unwrap(), mirror)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn substitution_is_a_homomorphism(seed in any::<u64>(), (f, ps) in field_and_polys(2, 2, 3, 4)) {
        let mut rng = random::rng(seed);
        let s = random::morphism(&mut rng, &f, 2, 3, 2, 3);
        let (p, q) = (&ps[0], &ps[1]);
        prop_assert_eq!(s.apply(&(p * q)).unwrap(), &s.apply(p).unwrap() * &s.apply(q).unwrap());
        prop_assert_eq!(s.apply(&(p + q)).unwrap(), &s.apply(p).unwrap() + &s.apply(q).unwrap());
        prop_assert!(s.apply(&ncalg::NcPoly::one(&f, 2)).unwrap().is_one());
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), (f, ps) in field_and_polys(1, 1, 3, 3)) {
        let mut rng = random::rng(seed);
        let a = random::morphism(&mut rng, &f, 1, 2, 2, 2);
        let b = random::morphism(&mut rng, &f, 2, 2, 2, 2);
        let c = random::morphism(&mut rng, &f, 2, 1, 2, 2);
        let left = compose(&compose(&c, &b).unwrap(), &a).unwrap();
        let right = compose(&c, &compose(&b, &a).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let p = &ps[0];
        prop_assert_eq!(left.apply(p).unwrap(), c.apply(&b.apply(&a.apply(p).unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn semilinear_inverse_round_trip(seed in any::<u64>(), which in 0..5usize, mirror in any::<bool>(), n in 1..=3usize) {
        let mu = semilinear_mixed(seed, n, which, mirror);
        let f = mu.field().clone();
        let mut rng = random::rng(seed ^ 0x5eed);
        let p = random::poly(&mut rng, &f, n, 3, 4);
        let q = random::poly(&mut rng, &f, n, 3, 4);
        let inv = mu.inverse();
        prop_assert_eq!(inv.apply(&mu.apply(&p).unwrap()).unwrap(), p.clone());
        prop_assert_eq!(mu.apply(&inv.apply(&p).unwrap()).unwrap(), p.clone());
        let product = mu.apply(&(&p * &q)).unwrap();
        let (mp, mq) = (mu.apply(&p).unwrap(), mu.apply(&q).unwrap());
        prop_assert_eq!(product, if mirror { &mq * &mp } else { &mp * &mq });
        let c = random::scalar(&mut rng, &f);
        prop_assert_eq!(mu.apply(&p.scalar_mul(&c).unwrap()).unwrap(), mp.scalar_mul(&mu.alpha().apply(&c).unwrap()).unwrap());
    }

    #[test]
    fn conjugation_is_functorial(seed in any::<u64>(), which in 0..5usize, mirror in any::<bool>()) {
        let family: Vec<SemiLinearMap> = (1..=3).map(|n| semilinear(seed.wrapping_add(n as u64), n, which, mirror)).collect();
        let f = family[0].field().clone();
        let mut rng = random::rng(seed);
        let s = random::morphism(&mut rng, &f, 1, 2, 2, 2);
        let t = random::morphism(&mut rng, &f, 2, 3, 2, 2);
        let s_tau = conjugate_morphism(&s, &family[0], &family[1]).unwrap();
        let t_tau = conjugate_morphism(&t, &family[1], &family[2]).unwrap();
        let ts_tau = conjugate_morphism(&compose(&t, &s).unwrap(), &family[0], &family[2]).unwrap();
        prop_assert!(s_tau.is_homomorphism() && t_tau.is_homomorphism());
        prop_assert!(ts_tau.same_map(&t_tau.compose(&s_tau).unwrap()));
        // s^τ agrees with μ_j ∘ s ∘ μ_i⁻¹ on arbitrary inputs
        let p = random::poly(&mut rng, &f, 1, 3, 3);
        let direct = family[1].apply(&s.apply(&family[0].inverse().apply(&p).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(s_tau.apply(&p).unwrap(), direct);
        let id = ncalg::Morphism::identity(&f, 2);
        prop_assert!(conjugate_morphism(&id, &family[1], &family[1]).unwrap().same_map(&TwistedMorphism::from_morphism(&id)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn classification_recovers_the_mirror_flag(seed in any::<u64>(), which in 0..5usize, mirror in any::<bool>()) {
        let family: Vec<_> = (1..=2).map(|n| tabulate(&semilinear(seed.wrapping_mul(n as u64 + 7), n, which, mirror), 4)).collect();
        let alpha = family[1].alpha().clone();
        let reduced = family[1].twist(&alpha.inverse()).unwrap();
        let r = classify_map(&reduced).unwrap();
        prop_assert_eq!(r.verdict, if mirror { Verdict::AntiHom } else { Verdict::Hom });
        let fac = factor_semi_inner(&family).unwrap();
        prop_assert_eq!(fac.mirror, mirror);
        prop_assert_eq!(&fac.alpha, &alpha);
        prop_assert!(fac.verified);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn substitution_commutes_with_endomorphisms(seed in any::<u64>(), which in 0..5usize) {
        let (f, _) = aut_fields()[which].clone();
        let mut rng = random::rng(seed);
        let r = UnivariateForm::new(random::univariate(&mut rng, &f, 3)).unwrap();
        let u = random::poly(&mut rng, &f, 2, 2, 3);
        let s = random::morphism(&mut rng, &f, 2, 2, 2, 2);
        prop_assert_eq!(propagate_value(&r, &s.apply(&u).unwrap()), s.apply(&propagate_value(&r, &u)).unwrap());
    }

    #[test]
    fn derivation_inverts_substitution(seed in any::<u64>(), which in 0..5usize, n in 2..=4usize) {
        let (f, _) = aut_fields()[which].clone();
        let mut rng = random::rng(seed);
        let r = UnivariateForm::new(random::univariate(&mut rng, &f, 3)).unwrap();
        let images = (1..=n).map(|i| propagate_value(&r, &ncalg::NcPoly::var(&f, n, i))).collect();
        prop_assert_eq!(derive_univariate(&CentralCandidate::new(&f, images).unwrap()).unwrap(), r);
    }

    #[test]
    fn commutator_members_are_killed(seed in any::<u64>(), (f, ps) in field_and_polys(3, 2, 2, 3)) {
        let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
        let member = &(a * &(&(b * c) - &(c * b))) * c;
        prop_assert!(commutator_ideal_member(&member));
        if f.order().is_none_or(|q| q >= 16) {
            prop_assert_eq!(kernel_intersection_probe(&member, 5, 2, seed).unwrap(), ProbeOutcome::AllKilled);
        }
    }
}

#[test]
fn category_check_on_uniform_families() {
    for which in 0..5 {
        for mirror in [false, true] {
            let family: Vec<_> = (1..=3).map(|n| semilinear(n as u64, n, which, mirror)).collect();
            let r = verify_category_automorphism(&family, 15, 2, which as u64).unwrap();
            assert!(r.passed(), "which={which} mirror={mirror}: {:?}", r.violations);
            assert_eq!(r.identity_checks, 3);
            assert_eq!(r.composition_checks, 15);
        }
    }
}
