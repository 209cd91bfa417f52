mod common;

use common::*;
use fixclose_core::closure::{
    audit, auto_fixed_verdict, endo_closure_upper, endo_fixed_verdict, reduce_witnesses,
};
use fixclose_core::fixpoints::{
    exact_fix, exact_fix_inner, find_retraction, fix_approx, fixed_words, is_retraction,
    reduce_family, restriction, stable_image,
};
use fixclose_core::{Answer, Budget, Morphism, SubgroupGraph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fix_approx_is_sound_and_monotone(m in morphism(2, 3), l in 2usize..6) {
        let small = fix_approx(std::slice::from_ref(&m), l, 10, 8).unwrap();
        let large = fix_approx(std::slice::from_ref(&m), l + 1, 10, 8).unwrap();
        prop_assert!(large.subgroup.contains_subgroup(&small.subgroup));
        for b in small.subgroup.basis() {
            prop_assert_eq!(m.apply(&b).unwrap(), b);
        }
        if small.exact {
            prop_assert!(small.subgroup.rank() <= 2);
        }
    }

    #[test]
    fn fixed_words_are_fixed_and_complete(m in morphism(2, 3)) {
        let words = fixed_words(&m, 5, 10).unwrap();
        prop_assert!(words.windows(2).all(|p| p[0] < p[1]));
        for x in &words {
            prop_assert_eq!(&m.apply(x).unwrap(), x);
        }
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(m.images().len() as u64);
        for _ in 0..50 {
            let len = rand::Rng::gen_range(&mut rng, 0..=5);
            let x = random_word(&mut rng, 2, len);
            prop_assert_eq!(m.apply(&x).unwrap() == x, words.contains(&x));
        }
    }

    #[test]
    fn exact_rules_agree_with_bounded_enumeration(m in morphism(2, 2)) {
        if let Some(e) = exact_fix(&m, 8).unwrap() {
            prop_assert!(e.subgroup.rank() <= 2);
            for b in e.subgroup.basis() {
                prop_assert_eq!(m.apply(&b).unwrap(), b);
            }
            for x in fixed_words(&m, 6, 10).unwrap() {
                prop_assert!(e.subgroup.contains(&x));
            }
        }
    }

    #[test]
    fn inner_fix_depends_only_on_root(x in nonempty_word(2, 4), k in 1i64..4) {
        let p = x.pow(k);
        prop_assume!(p.is_cyclically_reduced());
        let (root, _) = p.root().unwrap();
        prop_assert_eq!(exact_fix_inner(f(2), &p).unwrap(), exact_fix_inner(f(2), &root).unwrap());
    }

    #[test]
    fn stabilized_images_restrict_to_automorphisms(m in morphism(2, 2)) {
        let s = stable_image(&m, 6);
        if s.stabilized && !s.subgroup.is_trivial() {
            prop_assert_eq!(s.subgroup.image(&m).unwrap(), s.subgroup.clone());
            prop_assert!(restriction(&m, &s.subgroup).unwrap().is_automorphism());
            let bound = m.power(s.iterations.max(1)).max_image_len().max(1);
            if let Some(rho) = find_retraction(&s.subgroup, bound.min(8), 200_000).found() {
                prop_assert!(is_retraction(rho, &s.subgroup));
            }
        }
    }

    #[test]
    fn reduce_family_stays_within_twice_the_rank(ms in prop::collection::vec(morphism(2, 2), 1..6)) {
        let r = reduce_family(&ms, 4, 10).unwrap();
        prop_assert!(!r.members.is_empty());
        prop_assert!(r.members.len() <= 4 || r.warning);
        let all: Vec<_> = fixclose_core::fixpoints::fixed_words_all(f(2), &ms, 4, 10).unwrap();
        let kept = fixclose_core::fixpoints::fixed_words_all(f(2), &r.members, 4, 10).unwrap();
        prop_assert_eq!(all, kept);
    }

    #[test]
    fn closure_sandwich_and_consistency(g in gens(2, 1..=2, 3)) {
        let h = SubgroupGraph::from_generators(f(2), &g).unwrap();
        prop_assume!(h.vertex_count() <= 6);
        let budget = Budget::default();
        let upper = endo_closure_upper(&h, &budget).unwrap();
        prop_assert!(upper.subgroup.contains_subgroup(&h));
        prop_assert!(upper.subgroup.rank() <= 2);
        let auto = auto_fixed_verdict(&h, &budget);
        let endo = endo_fixed_verdict(&h, &budget);
        if auto.answer == Answer::CertifiedYes {
            prop_assert_ne!(endo.answer, Answer::CertifiedNo);
        }
        if endo.answer == Answer::CertifiedNo {
            prop_assert_ne!(auto.answer, Answer::CertifiedYes);
        }
        for v in [&auto, &endo] {
            prop_assert!(audit(v).is_ok(), "{:?}", audit(v));
            let thin = reduce_witnesses(v, &budget);
            prop_assert!(audit(&thin).is_ok());
            if thin.answer == Answer::CertifiedYes {
                prop_assert!(thin.witnesses.len() <= 4);
            }
        }
    }
}

#[test]
fn example_family_fixes_h() {
    let psi = Morphism::new(f(3), vec![w("a"), w("baccbCCBA"), w("1")]).unwrap();
    let phi = Morphism::new(f(3), vec![w("a"), w("b"), w("cb")]).unwrap();
    let d = w("baccbCCBA");
    for n in 0..4 {
        let m = phi.power(n).compose(&psi).unwrap();
        assert_eq!(m.apply(&d).unwrap(), d);
        assert_eq!(m.apply(&w("a")).unwrap(), w("a"));
    }
}

#[test]
fn verdicts_are_deterministic() {
    let budget = Budget::default();
    for gens in [&["aa"][..], &["a"], &["ab", "ba"], &["aab"]] {
        let h = sub(2, gens);
        assert_eq!(
            auto_fixed_verdict(&h, &budget),
            auto_fixed_verdict(&h, &budget)
        );
        assert_eq!(
            endo_fixed_verdict(&h, &budget),
            endo_fixed_verdict(&h, &budget)
        );
    }
}
