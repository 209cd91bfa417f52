mod common;

use common::*;
use fixclose_core::whitehead::invert;
use fixclose_core::{Letter, SubgroupGraph, WhiteheadBudget, Word};
use proptest::prelude::*;

fn raw_letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..2 * rank).prop_map(Letter::from_code), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_is_idempotent(raw in raw_letters(3, 30)) {
        let a = f(3);
        let once = a.reduce(&raw).unwrap();
        prop_assert_eq!(a.reduce(once.letters()).unwrap(), once.clone());
        prop_assert!(once.letters().windows(2).all(|p| p[0] != p[1].inverse()));
    }

    #[test]
    fn apply_respects_composition(m1 in morphism(3, 4), m2 in morphism(3, 4), x in word(3, 8)) {
        let composed = m1.compose(&m2).unwrap();
        prop_assert_eq!(composed.apply(&x).unwrap(), m2.apply(&m1.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn apply_is_a_homomorphism(m in morphism(2, 4), u in word(2, 8), v in word(2, 8)) {
        prop_assert_eq!(m.apply(&u.mul(&v)).unwrap(), m.apply(&u).unwrap().mul(&m.apply(&v).unwrap()));
    }

    #[test]
    fn root_reconstructs_input(x in nonempty_word(2, 6), k in 1usize..4) {
        let p = x.pow(k as i64);
        let (u, j) = p.root().unwrap();
        prop_assert_eq!(u.pow(j as i64), p.clone());
        prop_assert!(j >= 1);
        let (r, e) = p.element_root().unwrap();
        prop_assert_eq!(r.pow(e as i64), p);
    }

    #[test]
    fn automorphisms_have_inverses(codes in prop::collection::vec(0usize..20, 1..6)) {
        let a = f(2);
        let autos = fixclose_core::whitehead::whitehead_autos(a);
        let mut m = fixclose_core::Morphism::identity(a);
        for c in codes {
            m = m.compose(&autos[c].realized).unwrap();
        }
        prop_assert!(m.is_automorphism());
        let budget = WhiteheadBudget::default();
        if let Ok(Some(inv)) = invert(&m, &budget) {
            prop_assert!(m.compose(&inv).unwrap().is_identity());
        }
    }

    #[test]
    fn membership_matches_oracles(g in gens(2, 1..=3, 5), x in word(2, 10)) {
        let h = SubgroupGraph::from_generators(f(2), &g).unwrap();
        prop_assert_eq!(h.contains(&x), naive_contains(&g, &x));
        for p in products(&g, 3) {
            prop_assert!(h.contains(&p));
        }
    }

    #[test]
    fn basis_round_trips(g in gens(3, 0..=3, 6)) {
        let h = SubgroupGraph::from_generators(f(3), &g).unwrap();
        let basis = h.basis();
        prop_assert_eq!(basis.len(), h.rank());
        prop_assert_eq!(SubgroupGraph::from_generators(f(3), &basis).unwrap(), h.clone());
        for x in &g {
            prop_assert_eq!(h.coordinates(x).unwrap().substitute(&basis), x.clone());
        }
    }

    #[test]
    fn canonical_form_ignores_generating_set(g in gens(2, 2..=3, 5), i in 0usize..3, j in 0usize..3, flip in any::<bool>()) {
        let h = SubgroupGraph::from_generators(f(2), &g).unwrap();
        let (i, j) = (i % g.len(), j % g.len());
        let mut moved = g.clone();
        if i != j {
            moved[i] = if flip { g[i].mul(&g[j]) } else { g[j].inverse().mul(&g[i]) };
        }
        moved.reverse();
        moved.push(g[0].mul(&g[g.len() - 1]));
        prop_assert_eq!(SubgroupGraph::from_generators(f(2), &moved).unwrap(), h);
    }

    #[test]
    fn intersection_is_pullback(g1 in gens(2, 1..=3, 5), g2 in gens(2, 1..=3, 5), x in word(2, 10)) {
        let h = SubgroupGraph::from_generators(f(2), &g1).unwrap();
        let k = SubgroupGraph::from_generators(f(2), &g2).unwrap();
        let m = h.intersect(&k).unwrap();
        prop_assert_eq!(m.contains(&x), h.contains(&x) && k.contains(&x));
        let reduced = |r: usize| r.saturating_sub(1);
        prop_assert!(reduced(m.rank()) <= 2 * reduced(h.rank()) * reduced(k.rank()));
        for b in m.basis() {
            prop_assert!(h.contains(&b) && k.contains(&b));
        }
    }

    #[test]
    fn rewriting_substitutes_back(g in gens(2, 1..=3, 4), picks in prop::collection::vec((0usize..3, -2i64..3), 1..3)) {
        let k = SubgroupGraph::from_generators(f(2), &g).unwrap();
        let kb = k.basis();
        let sub_gens: Vec<Word> = picks.iter().map(|&(i, e)| kb[i % kb.len()].pow(e)).collect();
        let h = SubgroupGraph::from_generators(f(2), &sub_gens).unwrap();
        let coords = h.rewrite_in(&k).unwrap();
        let back: Vec<Word> = coords.iter().map(|c| c.substitute(&kb)).collect();
        prop_assert_eq!(back, h.basis());
    }
}

#[test]
fn rewrite_outside_reports_the_word() {
    let err = sub(2, &["a"])
        .rewrite_in(&sub(2, &["aa", "b"]))
        .unwrap_err();
    assert_eq!(err, fixclose_core::Error::NotASubgroup { word: w("a") });
}

#[test]
fn image_of_whole_group_under_psi() {
    let psi = fixclose_core::Morphism::new(f(3), vec![w("a"), w("baccbCCBA"), w("1")]).unwrap();
    assert_eq!(
        SubgroupGraph::whole(f(3)).image(&psi).unwrap(),
        sub(3, &["a", "baccbCCBA"])
    );
    assert_eq!(
        sub(2, &["a"])
            .image(&fixclose_core::Morphism::new(f(2), vec![w("aa"), w("b")]).unwrap())
            .unwrap(),
        sub(2, &["aa"])
    );
}
