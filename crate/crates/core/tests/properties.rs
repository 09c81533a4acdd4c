//! Property tests for the algebraic invariants that admit random inputs.

use mggs::{perm_apply, FpMat, FpVec, MggsGroup, Portrait, Unit, Word};
use proptest::prelude::*;

fn arb_prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7), Just(13)]
}

fn arb_unit(p: u64) -> impl Strategy<Value = u64> {
    1..p
}

fn arb_vec(p: u64, len: usize) -> impl Strategy<Value = FpVec> {
    proptest::collection::vec(0..p, len).prop_map(move |v| FpVec::from_raw(p, v))
}

prop_compose! {
    fn arb_perm_input()(p in arb_prime())(
        p in Just(p),
        v in arb_vec(p, (p - 1) as usize),
        u1 in arb_unit(p),
        u2 in arb_unit(p),
    ) -> (u64, FpVec, u64, u64) {
        (p, v, u1, u2)
    }
}

proptest! {
    #[test]
    fn perm_apply_is_multiplicative((p, v, u1, u2) in arb_perm_input()) {
        let a = perm_apply(
            &perm_apply(&v, Unit::new(u1 as i64, p).unwrap()).unwrap(),
            Unit::new(u2 as i64, p).unwrap(),
        )
        .unwrap();
        let b = perm_apply(&v, Unit::new((u1 * u2 % p) as i64, p).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

prop_compose! {
    fn arb_matrix()(p in arb_prime())(
        p in Just(p),
        rows in proptest::collection::vec(
            proptest::collection::vec(0..p, 4),
            1..4,
        ),
    ) -> FpMat {
        FpMat::new(p, rows.into_iter().map(|r| FpVec::from_raw(p, r)).collect()).unwrap()
    }
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in arb_matrix()) {
        let r = m.rref();
        prop_assert_eq!(r.rref(), r);
    }

    #[test]
    fn rref_rows_stay_in_row_space(m in arb_matrix()) {
        for row in m.rref().rows() {
            prop_assert!(m.contains_in_row_space(row).unwrap());
        }
    }
}

/// Random words over the Gupta-Sidki generators for p = 3.
fn arb_gs3_word() -> impl Strategy<Value = Word> {
    let syllable = prop_oneof![
        (1..3i64).prop_map(|k| Word::a(3, 1, k)),
        (1..3i64).prop_map(|k| Word::b(3, 1, FpVec::new(3, [k]))),
    ];
    proptest::collection::vec(syllable, 0..8).prop_map(|parts| {
        let mut w = Word::empty(3, 1);
        for part in parts {
            w = w.concat(&part).unwrap();
        }
        w
    })
}

fn gs3() -> MggsGroup {
    MggsGroup::new(3, vec![FpVec::new(3, [1, 2])]).unwrap()
}

proptest! {
    #[test]
    fn word_reduction_is_idempotent(w in arb_gs3_word()) {
        prop_assert_eq!(w.reduce(), w);
    }

    #[test]
    fn evaluation_is_a_homomorphism(w1 in arb_gs3_word(), w2 in arb_gs3_word()) {
        let g = gs3();
        let lhs = w1.concat(&w2).unwrap().evaluate(&g, 3).unwrap();
        let rhs = w1
            .evaluate(&g, 3)
            .unwrap()
            .compose(&w2.evaluate(&g, 3).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn word_inverse_evaluates_to_portrait_inverse(w in arb_gs3_word()) {
        let g = gs3();
        prop_assert_eq!(
            w.inverse().evaluate(&g, 3).unwrap(),
            w.evaluate(&g, 3).unwrap().inverse()
        );
    }

    #[test]
    fn section_words_match_portrait_sections(w in arb_gs3_word()) {
        let g = gs3();
        let total = w.total_a_exponent();
        let stab = w.concat(&Word::a(3, 1, -(total as i64))).unwrap();
        let sections = stab.sections_of_word(&g).unwrap();
        let portrait = stab.evaluate(&g, 3).unwrap();
        for k in 0..3u64 {
            prop_assert_eq!(
                sections[k as usize].evaluate(&g, 2).unwrap(),
                portrait.section(&[k]).unwrap()
            );
        }
    }

    #[test]
    fn trivial_abelianization_is_necessary_for_triviality(w in arb_gs3_word()) {
        // Whenever a word evaluates to the identity at depth >= 2 its image
        // in G/G' vanishes; the converse is not asserted.
        let g = gs3();
        if w.evaluate(&g, 2).unwrap().is_identity() {
            let (a_exp, b_vec) = w.abelianize().unwrap();
            prop_assert_eq!(a_exp, 0);
            prop_assert!(b_vec.is_zero());
        }
    }

    #[test]
    fn portrait_serialization_round_trips(w in arb_gs3_word()) {
        let g = gs3();
        let portrait = w.evaluate(&g, 3).unwrap();
        let json = serde_json::to_string(&portrait).unwrap();
        let back: Portrait = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, portrait);
    }

    #[test]
    fn apply_preserves_layers(w in arb_gs3_word(), v in proptest::collection::vec(0..3u64, 0..4)) {
        let g = gs3();
        let portrait = w.evaluate(&g, 4).unwrap();
        let image = portrait.apply(&v).unwrap();
        prop_assert_eq!(image.len(), v.len());
    }
}
