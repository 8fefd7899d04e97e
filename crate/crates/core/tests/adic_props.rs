mod common;

use proptest::prelude::*;
use rauzy_core::adic::{
    balance, derivation_for_length, factor_gap_check, is_primitive_sequence, limit_letter_chains,
    limit_point_prefix, telescoping_decomposition, DirectiveSequence, SubstitutionSet,
};
use rauzy_core::subst::{abelianize, Alphabet, Substitution};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn telescoping_identity_random_prefixes(seed in any::<u64>(), len in 1usize..3000) {
        let set = common::tribonacci();
        let seq = DirectiveSequence::uniform_random(seed, 2);
        let u = limit_point_prefix(&seq, &set, len as u64, 0).unwrap();
        let pieces = telescoping_decomposition(&seq, &set, &u[..len]).unwrap();
        // Independent recomputation of Σ M_0⋯M_{j-1} l(P_j).
        let subs = seq.take(pieces[0].level + 1).unwrap();
        let mut total = vec![0i64; 3];
        for p in &pieces {
            let mut v = abelianize(&p.prefix, 3).unwrap();
            for j in (0..p.level).rev() {
                v = set.matrix(subs[j]).checked_mul_vec(&v.0).unwrap();
            }
            for (t, x) in total.iter_mut().zip(&v.0) {
                *t += x;
            }
        }
        prop_assert_eq!(total, abelianize(&u[..len], 3).unwrap().0);
    }

    #[test]
    fn limit_prefixes_are_nested(seed in any::<u64>()) {
        let set = common::tribonacci();
        let seq = DirectiveSequence::uniform_random(seed, 2);
        let short = limit_point_prefix(&seq, &set, 100, 0).unwrap();
        let long = limit_point_prefix(&seq, &set, 5000, 0).unwrap();
        prop_assert!(short.is_prefix_of(&long));
    }
}

#[test]
fn recurrence_and_balance_for_tribonacci_pair() {
    let set = common::tribonacci();
    for spec in ["(1)", "(2)", "random:3", "random:99"] {
        let seq = DirectiveSequence::parse(spec, 2).unwrap();
        let u = limit_point_prefix(&seq, &set, 20_000, 0).unwrap();
        let u = &u[..20_000];
        for k in 1..=5 {
            let r = factor_gap_check(u, k).unwrap();
            assert!(r.max_gap <= u.len() / 2, "{spec} k={k} gap {}", r.max_gap);
        }
        let b = balance(u, 3, 10).unwrap();
        assert!(b.c >= 1);
    }
}

#[test]
fn factor_sharing_between_limit_points() {
    // Constant flip has two limit points with the same language.
    let ab = Alphabet::new("ab").unwrap();
    let flip = Substitution::from_strs("flip", &ab, &["ba", "a"]).unwrap();
    let set = SubstitutionSet::new(ab, vec![flip]).unwrap();
    let seq = DirectiveSequence::constant(0);
    assert_eq!(limit_letter_chains(&seq, &set, 10).unwrap().len(), 2);
    let u = limit_point_prefix(&seq, &set, 10_000, 0).unwrap();
    let v = limit_point_prefix(&seq, &set, 100_000, 1).unwrap();
    let v_factors: std::collections::HashSet<&[u8]> = (1..=4).flat_map(|k| v.windows(k)).collect();
    for k in 1..=4 {
        for f in u[..10_000].windows(k) {
            assert!(v_factors.contains(f));
        }
    }
}

#[test]
fn primitive_horizon_and_lengths() {
    let st = common::sturmian();
    let alt = DirectiveSequence::parse("(12)", 2).unwrap();
    assert_eq!(is_primitive_sequence(&alt, &st, 0, 5).unwrap(), Some(1));
    let der = derivation_for_length(&alt, &st, 1000, 0).unwrap();
    assert!(der.len() >= 1000);
    assert_eq!(der.word().len() as u64, der.len());
}
